"""Command line front door.  Every subcommand maps input files to output text.

Exit codes: 0 on success, 2 on domain errors, 1 on parse errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import io
from .errors import AarhusError, ParseError


def _labels(text):
    return [x for x in text.split(",") if x] if text else None


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path):
    try:
        return io.read(path)
    except OSError as exc:
        raise ParseError(0, f"a readable file ({exc.strerror}: {path})") from None


def _sum(path):
    """Read a graded sum; a lone diagram file counts as that diagram with coefficient 1."""
    from .diagrams import Diagram
    from .gradedsum import GradedSum
    v = _read(path)
    if isinstance(v, Diagram):
        return GradedSum.of(v)
    if not isinstance(v, GradedSum):
        raise AarhusError(f"{path}: expected a diagram or a graded sum")
    return v


def _diagram(path):
    from .diagrams import Diagram
    v = _read(path)
    if isinstance(v, Diagram):
        return v
    if len(getattr(v, "terms", ())) == 1:
        return next(iter(v.terms))
    raise AarhusError(f"{path}: expected a single diagram")


def _truncate(args, s=None):
    if args.truncate is not None:
        return args.truncate
    if s is not None and s.max_degree is not None:
        return s.max_degree
    raise AarhusError("a truncation degree is required (--truncate N)")


def _lie(name):
    from .weights import PRESETS
    if name in PRESETS:
        return PRESETS[name]()
    return _read(name)


# -- subcommands -------------------------------------------------------------------

def cmd_dims(args):
    from .relations import dimension, primitive_dimension
    from .enumerate import DEFAULT_CONFIG as cfg
    labels = _labels(args.labels) or []
    for m in range(args.max_degree + 1):
        if args.primitives:
            if args.space != "Aempty":
                raise AarhusError("primitive dimensions are defined for Aempty")
            print(primitive_dimension(m, cfg))
        else:
            print(dimension(args.space, m, labels, cfg))


def cmd_reduce(args):
    from .relations import normal_form
    s = _sum(args.inp)
    fams = {d.space_family() for d in s.terms if d.n}
    space = args.space or (fams.pop() if len(fams) == 1 else "Aempty")
    labels = _labels(args.labels) or sorted({k[1] for d in s.terms for k in d.kinds
                                             if k[0] in ("l", "a")})
    _emit(args, io.serialize(normal_form(s, space, labels), space=space, labels=labels))


def cmd_chi(args):
    from .maps import chi
    s = _sum(args.inp)
    labels = _labels(args.labels)
    out = chi(s, labels)
    _emit(args, io.serialize(out, space="AupX", labels=labels))


def cmd_sigma(args):
    from .maps import sigma
    s = _sum(args.inp)
    labels = _labels(args.labels)
    _emit(args, io.serialize(sigma(s, labels), space="BX", labels=labels))


def cmd_cable(args):
    from .maps import cable_delta
    lines = _labels(args.to)
    _emit(args, io.serialize(cable_delta(_sum(args.inp), lines), space="AupX", labels=lines))


def cmd_zcheck(args):
    from .maps import assemble_zcheck
    lines = _labels(args.labels)
    out = assemble_zcheck(_sum(args.z), _sum(args.nu), lines)
    _emit(args, io.serialize(out, space="AupX", labels=lines))


def cmd_integrate(args):
    from .gaussian import integrate_fg, split_gaussian
    g = _sum(args.inp)
    pg = split_gaussian(g, _labels(args.labels))
    _emit(args, io.serialize(integrate_fg(pg, _truncate(args, g)), space="Aempty", labels=[]))


def cmd_aarhus0(args):
    from .gaussian import aarhus0
    z = _sum(args.z)
    out = aarhus0(z, _truncate(args, z), _labels(args.labels))
    _emit(args, io.serialize(out, space="Aempty", labels=[]))


def cmd_aarhus(args):
    from .gaussian import aarhus
    z = _sum(args.z)
    linking = _read(args.matrix) if args.matrix else None
    out = aarhus(z, _sum(args.uplus), _sum(args.uminus), _truncate(args, z),
                 linking, _labels(args.labels))
    _emit(args, io.serialize(out, space="Aempty", labels=[]))


def cmd_signature(args):
    from .gaussian import signature
    sig = signature(_read(args.matrix))
    _emit(args, f"{sig.sigma_plus} {sig.sigma_minus}\n")


def cmd_weight(args):
    from .weights import tg_closed
    _emit(args, f"{tg_closed(_lie(args.lie), _sum(args.inp))}\n")


def cmd_wickcheck(args):
    """Compare both sides of the weight/integration square on G and K random substitutions."""
    from .gaussian import integrate_fg, split_gaussian, substitute_legs
    from .linalg import inverse
    from .errors import SolveFailure
    from .weights import tg_closed, tg_open, wick_pair
    g = _sum(args.inp)
    lie = _lie(args.lie)
    n = _truncate(args, g)
    labels = _labels(args.labels) or sorted({k[1] for d in g.terms for k in d.kinds
                                             if k[0] == "l"})
    rng = random.Random(args.seed)
    inputs = [g]
    while len(inputs) < args.trials + 1:
        a = [[Fraction(rng.randint(-2, 2)) for _ in labels] for _ in labels]
        try:
            inverse(a)
        except SolveFailure:
            continue
        sub = {x: {y: a[i][j] for j, y in enumerate(labels) if a[i][j]}
               for i, x in enumerate(labels)}
        inputs.append(substitute_legs(g, sub))
    bad = 0
    for k, h in enumerate(inputs):
        pg = split_gaussian(h, labels)
        lhs = tg_closed(lie, integrate_fg(pg, n))
        rhs = wick_pair(tg_open(lie, pg.perturbation), pg.covariance, lie, n)
        status = "ok" if lhs == rhs else "MISMATCH"
        bad += lhs != rhs
        print(f"trial {k}: diagram side {lhs}  wick side {rhs}  {status}")
    if bad:
        raise AarhusError(f"{bad} trial(s) disagree")


def cmd_ogl(args):
    from .ogl import ogl_expand
    _emit(args, io.serialize(ogl_expand(_diagram(args.inp))))


# -- parser ----------------------------------------------------------------------------

def build_parser():
    def flags(default):
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--truncate", type=int, default=default, help="working degree N")
        c.add_argument("--cache", default=default, help="quotient basis cache directory")
        c.add_argument("--labels", default=default, help="comma separated labels")
        c.add_argument("--out", default=default, help="output file (default stdout)")
        return c

    # flags may come before or after the subcommand
    common = flags(argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="aarhus", description=__doc__.splitlines()[0],
                                parents=[flags(None)])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("dims", cmd_dims, "dimensions of the quotient spaces per degree")
    sp.add_argument("--space", choices=["Aempty", "Aup", "B"], default="Aempty")
    sp.add_argument("--max-degree", type=int, required=True)
    sp.add_argument("--primitives", action="store_true")

    sp = add("reduce", cmd_reduce, "normal form of a graded sum")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--space", default=None, choices=["Aempty", "AupX", "BX"])

    for name, fn in (("chi", cmd_chi), ("sigma", cmd_sigma)):
        sp = add(name, fn, f"the PBW map {name}")
        sp.add_argument("--in", dest="inp", required=True)

    sp = add("cable", cmd_cable, "lift a one-line element onto several lines")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--to", required=True)

    sp = add("zcheck", cmd_zcheck, "assemble the normalized tangle value")
    sp.add_argument("--z", required=True)
    sp.add_argument("--nu", required=True)

    sp = add("integrate", cmd_integrate, "formal Gaussian integration")
    sp.add_argument("--in", dest="inp", required=True)

    sp = add("aarhus0", cmd_aarhus0, "unnormalized invariant")
    sp.add_argument("--z", required=True)

    sp = add("aarhus", cmd_aarhus, "normalized invariant")
    sp.add_argument("--z", required=True)
    sp.add_argument("--uplus", required=True)
    sp.add_argument("--uminus", required=True)
    sp.add_argument("--matrix", default=None)

    sp = add("signature", cmd_signature, "signature of a linking matrix")
    sp.add_argument("--matrix", required=True)

    sp = add("weight", cmd_weight, "Lie algebra weight of a manifold-diagram sum")
    sp.add_argument("--lie", required=True)
    sp.add_argument("--in", dest="inp", required=True)

    sp = add("wickcheck", cmd_wickcheck, "check weights against the Wick pairing")
    sp.add_argument("--lie", required=True)
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("ogl", cmd_ogl, "expand a manifold diagram into framed links")
    sp.add_argument("--in", dest="inp", required=True)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.cache:
        from .relations import set_cache_dir
        set_cache_dir(args.cache)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except AarhusError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
