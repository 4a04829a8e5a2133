"""Algebra structure and the maps between diagram spaces."""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

from .canonical import canonical_form
from .diagrams import ATT, LEG, Diagram, degree, disjoint_union
from .errors import BadConstantTerm, SolveFailure, SpaceMismatch
from .gradedsum import GradedSum
from .linalg import solve
from .relations import normal_form, quotient_basis, reduce


def _family(s: GradedSum):
    fams = {d.space_family() for d in s.terms if d.n}
    if len(fams) > 1:
        raise SpaceMismatch(f"mixed spaces {sorted(fams)}")
    return fams.pop() if fams else None


def du_product(a: GradedSum, b: GradedSum) -> GradedSum:
    """Disjoint union product on manifold or uni-trivalent diagrams."""
    fa, fb = _family(a), _family(b)
    for f in (fa, fb):
        if f == "AupX":
            raise SpaceMismatch("disjoint union is not a product on skeleton diagrams")
    if fa and fb and fa != fb:
        raise SpaceMismatch(f"cannot multiply {fa} by {fb}")
    n = GradedSum._min_n(a.max_degree, b.max_degree)
    out = []
    for d1, c1 in a.terms.items():
        m1 = degree(d1)
        for d2, c2 in b.terms.items():
            if n is not None and m1 + degree(d2) > n:
                continue
            out.append((disjoint_union(d1, d2), c1 * c2))
    return GradedSum(out, n)


def power(s: GradedSum, k: int) -> GradedSum:
    out = GradedSum.one(s.max_degree)
    for _ in range(k):
        out = du_product(out, s)
    return out


def _need_truncation(s, max_degree):
    n = s.max_degree if max_degree is None else max_degree
    if n is None:
        raise ValueError("a power series needs a truncation degree")
    return n


def exp_union(s: GradedSum, max_degree=None) -> GradedSum:
    if s.constant_term() != 0:
        raise BadConstantTerm("exp needs a zero constant term")
    n = _need_truncation(s, max_degree)
    s = s.truncate(n)
    out = GradedSum.one(n)
    term = GradedSum.one(n)
    for k in range(1, n + 1):
        term = du_product(term, s) * Fraction(1, k)
        if term.is_zero():
            break
        out = out + term
    return out


def log_union(u: GradedSum, max_degree=None) -> GradedSum:
    if u.constant_term() != 1:
        raise BadConstantTerm("log needs constant term 1")
    n = _need_truncation(u, max_degree)
    x = u.truncate(n) - GradedSum.one(n)
    out = GradedSum.zero(n)
    term = GradedSum.one(n)
    for k in range(1, n + 1):
        term = du_product(term, x)
        if term.is_zero():
            break
        out = out + term * Fraction((-1) ** (k + 1), k)
    return out


def inverse_union(u: GradedSum, max_degree=None) -> GradedSum:
    """Inverse of a constant-term-1 element by the geometric series."""
    from .errors import NonInvertibleUnit
    c = u.constant_term()
    if c == 0:
        raise NonInvertibleUnit("constant term is zero")
    n = _need_truncation(u, max_degree)
    x = GradedSum.one(n) - u.truncate(n) / c
    out = GradedSum.one(n)
    term = GradedSum.one(n)
    for _ in range(n):
        term = du_product(term, x)
        if term.is_zero():
            break
        out = out + term
    return out / c


# -- coproduct ---------------------------------------------------------------

class TensorSum:
    """Formal sum of pairs of canonical diagrams."""

    def __init__(self, terms=None):
        acc = defaultdict(Fraction)
        for (a, b), c in (terms or {}).items():
            sa, sb = canonical_form(a), canonical_form(b)
            if sa.sign and sb.sign:
                acc[(sa.canonical, sb.canonical)] += c * sa.sign * sb.sign
        self.terms = {k: v for k, v in acc.items() if v != 0}

    def __add__(self, other):
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        t = TensorSum()
        t.terms = {k: v for k, v in acc.items() if v != 0}
        return t

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.terms == other.terms

    def truncate(self, n):
        t = TensorSum()
        t.terms = {k: v for k, v in self.terms.items()
                   if degree(k[0]) + degree(k[1]) <= n}
        return t

    def __len__(self):
        return len(self.terms)


def _split(d: Diagram):
    comps = d.components()
    for mask in itertools.product((0, 1), repeat=len(comps)):
        left = [v for c, m in zip(comps, mask) if m == 0 for v in c]
        right = [v for c, m in zip(comps, mask) if m == 1 for v in c]
        yield d.subdiagram(left), d.subdiagram(right)


def coproduct(s) -> TensorSum:
    """Sum over all ways of splitting the components into two groups."""
    if isinstance(s, Diagram):
        s = GradedSum.of(s)
    if _family(s) == "AupX":
        raise SpaceMismatch("coproduct is defined on uni-trivalent diagrams")
    acc = defaultdict(Fraction)
    for d, c in s.terms.items():
        for a, b in _split(d):
            acc[(a, b)] += c
    return TensorSum(acc)


def tensor(a: GradedSum, b: GradedSum) -> TensorSum:
    acc = defaultdict(Fraction)
    for d1, c1 in a.terms.items():
        for d2, c2 in b.terms.items():
            acc[(d1, d2)] += c1 * c2
    return TensorSum(acc)


def is_grouplike(u: GradedSum, n=None) -> bool:
    n = _need_truncation(u, n)
    return coproduct(u).truncate(n) == tensor(u, u).truncate(n)


# -- PBW maps ---------------------------------------------------------------

def relabel_lines(d: Diagram, mapping) -> Diagram:
    kinds = [(k[0], mapping.get(k[1], k[1]), k[2]) if k[0] == ATT else k for k in d.kinds]
    return d.with_kinds(kinds)


def _labels_of(s: GradedSum, kind):
    out = set()
    for d in s.terms:
        for k in d.kinds:
            if k[0] == kind:
                out.add(k[1])
    return out


def attach_orderings(d: Diagram):
    """Every way of ordering the x-legs along line x, one diagram per ordering."""
    by_label = defaultdict(list)
    for v in d.legs():
        by_label[d.kinds[v][1]].append(v)
    groups = sorted(by_label.items())
    for perms in itertools.product(*(itertools.permutations(vs) for _, vs in groups)):
        kinds = list(d.kinds)
        for (x, _), perm in zip(groups, perms):
            for pos, v in enumerate(perm):
                kinds[v] = (ATT, x, pos)
        yield d.with_kinds(kinds)


def chi_raw(s: GradedSum) -> GradedSum:
    """Average over leg orderings, before reduction modulo STU."""
    if _family(s) not in (None, "BX"):
        raise SpaceMismatch("chi takes uni-trivalent diagrams")
    out = []
    for d, c in s.terms.items():
        ords = list(attach_orderings(d))
        w = c / len(ords)
        out.extend((e, w) for e in ords)
    return GradedSum(out, s.max_degree)


def chi(s: GradedSum, labels=None) -> GradedSum:
    labels = sorted(_labels_of(s, LEG) if labels is None else labels)
    return normal_form(chi_raw(s), "AupX", labels)


_SIGMA_CACHE = {}


def _chi_inverse(m, labels):
    key = (tuple(labels), m)
    if key not in _SIGMA_CACHE:
        qa = quotient_basis("AupX", m, labels)
        qb = quotient_basis("BX", m, labels)
        if qa.dim != qb.dim:
            raise SolveFailure(f"chi is not square in degree {m}: {qb.dim} -> {qa.dim}")
        cols = [reduce(chi_raw(GradedSum.of(b)), "AupX", labels).get(m, (0,) * qa.dim)
                for b in qb.basis]
        mat = [[cols[j][i] for j in range(qb.dim)] for i in range(qa.dim)]
        _SIGMA_CACHE[key] = (mat, qb)
    return _SIGMA_CACHE[key]


def chi_matrix(m, labels):
    """Columns: chi of each B basis element over the skeleton basis."""
    return _chi_inverse(m, sorted(labels))[0]


def sigma(s: GradedSum, labels=None) -> GradedSum:
    """Inverse of chi, solved degree by degree."""
    if _family(s) not in (None, "AupX"):
        raise SpaceMismatch("sigma takes skeleton diagrams")
    labels = sorted(_labels_of(s, ATT) if labels is None else labels)
    acc = {}
    for m, vec in reduce(s, "AupX", labels).items():
        if not any(vec):
            continue
        mat, qb = _chi_inverse(m, labels)
        x = solve(mat, list(vec))
        for b, c in zip(qb.basis, x):
            if c:
                acc[b] = acc.get(b, 0) + c
    return GradedSum._raw(acc, s.max_degree)


# -- skeleton operations ---------------------------------------------------------

def cable_raw(s: GradedSum, lines):
    """All n^k lifts of a one-line diagram, before reduction."""
    if _family(s) not in (None, "AupX"):
        raise SpaceMismatch("cabling takes skeleton diagrams")
    out = []
    for d, c in s.terms.items():
        sk = d.skeleton()
        if len(sk) > 1:
            raise SpaceMismatch("cabling needs a one-line skeleton")
        pts = next(iter(sk.values()), [])
        for choice in itertools.product(lines, repeat=len(pts)):
            kinds = list(d.kinds)
            for h, (v, x) in enumerate(zip(pts, choice)):
                kinds[v] = (ATT, x, h)
            out.append((d.with_kinds(kinds), c))
    return out


def cable_delta(s: GradedSum, lines) -> GradedSum:
    lines = list(lines)
    return normal_form(GradedSum(cable_raw(s, lines), s.max_degree), "AupX", lines)


def erase_line(s: GradedSum, x) -> GradedSum:
    """Counit on line x: diagrams touching x map to 0, others are kept."""
    return GradedSum._raw({d: c for d, c in s.terms.items()
                           if x not in d.skeleton()}, s.max_degree)


def _stack_diagrams(a: Diagram, b: Diagram) -> Diagram:
    """a below b."""
    shift = {x: len(v) for x, v in a.skeleton().items()}
    kinds = [(ATT, k[1], k[2] + shift.get(k[1], 0)) if k[0] == ATT else k for k in b.kinds]
    return disjoint_union(a, b.with_kinds(kinds))


def stack(a: GradedSum, b: GradedSum, labels=None) -> GradedSum:
    """Skeleton product: a placed below b, then reduced modulo STU."""
    for s in (a, b):
        if _family(s) not in (None, "AupX"):
            raise SpaceMismatch("stacking takes skeleton diagrams")
    n = GradedSum._min_n(a.max_degree, b.max_degree)
    out = []
    for d1, c1 in a.terms.items():
        for d2, c2 in b.terms.items():
            if n is not None and degree(d1) + degree(d2) > n:
                continue
            out.append((_stack_diagrams(d1, d2), c1 * c2))
    labels = sorted(_labels_of(a, ATT) | _labels_of(b, ATT) if labels is None else labels)
    return normal_form(GradedSum(out, n), "AupX", labels)


def on_line(s: GradedSum, x) -> GradedSum:
    """Move a one-line skeleton element onto line x."""
    out = []
    for d, c in s.terms.items():
        sk = d.skeleton()
        if len(sk) > 1:
            raise SpaceMismatch("factor must live on a one-line skeleton")
        out.append((relabel_lines(d, {y: x for y in sk}), c))
    return GradedSum(out, s.max_degree)


def skeleton_act(factors: dict, target: GradedSum, labels=None) -> GradedSum:
    """Insert factors[x] at the bottom of line x for every x."""
    labels = sorted(set(factors) | _labels_of(target, ATT) if labels is None else labels)
    out = target
    for x in sorted(factors):
        out = stack(on_line(factors[x], x), out, labels)
    return out


def assemble_zcheck(z: GradedSum, nu: GradedSum, lines=None) -> GradedSum:
    """nu on every line, then the cabled nu, then Z, from bottom to top."""
    if nu.constant_term() != 1:
        raise BadConstantTerm("nu must have constant term 1")
    lines = sorted(_labels_of(z, ATT) if lines is None else lines)
    n = GradedSum._min_n(z.max_degree, nu.max_degree)
    z, nu = z.truncate(n), nu.truncate(n)
    middle = stack(cable_delta(nu, lines), z, lines)
    return skeleton_act({x: nu for x in lines}, middle, lines)
