"""Isomorphism-free enumeration of diagrams by degree.

Connected closed trivalent multigraphs on t+2 vertices arise from those on t
vertices by one of two moves: subdivide two edge positions and join the new
vertices, or subdivide one edge and hang a self-looped vertex off it.  The
reverse moves (delete a non-bridge edge and smooth, or delete a loop leaf)
always apply, so the construction is complete.  Open graphs grow by
subdividing an edge and attaching a leg; deleting any leg and smoothing its
vertex inverts that.  Duplicates are rejected by canonical form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .canonical import SignedCanonical, canonical_form, sort_key
from .diagrams import ATT, EMPTY, LEG, TRI, Diagram, disjoint_union
from .errors import LimitExceeded

PLACEHOLDER = "*"


@dataclass(frozen=True)
class EnumerationConfig:
    """Degree caps; enumeration above these raises LimitExceeded."""

    aempty_cap: int = 6
    labeled_cap: int = 4
    overrides: dict = field(default_factory=dict)

    def cap(self, space: str) -> int:
        if space in self.overrides:
            return self.overrides[space]
        return self.aempty_cap if space == "Aempty" else self.labeled_cap


DEFAULT_CONFIG = EnumerationConfig()


def _canon(d: Diagram) -> Diagram:
    return canonical_form(d).canonical


def _dedup(diagrams):
    seen = {}
    for d in diagrams:
        c = _canon(d)
        seen.setdefault(c, None)
    return sorted(seen, key=sort_key)


def _subdivide(edges, e, new_vertex):
    """Replace edge ``e`` by two edges through slots 0 and 1 of new_vertex."""
    (a, b) = e
    out = [x for x in edges if x != e]
    out.append((a, (new_vertex, 0)))
    out.append(((new_vertex, 1), b))
    return out


@lru_cache(maxsize=None)
def closed_connected(t: int):
    """Connected closed trivalent multigraphs on t vertices, loops allowed."""
    if t <= 0 or t % 2:
        return ()
    if t == 2:
        theta = Diagram([(TRI,), (TRI,)], [((0, i), (1, i)) for i in range(3)])
        dumbbell = Diagram([(TRI,), (TRI,)],
                           [((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2))])
        return tuple(_dedup([theta, dumbbell]))
    out = []
    for g in closed_connected(t - 2):
        n = g.n
        kinds = list(g.kinds) + [(TRI,), (TRI,)]
        edges = list(g.edges)
        for i, e1 in enumerate(edges):
            for e2 in edges[i:]:
                if e1 == e2:
                    (a, b) = e1
                    new = [x for x in edges if x != e1]
                    new += [(a, (n, 0)), ((n, 1), (n + 1, 0)), ((n + 1, 1), b),
                            ((n, 2), (n + 1, 2))]
                else:
                    new = _subdivide(_subdivide(edges, e1, n), e2, n + 1)
                    new.append(((n, 2), (n + 1, 2)))
                out.append(Diagram(kinds, new))
            # hang a self-looped vertex off e1
            new = _subdivide(edges, e1, n)
            new += [((n, 2), (n + 1, 0)), ((n + 1, 1), (n + 1, 2))]
            out.append(Diagram(kinds, new))
    return tuple(_dedup(out))


@lru_cache(maxsize=None)
def open_connected(t: int, l: int):
    """Connected uni-trivalent graphs with t trivalent vertices and l >= 1 legs.

    Legs carry the placeholder label ``*``.
    """
    if l < 1 or (t + l) % 2 or t < 0:
        return ()
    if t == 0:
        if l != 2:
            return ()
        return (Diagram([(LEG, PLACEHOLDER), (LEG, PLACEHOLDER)], [((0, 0), (1, 0))]),)
    if (t, l) == (1, 1):
        d = Diagram([(TRI,), (LEG, PLACEHOLDER)], [((0, 0), (0, 1)), ((0, 2), (1, 0))])
        return (_canon(d),)
    if l == 1:
        bases = closed_connected(t - 1)
    else:
        bases = open_connected(t - 1, l - 1)
    out = []
    for g in bases:
        n = g.n
        kinds = list(g.kinds) + [(TRI,), (LEG, PLACEHOLDER)]
        for e in g.edges:
            new = _subdivide(list(g.edges), e, n)
            new.append(((n, 2), (n + 1, 0)))
            out.append(Diagram(kinds, new))
    return tuple(_dedup(out))


def _with_leg_labels(d: Diagram, labels):
    it = iter(labels)
    return d.with_kinds([(LEG, next(it)) if k[0] == LEG else k for k in d.kinds])


@lru_cache(maxsize=None)
def labeled_connected(deg: int, labels: tuple):
    """Connected uni-trivalent diagrams of a degree with legs marked from labels."""
    out = set()
    for l in range(1, 2 * deg + 1):
        t = 2 * deg - l
        for g in open_connected(t, l):
            for lab in itertools.product(labels, repeat=l):
                out.add(_canon(_with_leg_labels(g, lab)))
    return tuple(sorted(out, key=sort_key))


def _multisets(pieces_by_degree, m):
    """All multisets of pieces whose degrees sum to m (pieces keyed by degree)."""
    flat = [(d, p) for d in sorted(pieces_by_degree) for p in pieces_by_degree[d]]

    def rec(start, remaining):
        if remaining == 0:
            yield ()
            return
        for i in range(start, len(flat)):
            d, p = flat[i]
            if d <= remaining:
                for rest in rec(i, remaining - d):
                    yield (p,) + rest

    yield from rec(0, m)


def _check_cap(space, deg, config):
    if deg > config.cap(space):
        raise LimitExceeded(f"degree {deg} above enumeration cap {config.cap(space)} "
                            f"for {space}")


def enumerate_diagrams(space: str, deg: int, labels=(), include_zero=False,
                       config: EnumerationConfig = DEFAULT_CONFIG):
    """One canonical representative per isomorphism class, deterministic order.

    AS-zero classes (sign 0) are dropped unless ``include_zero``.
    """
    labels = tuple(labels)
    if space == "BplusX":
        out = enumerate_diagrams("BX", deg, labels, include_zero, config)
        return [sc for sc in out
                if all(any(sc.canonical.kinds[v][0] == TRI for v in comp)
                       for comp in sc.canonical.components())]
    _check_cap(space, deg, config)
    if deg == 0:
        return [SignedCanonical(EMPTY, 1)]
    if space == "Aempty":
        pieces = {k: closed_connected(2 * k) for k in range(1, deg + 1)}
        diagrams = [disjoint_union(*ms) for ms in _multisets(pieces, deg)]
    elif space == "BX":
        pieces = {k: labeled_connected(k, labels) for k in range(1, deg + 1)}
        diagrams = [disjoint_union(*ms) for ms in _multisets(pieces, deg)]
    elif space == "AupX":
        diagrams = list(_skeleton_diagrams(deg, labels))
    else:
        raise ValueError(f"unknown space {space!r}")
    result = {}
    for d in diagrams:
        sc = canonical_form(d)
        result[sc.canonical] = sc.sign
    out = [SignedCanonical(c, s) for c, s in result.items() if include_zero or s != 0]
    out.sort(key=lambda sc: sort_key(sc.canonical))
    return out


def connected_only(diagrams):
    return [sc for sc in diagrams if len(sc.canonical.components()) == 1]


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def place_on_skeleton(g: Diagram, lines):
    """All ways of putting the placeholder legs of g onto ordered skeleton lines."""
    legs = [v for v, k in enumerate(g.kinds) if k == (LEG, PLACEHOLDER)]
    out = set()
    for comp in _compositions(len(legs), len(lines)):
        slots = [(x, p) for x, k in zip(lines, comp) for p in range(k)]
        states = {_canon(g)}
        for x, p in slots:
            nxt = set()
            for st in states:
                for v, k in enumerate(st.kinds):
                    if k == (LEG, PLACEHOLDER):
                        kinds = list(st.kinds)
                        kinds[v] = (ATT, x, p)
                        nxt.add(_canon(st.with_kinds(kinds)))
            states = nxt
        out |= states
    return out


def _skeleton_diagrams(deg, lines):
    pieces = {}
    for k in range(1, deg + 1):
        pieces[k] = [g for l in range(1, 2 * k + 1)
                     for g in open_connected(2 * k - l, l)]
    for ms in _multisets(pieces, deg):
        yield from place_on_skeleton(disjoint_union(*ms), lines)
