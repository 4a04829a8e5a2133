"""Graph counts against a brute-force matching oracle."""

import itertools

import pytest

from aarhus.canonical import canonical_form
from aarhus.diagrams import strut
from aarhus.enumerate import (EnumerationConfig, closed_connected, connected_only,
                              enumerate_diagrams, open_connected)
from aarhus.errors import LimitExceeded


def _matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in _matchings(rest):
            yield [(a, items[i])] + m


def _connected(n, edges):
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _iso_key(n, edges, fixed=()):
    """Minimal sorted edge multiset over vertex permutations; fixed vertices stay put."""
    movable = [v for v in range(n) if v not in fixed]
    best = None
    for perm in itertools.permutations(movable):
        p = dict(zip(movable, perm))
        p.update({v: v for v in fixed})
        key = tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


def brute_closed(t):
    halves = [(v, s) for v in range(t) for s in range(3)]
    classes = set()
    for m in _matchings(halves):
        edges = [(a[0], b[0]) for a, b in m]
        if _connected(t, edges):
            classes.add(_iso_key(t, edges))
    return len(classes)


def brute_open(t, l):
    """Legs are vertices t..t+l-1, unlabeled (interchangeable)."""
    halves = [(v, s) for v in range(t) for s in range(3)] + [(t + i, 0) for i in range(l)]
    classes = set()
    for m in _matchings(halves):
        edges = [(a[0], b[0]) for a, b in m]
        if not _connected(t + l, edges):
            continue
        # canonical: try permutations of trivalent vertices and of legs separately
        best = None
        for pt in itertools.permutations(range(t)):
            for pl in itertools.permutations(range(l)):
                p = {v: pt[v] for v in range(t)}
                p.update({t + i: t + pl[i] for i in range(l)})
                key = tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges))
                best = key if best is None or key < best else best
        classes.add(best)
    return len(classes)


@pytest.mark.parametrize("t", [2, 4])
def test_closed_counts_match_brute_force(t):
    assert len(closed_connected(t)) == brute_closed(t)


def test_closed_counts_known_values():
    assert [len(closed_connected(t)) for t in (2, 4, 6)] == [2, 5, 17]


@pytest.mark.parametrize("t,l", [(0, 2), (1, 1), (1, 3), (2, 2), (2, 4), (3, 1), (3, 3)])
def test_open_counts_match_brute_force(t, l):
    assert len(open_connected(t, l)) == brute_open(t, l)


def test_small_spaces():
    assert [sc.canonical.n for sc in enumerate_diagrams("Aempty", 0)] == [0]
    one = enumerate_diagrams("Aempty", 1)
    assert len(one) == 1 and len(one[0].canonical.edges) == 3
    bx = enumerate_diagrams("BX", 1, ["x"])
    assert [sc.canonical for sc in bx] == [canonical_form(strut("x", "x")).canonical]


def test_bplus_drops_struts():
    for sc in enumerate_diagrams("BplusX", 2, ["x", "y"]):
        for comp in sc.canonical.components():
            assert any(sc.canonical.kinds[v][0] == "t" for v in comp)


def test_connected_only_degree_two():
    conn = connected_only(enumerate_diagrams("Aempty", 2))
    assert all(len(sc.canonical.components()) == 1 for sc in conn)


def test_enumeration_cap():
    with pytest.raises(LimitExceeded):
        enumerate_diagrams("BX", 3, ["x"], config=EnumerationConfig(labeled_cap=2))


def test_deterministic_order():
    a = enumerate_diagrams("AupX", 2, ["x", "y"])
    b = enumerate_diagrams("AupX", 2, ["x", "y"])
    assert a == b
