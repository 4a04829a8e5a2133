"""Brute-force reference implementations used only by the tests.

Nothing here calls the gluing code in ``gaussian``; the oracle lists label
preserving bijections as filtered permutations of the full leg list and
traces the glued edges over a plain adjacency map.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .diagrams import DUAL_PREFIX, Diagram
from .gradedsum import GradedSum


def _raw_bijections(c1: Diagram, c2: Diagram):
    legs1 = [v for v, k in enumerate(c1.kinds) if k[0] == "l"]
    legs2 = [v for v, k in enumerate(c2.kinds) if k[0] == "l"]
    if len(legs1) != len(legs2):
        return
    for perm in itertools.permutations(legs2):
        if all(c1.kinds[a][1] == DUAL_PREFIX + c2.kinds[b][1] for a, b in zip(legs1, perm)):
            yield list(zip(legs1, perm))


def _glued(c1: Diagram, c2: Diagram, bij):
    # global half-edge names: (side, vertex, slot)
    adj = {}
    for side, d in ((1, c1), (2, c2)):
        for (v, s), (w, t) in d.edges:
            adj[(side, v, s)] = (side, w, t)
            adj[(side, w, t)] = (side, v, s)
    glue = {}
    for a, b in bij:
        glue[(1, a, 0)] = (2, b, 0)
        glue[(2, b, 0)] = (1, a, 0)
    kinds = {}
    for side, d in ((1, c1), (2, c2)):
        for v, k in enumerate(d.kinds):
            if k[0] == "t":
                kinds[(side, v)] = k
    order = sorted(kinds)
    idx = {v: i for i, v in enumerate(order)}
    edges = set()
    seen = set()
    for h in sorted(adj):
        if (h[0], h[1]) not in kinds:
            continue
        cur = adj[h]
        while (cur[0], cur[1]) not in kinds:
            seen.add(cur)
            cur = adj[glue[cur]]
        e = tuple(sorted([(idx[(h[0], h[1])], h[2]), (idx[(cur[0], cur[1])], cur[2])]))
        edges.add(e)
    # a glued leg never reached from a vertex sits on a circle made of struts only
    if seen != set(glue):
        raise ValueError("vertex-free loop")
    return Diagram([kinds[v] for v in order], sorted(edges))


def oracle_glue(c1: Diagram, c2: Diagram, count=False):
    """Sum over all label-preserving bijections of the glued closed diagrams."""
    out = []
    n = 0
    for bij in _raw_bijections(c1, c2):
        out.append((_glued(c1, c2, bij), Fraction(1)))
        n += 1
    s = GradedSum(out)
    return (s, n) if count else s
