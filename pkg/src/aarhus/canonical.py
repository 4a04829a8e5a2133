"""Canonical labeling of diagrams with antisymmetry (AS) sign tracking.

The underlying multigraph is canonized by colour refinement followed by an
individualization search over all tied vertices.  Every leaf that attains
the least certificate is an isomorphism onto the canonical graph; the sign
of each is the product over trivalent vertices of the parity of the induced
slot permutation.  Two minimal leaves with different signs means an
orientation-reversing automorphism, so the diagram is zero modulo AS.

Permuting parallel edges between two trivalent vertices acts by the same
permutation at both ends, hence is even; this is why a vertex map alone
determines the sign.  A self-loop at a trivalent vertex always gives sign 0.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

from .diagrams import ATT, TRI, Diagram


@dataclass(frozen=True)
class SignedCanonical:
    canonical: Diagram
    sign: int


def _parity3(p) -> int:
    inv = (p[0] > p[1]) + (p[0] > p[2]) + (p[1] > p[2])
    return -1 if inv % 2 else 1


def _refine(colors, nbrs):
    ncls = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in nbrs[v])))
               for v in range(len(colors))]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        colors = [rank[s] for s in sig]
        if len(rank) == ncls:
            return colors
        ncls = len(rank)


def standard_edges(pairs):
    """Assign slots in sorted edge order: the canonical orientation."""
    nxt = defaultdict(int)
    out = []
    for i, j in pairs:
        si = nxt[i]
        nxt[i] += 1
        sj = nxt[j]
        nxt[j] += 1
        out.append(((i, si), (j, sj)))
    return out


def _canon_block(kinds, edges):
    """Canonize one block (a connected component, or a whole skeleton diagram).

    ``kinds`` and ``edges`` use local vertex ids.  Returns the certificate
    ``(kinds, pairs)`` and the sign of the map onto it.
    """
    n = len(kinds)
    nbrs = [[] for _ in range(n)]
    for (u, _), (w, _) in edges:
        nbrs[u].append(w)
        nbrs[w].append(u)
    init = sorted(set(kinds))
    colors = _refine([init.index(k) for k in kinds], nbrs)

    best = None
    leaves = []

    def search(cols):
        nonlocal best, leaves
        if len(set(cols)) == n:
            order = sorted(range(n), key=cols.__getitem__)
            pos = cols
            cert = (tuple(kinds[v] for v in order),
                    tuple(sorted(tuple(sorted((pos[u], pos[w])))
                                 for (u, _), (w, _) in edges)))
            if best is None or cert < best:
                best, leaves = cert, [pos]
            elif cert == best:
                leaves.append(pos)
            return
        counts = defaultdict(int)
        for c in cols:
            counts[c] += 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if cols[v] == target:
                new = [2 * c + (0 if u == v else 1) if c == target else 2 * c
                       for u, c in enumerate(cols)]
                search(_refine(new, nbrs))

    search(colors)
    loop = any(u == w for (u, _), (w, _) in edges)
    sign = 0 if loop else None
    if not loop:
        std = standard_edges(best[1])
        for pos in leaves:
            s = _transport_sign(kinds, edges, pos, std)
            if sign is None:
                sign = s
            elif s != sign:
                sign = 0
                break
    return best, sign


def _transport_sign(kinds, edges, pos, std):
    groups = defaultdict(list)
    for e in reversed(std):
        groups[(e[0][0], e[1][0])].append(e)
    slot = {}
    for (u, a), (w, b) in edges:
        pu, pw = pos[u], pos[w]
        if pu <= pw:
            (_, s), (_, t) = groups[(pu, pw)].pop()
            slot[(u, a)], slot[(w, b)] = s, t
        else:
            (_, s), (_, t) = groups[(pw, pu)].pop()
            slot[(w, b)], slot[(u, a)] = s, t
    sign = 1
    for v, k in enumerate(kinds):
        if k[0] == TRI:
            sign *= _parity3((slot[(v, 0)], slot[(v, 1)], slot[(v, 2)]))
    return sign


def _normalize_positions(d: Diagram):
    """Replace attachment heights by their rank on each line."""
    if not d.attachments():
        return list(d.kinds)
    kinds = list(d.kinds)
    for x, pts in d.skeleton().items():
        for r, v in enumerate(pts):
            kinds[v] = (ATT, x, r)
    return kinds


@lru_cache(maxsize=200_000)
def canonical_form(d: Diagram) -> SignedCanonical:
    """Canonical representative of ``d`` and the AS sign relating them."""
    kinds = _normalize_positions(d)
    if d.n == 0:
        return SignedCanonical(d, 1)
    if d.attachments():
        blocks = [list(range(d.n))]
    else:
        blocks = d.components()
    results = []
    sign = 1
    for block in blocks:
        inv = {v: i for i, v in enumerate(block)}
        bk = [kinds[v] for v in block]
        be = [((inv[a[0]], a[1]), (inv[b[0]], b[1])) for a, b in d.edges
              if a[0] in inv]
        cert, s = _canon_block(bk, be)
        results.append(cert)
        sign *= s
    results.sort()
    all_kinds, pairs, off = [], [], 0
    for ks, ps in results:
        all_kinds.extend(ks)
        pairs.extend((i + off, j + off) for i, j in ps)
        off += len(ks)
    canon = Diagram(all_kinds, standard_edges(pairs))
    return SignedCanonical(canon, sign)


def is_canonical(d: Diagram) -> bool:
    sc = canonical_form(d)
    return sc.canonical == d


def sort_key(d: Diagram):
    """Deterministic total order on canonical diagrams."""
    return (len(d.kinds), d.kinds, d.edges)
