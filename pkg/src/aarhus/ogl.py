"""The OGL map: manifold diagrams to alternating sums of unit-framed links.

Fixed embedding.  Vertices sit on a circle in canonical order and edges are
chords; parallel edges are bent into nested arcs.  Every edge is doubled into
a thin band whose boundary is one link component, ending in a small disc at
each endpoint.  The three discs at a vertex overlap like a Venn diagram, so
each pair of components meeting there crosses twice.

Vertex resolutions.  In the first picture (sign +) the three discs form
Borromean rings: the component on slot s lies over the one on slot s+1
(mod 3).  In the second picture (sign -) they are layered, slot 0 over 1
over 2, which is locally trivial.  Where two bands cross away from the
vertices, the edge whose endpoint pair is lexicographically smaller goes
over.

PD convention.  Arcs are the pieces of components between consecutive
crossing passages.  A crossing is written (a, b, c, d, o): a is the
incoming under-arc, b, c, d follow counterclockwise, and o is the incoming
over-arc.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .canonical import canonical_form
from .diagrams import TRI, Diagram
from .errors import UnsupportedDiagram


@dataclass
class FramedPDLink:
    components: int
    pd_crossings: list
    framings: list
    sign: int
    arc_component: dict = field(default_factory=dict, compare=False, repr=False)

    def arc_cycles(self) -> int:
        """Closed arc cycles traced through the crossings."""
        nxt = {}
        for a, b, c, d, o in self.pd_crossings:
            nxt[a] = c
            if o == b:
                nxt[b] = d
            else:
                nxt[d] = b
        seen, cycles = set(), 0
        for start in nxt:
            if start in seen:
                continue
            cycles += 1
            cur = start
            while cur not in seen:
                seen.add(cur)
                cur = nxt[cur]
        return cycles


@dataclass
class OGLExpansion:
    source: Diagram = field(compare=False)
    terms: list = field(default_factory=list)


# -- geometry -------------------------------------------------------------------

_R = 100.0
_DISC = 1.0
_REACH = 0.9
_HALF_WIDTH = 0.004
_CURVE_SAMPLES = 200
_CIRCLE_SAMPLES = 96


def _bezier(p0, p1, p2, t):
    s = 1 - t
    return (s * s * p0[0] + 2 * s * t * p1[0] + t * t * p2[0],
            s * s * p0[1] + 2 * s * t * p1[1] + t * t * p2[1])


def _unit(v):
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def _layout(d: Diagram, bend):
    v = d.n
    pos = [(_R * math.cos(2 * math.pi * i / v + 0.1), _R * math.sin(2 * math.pi * i / v + 0.1))
           for i in range(v)]
    groups = {}
    for k, ((a, _), (b, _)) in enumerate(d.edges):
        groups.setdefault((a, b), []).append(k)
    curves = {}
    for (a, b), ks in groups.items():
        p0, p2 = pos[a], pos[b]
        mid = ((p0[0] + p2[0]) / 2, (p0[1] + p2[1]) / 2)
        length = math.hypot(p2[0] - p0[0], p2[1] - p0[1])
        nrm = _unit((-(p2[1] - p0[1]), p2[0] - p0[0]))
        m = len(ks)
        for j, k in enumerate(ks):
            off = (j - (m - 1) / 2) * bend * length
            p1 = (mid[0] + 2 * off * nrm[0], mid[1] + 2 * off * nrm[1])
            curves[k] = (p0, p1, p2)
    return pos, curves


def _tangents_ok(d, curves, min_angle):
    dirs = {}
    for k, ((a, _), (b, _)) in enumerate(d.edges):
        p0, p1, p2 = curves[k]
        dirs.setdefault(a, []).append(math.atan2(p1[1] - p0[1], p1[0] - p0[0]))
        dirs.setdefault(b, []).append(math.atan2(p1[1] - p2[1], p1[0] - p2[0]))
    for angles in dirs.values():
        for x, y in itertools.combinations(angles, 2):
            diff = abs((x - y + math.pi) % (2 * math.pi) - math.pi)
            if diff < min_angle:
                return False
    return True


def _component(curve, ca, cb):
    """Boundary of disc(ca) + thin band along the curve + disc(cb)."""
    p0, p1, p2 = curve
    samples = [_bezier(p0, p1, p2, i / _CURVE_SAMPLES) for i in range(_CURVE_SAMPLES + 1)]
    plus, minus = [], []
    for i, q in enumerate(samples):
        j = min(i + 1, len(samples) - 1)
        h = max(i - 1, 0)
        t = _unit((samples[j][0] - samples[h][0], samples[j][1] - samples[h][1]))
        n = (-t[1], t[0])
        if math.hypot(q[0] - ca[0], q[1] - ca[1]) > _DISC * 1.02 and \
                math.hypot(q[0] - cb[0], q[1] - cb[1]) > _DISC * 1.02:
            plus.append((q[0] + _HALF_WIDTH * n[0], q[1] + _HALF_WIDTH * n[1]))
            minus.append((q[0] - _HALF_WIDTH * n[0], q[1] - _HALF_WIDTH * n[1]))

    def arc(center, start, end):
        a0 = math.atan2(start[1] - center[1], start[0] - center[0])
        a1 = math.atan2(end[1] - center[1], end[0] - center[0])
        # the long way round: the short gap is where the band leaves
        sweep = (a1 - a0) % (2 * math.pi)
        if sweep < math.pi:
            sweep -= 2 * math.pi
        steps = max(8, int(abs(sweep) / (2 * math.pi) * _CIRCLE_SAMPLES))
        return [(center[0] + _DISC * math.cos(a0 + sweep * i / steps),
                 center[1] + _DISC * math.sin(a0 + sweep * i / steps))
                for i in range(steps + 1)]

    pts = list(plus)
    pts += arc(cb, plus[-1], minus[-1])
    pts += list(reversed(minus))
    pts += arc(ca, minus[0], plus[0])
    return pts


def _seg_intersect(p, p2, q, q2):
    r = (p2[0] - p[0], p2[1] - p[1])
    s = (q2[0] - q[0], q2[1] - q[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0:
        return None
    w = (q[0] - p[0], q[1] - p[1])
    t = (w[0] * s[1] - w[1] * s[0]) / den
    u = (w[0] * r[1] - w[1] * r[0]) / den
    if 0 <= t < 1 and 0 <= u < 1:
        return t, u
    return None


@dataclass
class _Crossing:
    comp_a: int
    pos_a: float
    comp_b: int
    pos_b: float
    dir_a: tuple
    dir_b: tuple
    vertex: int | None


def _geometry(d: Diagram):
    for bend in (0.35, 0.27, 0.41, 0.19, 0.5):
        pos, curves = _layout(d, bend)
        if _tangents_ok(d, curves, math.radians(10)):
            break
    else:
        raise UnsupportedDiagram("no admissible embedding found")
    comps = []
    for k, ((a, _), (b, _)) in enumerate(d.edges):
        p0, p1, p2 = curves[k]
        ta = _unit((p1[0] - p0[0], p1[1] - p0[1]))
        tb = _unit((p1[0] - p2[0], p1[1] - p2[1]))
        ca = (p0[0] + _REACH * ta[0], p0[1] + _REACH * ta[1])
        cb = (p2[0] + _REACH * tb[0], p2[1] + _REACH * tb[1])
        comps.append(_component(curves[k], ca, cb))
    # bounding boxes per segment for a cheap prefilter
    segs = []
    for c, pts in enumerate(comps):
        n = len(pts)
        for i in range(n):
            p, q = pts[i], pts[(i + 1) % n]
            segs.append((c, i, p, q, min(p[0], q[0]), max(p[0], q[0]),
                         min(p[1], q[1]), max(p[1], q[1])))
    segs.sort(key=lambda s: s[4])
    crossings = []
    for i, s in enumerate(segs):
        for t in segs[i + 1:]:
            if t[4] > s[5]:
                break
            if s[0] == t[0] or t[7] < s[6] or t[6] > s[7]:
                continue
            hit = _seg_intersect(s[2], s[3], t[2], t[3])
            if hit is None:
                continue
            pt = (s[2][0] + hit[0] * (s[3][0] - s[2][0]),
                  s[2][1] + hit[0] * (s[3][1] - s[2][1]))
            vertex = None
            for v, pv in enumerate(pos):
                if math.hypot(pt[0] - pv[0], pt[1] - pv[1]) < _REACH + _DISC + 0.5:
                    vertex = v
            crossings.append(_Crossing(
                s[0], s[1] + hit[0], t[0], t[1] + hit[1],
                _unit((s[3][0] - s[2][0], s[3][1] - s[2][1])),
                _unit((t[3][0] - t[2][0], t[3][1] - t[2][1])), vertex))
    # self-crossings would break the one-component-per-edge picture
    return comps, crossings


def _slot_at(d: Diagram, edge_index, v):
    (a, sa), (b, sb) = d.edges[edge_index]
    return sa if a == v else sb


def _over(d, x: _Crossing, choice):
    """True if component a passes over component b."""
    if x.vertex is not None:
        sa, sb = _slot_at(d, x.comp_a, x.vertex), _slot_at(d, x.comp_b, x.vertex)
        if choice[x.vertex] == 0:
            return (sb - sa) % 3 == 1
        return sa < sb
    ka = tuple(sorted(p[0] for p in d.edges[x.comp_a]))
    kb = tuple(sorted(p[0] for p in d.edges[x.comp_b]))
    return (ka, x.comp_a) < (kb, x.comp_b)


def _pd(d, comps, crossings, choice):
    passages = {c: [] for c in range(len(comps))}
    for i, x in enumerate(crossings):
        passages[x.comp_a].append((x.pos_a, i, "a"))
        passages[x.comp_b].append((x.pos_b, i, "b"))
    arc_in, arc_out, arc_comp = {}, {}, {}
    nxt_id = 1
    for c in range(len(comps)):
        ps = sorted(passages[c])
        ids = list(range(nxt_id, nxt_id + len(ps)))
        nxt_id += len(ps)
        for j, (_, i, side) in enumerate(ps):
            arc_out[(i, side)] = ids[j]
            arc_in[(i, side)] = ids[j - 1]
            arc_comp[ids[j]] = c
    out = []
    for i, x in enumerate(crossings):
        a_over = _over(d, x, choice)
        under, over = ("b", "a") if a_over else ("a", "b")
        du = x.dir_b if under == "b" else x.dir_a
        do = x.dir_a if under == "b" else x.dir_b
        spokes = [(math.atan2(-du[1], -du[0]), arc_in[(i, under)]),
                  (math.atan2(du[1], du[0]), arc_out[(i, under)]),
                  (math.atan2(-do[1], -do[0]), arc_in[(i, over)]),
                  (math.atan2(do[1], do[0]), arc_out[(i, over)])]
        base = spokes[0][0]
        spokes.sort(key=lambda s: (s[0] - base) % (2 * math.pi))
        out.append(tuple(s[1] for s in spokes) + (arc_in[(i, over)],))
    return out, arc_comp


def ogl_expand(d: Diagram) -> OGLExpansion:
    """All 2^v resolutions of d, each with its sign and PD code."""
    if any(k[0] != TRI for k in d.kinds):
        raise UnsupportedDiagram("OGL takes manifold diagrams")
    if d.has_self_loop():
        raise UnsupportedDiagram("tadpoles (self-loops) are not supported")
    src = canonical_form(d).canonical if d.n else d
    if src.n == 0:
        return OGLExpansion(src, [FramedPDLink(0, [], [], 1)])
    comps, crossings = _geometry(src)
    terms = []
    for choice in itertools.product((0, 1), repeat=src.n):
        pd, arc_comp = _pd(src, comps, crossings, choice)
        sign = -1 if sum(choice) % 2 else 1
        terms.append(FramedPDLink(len(comps), pd, [1] * len(comps), sign, arc_comp))
    return OGLExpansion(src, terms)
