"""Lie algebra weight systems and a symbolic Wick pairing.

Vertices map to the structure tensor f_abc (indices in cyclic slot order,
all lowered), edges to the inverse metric g^ab, and a leg marked x to the
variable x_a through g^ab.  The Wick side pairs a polynomial P with the
Gaussian of inverse covariance by applying

    D = -1/2 sum_{x,y} l^xy sum_{a,c} g_ac d/dx_a d/dy_c

and reading off sum_n D^n P / n! at zero.  No constants are dropped, so
this matches the diagrammatic integral exactly.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .diagrams import TRI, Diagram
from .errors import BadLieData, SingularCovariance
from .gradedsum import GradedSum
from .linalg import inverse
from .errors import SolveFailure


def _levi(i, j, k):
    return (i - j) * (j - k) * (k - i) // 2


class LieData:
    """A metrized Lie algebra: metric g_ab and lowered structure tensor f_abc."""

    def __init__(self, dim, metric, structure, name=None, check=True):
        self.dim = dim
        self.name = name
        self.metric = tuple(tuple(Fraction(x) for x in r) for r in metric)
        self.f = {k: Fraction(v) for k, v in structure.items() if v != 0}
        if check:
            self.validate()
        try:
            self.inv_metric = tuple(tuple(r) for r in inverse(self.metric))
        except SolveFailure:
            raise BadLieData("metric is not invertible") from None
        self._raised = {}

    def validate(self):
        n = self.dim
        g = self.metric
        if len(g) != n or any(len(r) != n for r in g):
            raise BadLieData("metric has the wrong shape")
        if any(g[a][b] != g[b][a] for a in range(n) for b in range(n)):
            raise BadLieData("metric is not symmetric")
        try:
            ginv = inverse(g)
        except SolveFailure:
            raise BadLieData("metric is not invertible") from None
        f = self.fval
        for a, b, c in itertools.product(range(n), repeat=3):
            v = f(a, b, c)
            if v != f(b, c, a) or v != -f(b, a, c):
                raise BadLieData(f"f is not totally antisymmetric at {(a, b, c)}")
        for a, b, c, d in itertools.product(range(n), repeat=4):
            tot = Fraction(0)
            for e, e2 in itertools.product(range(n), repeat=2):
                w = ginv[e][e2]
                if w:
                    tot += w * (f(a, b, e) * f(e2, c, d) + f(b, c, e) * f(e2, a, d)
                                + f(c, a, e) * f(e2, b, d))
            if tot:
                raise BadLieData(f"Jacobi identity fails at {(a, b, c, d)}")

    def __eq__(self, other):
        return (isinstance(other, LieData) and self.dim == other.dim
                and self.metric == other.metric and self.f == other.f)

    def fval(self, a, b, c):
        return self.f.get((a, b, c), Fraction(0))

    def tensor(self, raised):
        """Nonzero entries of f with the slots in ``raised`` raised by g^-1."""
        raised = tuple(sorted(raised))
        if raised not in self._raised:
            n = self.dim
            cur = {k: v for k, v in self.f.items()}
            for s in raised:
                nxt = defaultdict(Fraction)
                for idx, v in cur.items():
                    for a in range(n):
                        w = self.inv_metric[a][idx[s]]
                        if w:
                            j = list(idx)
                            j[s] = a
                            nxt[tuple(j)] += v * w
                cur = {k: v for k, v in nxt.items() if v}
            self._raised[raised] = sorted(cur.items())
        return self._raised[raised]


def so3() -> LieData:
    f = {(a, b, c): _levi(a, b, c) for a in range(3) for b in range(3) for c in range(3)}
    return LieData(3, [[int(a == b) for b in range(3)] for a in range(3)], f, "so3")


def sl2() -> LieData:
    """Basis H, E+F, E-F with the trace form of the defining representation."""
    f = {(a, b, c): -4 * _levi(a, b, c)
         for a in range(3) for b in range(3) for c in range(3)}
    return LieData(3, [[2, 0, 0], [0, 2, 0], [0, 0, -2]], f, "sl2")


PRESETS = {"so3": so3, "sl2": sl2}


# -- polynomials ---------------------------------------------------------------

def _mono_mul(m1, m2):
    return tuple(sorted(m1 + m2))


def _poly_mul(p, q):
    out = defaultdict(Fraction)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            out[_mono_mul(m1, m2)] += c1 * c2
    return {k: v for k, v in out.items() if v}


class PolyTensor:
    """Polynomial in variables (label, index), split by trivalent-vertex count.

    ``parts[t]`` maps a monomial (a sorted tuple of variables) to its
    coefficient; t is the number of trivalent vertices the term came from.
    """

    def __init__(self, parts=None):
        self.parts = {}
        for t, p in (parts or {}).items():
            p = {m: Fraction(c) for m, c in p.items() if c != 0}
            if p:
                self.parts[t] = p

    @classmethod
    def constant(cls, c=1):
        return cls({0: {(): c}})

    def __add__(self, other):
        parts = {t: dict(p) for t, p in self.parts.items()}
        for t, p in other.parts.items():
            q = parts.setdefault(t, {})
            for m, c in p.items():
                q[m] = q.get(m, 0) + c
        return PolyTensor(parts)

    def __mul__(self, other):
        if not isinstance(other, PolyTensor):
            k = Fraction(other)
            return PolyTensor({t: {m: c * k for m, c in p.items()}
                               for t, p in self.parts.items()})
        parts = defaultdict(dict)
        for t1, p in self.parts.items():
            for t2, q in other.parts.items():
                acc = parts[t1 + t2]
                for m, c in _poly_mul(p, q).items():
                    acc[m] = acc.get(m, 0) + c
        return PolyTensor(parts)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyTensor) and self.parts == other.parts

    def flat(self):
        out = defaultdict(Fraction)
        for p in self.parts.values():
            for m, c in p.items():
                out[m] += c
        return {k: v for k, v in out.items() if v}

    def labels(self):
        return sorted({v[0] for p in self.parts.values() for m in p for v in m})

    def homogeneous_degrees(self):
        return sorted({len(m) for m in self.flat()})

    def __repr__(self):
        return f"PolyTensor({self.parts})"


# -- contraction ------------------------------------------------------------

def _contract(g: LieData, d: Diagram):
    """Contract one diagram; returns a polynomial dict (constant for closed)."""
    if d.n == 0:
        return {(): Fraction(1)}
    eid = {}
    for k, (a, b) in enumerate(d.edges):
        eid[a] = (k, 0)
        eid[b] = (k, 1)
    n = g.dim
    # vertex order: greedy BFS keeps the open-edge frontier small
    order, seen = [], set()
    for start in range(d.n):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in d.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    def entries(v):
        kind = d.kinds[v]
        if kind[0] == TRI:
            raised = [s for s in range(3) if eid[(v, s)][1] == 1]
            for idx, val in g.tensor(raised):
                yield idx, {(): val}
        else:
            raised = eid[(v, 0)][1] == 1
            x = kind[1]
            for a in range(n):
                if raised:
                    poly = {((x, b),): g.inv_metric[a][b] for b in range(n)
                            if g.inv_metric[a][b]}
                else:
                    poly = {((x, a),): Fraction(1)}
                yield (a,), poly

    remaining = {k: 2 for k in range(len(d.edges))}
    # state: frozenset of (edge, index) for open edges -> polynomial
    state = {(): {(): Fraction(1)}}
    open_edges = []
    for v in order:
        slots = range(3 if d.kinds[v][0] == TRI else 1)
        vedges = [eid[(v, s)][0] for s in slots]
        new_open = list(open_edges)
        for e in vedges:
            if e not in new_open:
                new_open.append(e)
        for e in vedges:
            remaining[e] -= 1
        keep = [e for e in new_open if remaining[e] > 0]
        pos = {e: i for i, e in enumerate(open_edges)}
        vert = list(entries(v))
        nxt = defaultdict(lambda: defaultdict(Fraction))
        for key, poly in state.items():
            for idx, vp in vert:
                assign = {}
                ok = True
                for e, i in zip(vedges, idx):
                    want = key[pos[e]] if e in pos else assign.get(e)
                    if want is not None and want != i:
                        ok = False
                        break
                    assign[e] = i
                if not ok:
                    continue
                full = dict(zip(open_edges, key))
                full.update(assign)
                nk = tuple(full[e] for e in keep)
                acc = nxt[nk]
                for m, c in _poly_mul(poly, vp).items():
                    acc[m] += c
        state = {k: {m: c for m, c in p.items() if c} for k, p in nxt.items()}
        state = {k: p for k, p in state.items() if p}
        open_edges = keep
        if not state:
            return {}
    return state.get((), {})


def tg_closed(g: LieData, s) -> Fraction:
    """Scalar weight of a manifold-diagram sum."""
    if isinstance(s, Diagram):
        s = GradedSum.of(s)
    total = Fraction(0)
    for d, c in s.terms.items():
        if d.legs() or d.attachments():
            from .errors import SpaceMismatch
            raise SpaceMismatch("tg_closed takes manifold diagrams")
        total += c * _weight_closed(g, d)
    return total


def _weight_closed(g, d):
    out = Fraction(1)
    for comp in d.components():
        val = _contract(g, d.subdiagram(comp)).get((), Fraction(0))
        out *= val
        if not out:
            break
    return out


def tg_open(g: LieData, s) -> PolyTensor:
    if isinstance(s, Diagram):
        s = GradedSum.of(s)
    out = PolyTensor()
    for d, c in s.terms.items():
        if d.attachments():
            from .errors import SpaceMismatch
            raise SpaceMismatch("tg_open takes uni-trivalent diagrams")
        poly = _contract(g, d)
        out = out + PolyTensor({len(d.trivalent()): poly}) * c
    return out


# -- Wick pairing ---------------------------------------------------------------

def _apply_d(poly, kernel):
    """Apply the second-order operator with coefficients kernel[(u, v)]."""
    out = defaultdict(Fraction)
    for m, c in poly.items():
        counts = defaultdict(int)
        for var in m:
            counts[var] += 1
        for (u, v), k in kernel.items():
            if u == v:
                if counts[u] < 2:
                    continue
                mult = counts[u] * (counts[u] - 1)
                rest = list(m)
                rest.remove(u)
                rest.remove(u)
            else:
                if not counts[u] or not counts[v]:
                    continue
                mult = counts[u] * counts[v]
                rest = list(m)
                rest.remove(u)
                rest.remove(v)
            out[tuple(rest)] += c * k * mult
    return {k: v for k, v in out.items() if v}


def wick_kernel(linking, g: LieData):
    """Coefficients of D over ordered variable pairs."""
    try:
        inv = linking.inverse()
    except SolveFailure:
        raise SingularCovariance("linking matrix is not invertible") from None
    labels = linking.labels
    kernel = defaultdict(Fraction)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            for a in range(g.dim):
                for c in range(g.dim):
                    w = -Fraction(1, 2) * inv[i][j] * g.metric[a][c]
                    if w:
                        kernel[((x, a), (y, c))] += w
    return dict(kernel)


def wick_pair(p: PolyTensor, linking, g: LieData, n=None) -> Fraction:
    """Formal Gaussian pairing of P; parts from more than 2n vertices are dropped."""
    kernel = wick_kernel(linking, g)
    total = Fraction(0)
    by_degree = defaultdict(dict)
    for t, part in p.parts.items():
        if n is not None and t > 2 * n:
            continue
        for m, c in part.items():
            if m and m[0][0] not in linking.labels:
                raise SingularCovariance(f"variable {m[0][0]!r} has no covariance")
            by_degree[len(m)][m] = by_degree[len(m)].get(m, 0) + c
    for k, poly in by_degree.items():
        if k % 2:
            continue
        cur = poly
        for _ in range(k // 2):
            cur = _apply_d(cur, kernel)
            if not cur:
                break
        total += cur.get((), Fraction(0)) / factorial(k // 2)
    return total


# -- hbar bookkeeping -----------------------------------------------------------

@dataclass
class HbarSeries:
    coeffs: tuple
    max_degree: int = None

    def __mul__(self, other):
        n = min(x for x in (self.max_degree, other.max_degree, None) if x is not None) \
            if (self.max_degree is not None or other.max_degree is not None) else None
        size = len(self.coeffs) + len(other.coeffs) - 1
        if n is not None:
            size = min(size, n + 1)
        out = [Fraction(0)] * max(size, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                if i + j < size:
                    out[i + j] += a * b
        return HbarSeries(_trim(out), n)

    def __eq__(self, other):
        return isinstance(other, HbarSeries) and _trim(self.coeffs) == _trim(other.coeffs)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def hbar_grade(s: GradedSum) -> dict:
    """The series sum_m hbar^m s_m, as a map m -> degree-m part."""
    return {m: s.part(m) for m in s.degrees()}


def rozansky_series(g: LieData, value: GradedSum) -> HbarSeries:
    graded = hbar_grade(value)
    top = max(graded, default=0)
    coeffs = [tg_closed(g, graded[m]) if m in graded else Fraction(0)
              for m in range(top + 1)]
    return HbarSeries(_trim(coeffs), value.max_degree)


def load_lie(text: str) -> LieData:
    """Parse ``dim d`` / ``metric a b p/q`` / ``f a b c p/q`` lines (1-based)."""
    from .errors import ParseError
    dim, metric, f = None, {}, {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("aarhus-format"):
            continue
        parts = line.split()
        try:
            if parts[0] == "dim" and len(parts) == 2:
                dim = int(parts[1])
            elif parts[0] == "metric" and len(parts) == 4:
                metric[(int(parts[1]) - 1, int(parts[2]) - 1)] = Fraction(parts[3])
            elif parts[0] == "f" and len(parts) == 5:
                f[tuple(int(x) - 1 for x in parts[1:4])] = Fraction(parts[4])
            elif parts[0] in ("kind", "labels", "truncate"):
                continue
            else:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise ParseError(ln, "dim d | metric a b p/q | f a b c p/q") from None
    if dim is None:
        raise ParseError(1, "a 'dim' line")
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for (a, b), v in metric.items():
        g[a][b] = v
        g[b][a] = v
    # only listed entries are given; fill antisymmetric images
    full = {}
    for (a, b, c), v in f.items():
        for (p, q, r), s in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
                             ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)):
            full[(p, q, r)] = s * v
    return LieData(dim, g, full)


def dump_lie(g: LieData) -> str:
    lines = [f"dim {g.dim}"]
    for a in range(g.dim):
        for b in range(a, g.dim):
            if g.metric[a][b]:
                lines.append(f"metric {a + 1} {b + 1} {g.metric[a][b]}")
    for (a, b, c), v in sorted(g.f.items()):
        if a < b < c:
            lines.append(f"f {a + 1} {b + 1} {c + 1} {v}")
    return "\n".join(lines) + "\n"
