"""Exact linear algebra over the integers and rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import SolveFailure


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    lead = min(row)
    if row[lead] < 0:
        row = {k: -v for k, v in row.items()}
    return row


def integral_row(row: dict) -> dict:
    """Scale a rational sparse row to a primitive integer row (zeros dropped)."""
    row = {k: Fraction(v) for k, v in row.items() if v != 0}
    if not row:
        return {}
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return _primitive({k: int(v * den) for k, v in row.items()})


class Echelon:
    """Fraction-free sparse row echelon form; the pivot of a row is its least column."""

    def __init__(self):
        self.pivots = {}

    def reduce(self, row: dict) -> dict:
        row = integral_row(row)
        while row:
            c = min(row)
            p = self.pivots.get(c)
            if p is None:
                return row
            a, b = p[c], row[c]
            new = {k: a * v for k, v in row.items()}
            for k, v in p.items():
                new[k] = new.get(k, 0) - b * v
            row = {k: v for k, v in new.items() if v}
            if row:
                row = _primitive(row)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solved(self) -> dict:
        """Each pivot column written over the free columns, by back substitution."""
        out = {}
        for c in sorted(self.pivots, reverse=True):
            p = self.pivots[c]
            lead = Fraction(p[c])
            expr = {}
            for k, v in p.items():
                if k == c:
                    continue
                coef = -Fraction(v) / lead
                if k in out:
                    for f, w in out[k].items():
                        expr[f] = expr.get(f, 0) + coef * w
                else:
                    expr[k] = expr.get(k, 0) + coef
            out[c] = {k: v for k, v in expr.items() if v != 0}
        return out


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add({i: x for i, x in enumerate(v) if x != 0})
    return e.rank


def solve(a, b):
    """Solve the square system a·x = b exactly; ``b`` may be a list of columns."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    multi = bool(b) and isinstance(b[0], (list, tuple))
    rhs = [list(map(Fraction, r)) if multi else [Fraction(r)] for r in b]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SolveFailure(f"singular matrix (column {col})")
        m[col], m[piv] = m[piv], m[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        rhs[col] = [x * inv for x in rhs[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
                rhs[r] = [x - f * y for x, y in zip(rhs[r], rhs[col])]
    return rhs if multi else [r[0] for r in rhs]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(a):
    n = len(a)
    if n == 0:
        return []
    cols = solve(a, identity(n))
    return [list(r) for r in cols]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]


def congruence_signature(a):
    """(positive, negative) counts of a symmetric rational matrix, by congruence."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        i = next((k for k in idx if m[k][k] != 0), None)
        if i is None:
            # all remaining diagonal entries vanish; find an off-diagonal pair
            pair = next(((k, l) for k in idx for l in idx if l != k and m[k][l] != 0), None)
            if pair is None:
                break
            k, l = pair
            # e_k -> e_k + e_l makes the (k, k) entry 2 m[k][l] != 0
            for r in range(n):
                m[r][k] += m[r][l]
            for c in range(n):
                m[k][c] += m[l][c]
            i = k
        d = m[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in idx if k != i]
        for k in rest:
            f = m[k][i] / d
            if f:
                for c in range(n):
                    m[k][c] -= f * m[i][c]
                for r in range(n):
                    m[r][k] -= f * m[r][i]
        idx = rest
    return pos, neg
