"""Finite formal linear combinations of canonical diagrams."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .canonical import canonical_form, sort_key
from .diagrams import EMPTY, Diagram, degree


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class GradedSum:
    """Exact rational combination of canonical diagrams, truncated at degree N.

    ``max_degree=None`` means no truncation.  Terms of degree above N are
    dropped on construction, zero coefficients are never stored, and every
    key is a canonical diagram with its AS sign absorbed into the coefficient.
    """

    __slots__ = ("terms", "max_degree")

    def __init__(self, terms=None, max_degree=None):
        self.max_degree = max_degree
        acc = defaultdict(Fraction)
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for d, c in items:
                c = _frac(c)
                if c == 0:
                    continue
                if max_degree is not None and degree(d) > max_degree:
                    continue
                sc = canonical_form(d)
                if sc.sign:
                    acc[sc.canonical] += sc.sign * c
        self.terms = {d: c for d, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, terms, max_degree=None):
        s = cls.__new__(cls)
        s.max_degree = max_degree
        if max_degree is None:
            s.terms = {d: c for d, c in terms.items() if c != 0}
        else:
            s.terms = {d: c for d, c in terms.items()
                       if c != 0 and degree(d) <= max_degree}
        return s

    @classmethod
    def one(cls, max_degree=None):
        return cls._raw({EMPTY: Fraction(1)}, max_degree)

    @classmethod
    def zero(cls, max_degree=None):
        return cls._raw({}, max_degree)

    @classmethod
    def of(cls, d: Diagram, coeff=1, max_degree=None):
        return cls([(d, coeff)], max_degree)

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _min_n(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        if not isinstance(other, GradedSum):
            return NotImplemented
        acc = dict(self.terms)
        for d, c in other.terms.items():
            acc[d] = acc.get(d, 0) + c
        return GradedSum._raw(acc, self._min_n(self.max_degree, other.max_degree))

    def __neg__(self):
        return GradedSum._raw({d: -c for d, c in self.terms.items()}, self.max_degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, GradedSum):
            return NotImplemented
        k = _frac(scalar)
        return GradedSum._raw({d: k * c for d, c in self.terms.items()}, self.max_degree)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / _frac(scalar))

    def __eq__(self, other):
        if not isinstance(other, GradedSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.items())

    def items(self):
        """Terms in deterministic order."""
        return sorted(self.terms.items(), key=lambda kv: sort_key(kv[0]))

    def coeff(self, d: Diagram) -> Fraction:
        sc = canonical_form(d)
        return sc.sign * self.terms.get(sc.canonical, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get(EMPTY, Fraction(0))

    def degrees(self):
        return sorted({degree(d) for d in self.terms})

    def part(self, m: int) -> "GradedSum":
        return GradedSum._raw({d: c for d, c in self.terms.items() if degree(d) == m},
                              self.max_degree)

    def truncate(self, n) -> "GradedSum":
        return GradedSum._raw(self.terms, self._min_n(self.max_degree, n))

    def with_max_degree(self, n) -> "GradedSum":
        s = GradedSum._raw(self.terms, n)
        return s

    def map_diagrams(self, f, max_degree="keep"):
        """Apply ``f: Diagram -> iterable of (coeff, Diagram)`` linearly."""
        n = self.max_degree if max_degree == "keep" else max_degree
        out = []
        for d, c in self.terms.items():
            for k, e in f(d):
                out.append((e, c * k))
        return GradedSum(out, n)

    def __repr__(self):
        if not self.terms:
            return "GradedSum(0)"
        parts = [f"{c}*{d.kinds}/{len(d.edges)}e" for d, c in self.items()]
        return "GradedSum(" + " + ".join(parts) + f"; N={self.max_degree})"
