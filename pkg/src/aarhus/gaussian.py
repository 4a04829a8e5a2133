"""Perturbed Gaussians, the gluing pairing and formal Gaussian integration.

Covariance bookkeeping: the Gaussian factor is exp of (1/2) sum over ordered
pairs (x, y) of l_xy strut_xy.  As a canonical sum this stores l_xy on
strut_xy for x != y and l_xx / 2 on strut_xx.  The dual factor uses
-(1/2) sum l^xy strut_{dx dy} with the inverse matrix, stored the same way.

A perturbation known to degree 4N determines the integral to degree N: a
component with t trivalent vertices has at most t + 2 legs, so a term with
2t' output vertices has degree at most 2t'.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .diagrams import LEG, TRI, Diagram, disjoint_union, dual, is_dual, strut, undual
from .errors import (NonInvertibleUnit, NotGaussianForm, SingularCovariance,
                     SpaceMismatch)
from .gradedsum import GradedSum
from .linalg import congruence_signature, inverse
from .maps import du_product, exp_union, inverse_union, log_union, sigma
from .relations import normal_form


@dataclass(frozen=True)
class SignaturePair:
    sigma_plus: int
    sigma_minus: int


class LinkingMatrix:
    """Symmetric rational matrix indexed by labels."""

    def __init__(self, labels, entries):
        self.labels = tuple(labels)
        self.entries = tuple(tuple(Fraction(x) for x in row) for row in entries)
        n = len(self.labels)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("matrix shape does not match labels")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("linking matrix must be symmetric")
        self._inv = None

    def __getitem__(self, xy):
        x, y = xy
        return self.entries[self.labels.index(x)][self.labels.index(y)]

    def __eq__(self, other):
        return (isinstance(other, LinkingMatrix) and self.labels == other.labels
                and self.entries == other.entries)

    def __repr__(self):
        return f"LinkingMatrix({self.labels}, {[list(map(str, r)) for r in self.entries]})"

    def is_invertible(self):
        try:
            self.inverse()
            return True
        except SingularCovariance:
            return False

    def inverse(self):
        if self._inv is None:
            from .errors import SolveFailure
            try:
                self._inv = tuple(tuple(r) for r in inverse(self.entries))
            except SolveFailure:
                raise SingularCovariance("linking matrix is not invertible") from None
        return self._inv

    def strut_sum(self, scale, duals=False, inverse_matrix=False, max_degree=None):
        """scale * (1/2) * sum over ordered pairs m_xy strut_xy, as a GradedSum."""
        m = self.inverse() if inverse_matrix else self.entries
        lab = [dual(x) if duals else x for x in self.labels]
        out = []
        n = len(lab)
        for i in range(n):
            for j in range(i, n):
                c = m[i][j] if i != j else m[i][i] / 2
                if c:
                    out.append((strut(lab[i], lab[j]), scale * c))
        return GradedSum(out, max_degree)


@dataclass
class PerturbedGaussian:
    covariance: LinkingMatrix
    perturbation: GradedSum

    def reassemble(self, max_degree=None) -> GradedSum:
        n = self.perturbation.max_degree if max_degree is None else max_degree
        gauss = exp_union(self.covariance.strut_sum(1, max_degree=n), n)
        return du_product(self.perturbation.truncate(n), gauss)


def signature(m) -> SignaturePair:
    entries = m.entries if isinstance(m, LinkingMatrix) else m
    return SignaturePair(*congruence_signature(entries))


def _strut_components(s: GradedSum):
    for d in s.terms:
        for comp in d.components():
            if not any(d.kinds[v][0] == TRI for v in comp):
                return True
    return False


def split_gaussian(g: GradedSum, labels=None) -> PerturbedGaussian:
    """Split G into perturbation and Gaussian; labels default to those on legs."""
    if g.constant_term() != 1:
        raise NotGaussianForm("a perturbed Gaussian has constant term 1")
    if labels is None:
        labels = sorted({k[1] for d in g.terms for k in d.kinds if k[0] == LEG})
    labels = tuple(labels)
    n = g.max_degree
    if n is None:
        # finite data: treat the highest degree present as the truncation
        n = max(g.degrees())
        g = g.truncate(n)
    first = log_union(g.truncate(max(n, 1))).part(1)
    rows = []
    for x in labels:
        row = []
        for y in labels:
            c = first.coeff(strut(x, y))
            row.append(2 * c if x == y else c)
        rows.append(row)
    cov = LinkingMatrix(labels, rows)
    if not cov.is_invertible():
        raise SingularCovariance("covariance is singular (non-regular input)")
    pert = du_product(g, exp_union(cov.strut_sum(-1, max_degree=n), n))
    if _strut_components(pert):
        pert = normal_form(pert, "BX", labels)
        if _strut_components(pert):
            raise NotGaussianForm("strut terms remain after removing the Gaussian")
    return PerturbedGaussian(cov, pert)


# -- gluing ------------------------------------------------------------------

def _glue(d1: Diagram, d2: Diagram, matching):
    """Join legs of d1 to legs of d2 along ``matching`` (pairs of vertex ids)."""
    u = disjoint_union(d1, d2)
    off = d1.n
    mate = {}
    for a, b in matching:
        mate[a] = b + off
        mate[b + off] = a
    legs = set(mate)
    keep = [v for v in range(u.n) if v not in legs]
    inv = {v: i for i, v in enumerate(keep)}
    edges, used, visited = [], set(), set()
    for h in sorted(u._partner):
        if h[0] in legs or h in used:
            continue
        cur = u.partner(h)
        # follow leg, mate, through struts, until a kept half-edge is reached
        while cur[0] in legs:
            visited.add(cur[0])
            visited.add(mate[cur[0]])
            cur = u.partner((mate[cur[0]], 0))
        used.add(h)
        used.add(cur)
        edges.append(((inv[h[0]], h[1]), (inv[cur[0]], cur[1])))
    if visited != legs:
        raise SpaceMismatch("gluing closes a loop with no vertex")
    return Diagram([u.kinds[v] for v in keep], edges)


def _legs_by_label(d: Diagram, strip_dual: bool):
    out = defaultdict(list)
    for v in d.legs():
        x = d.kinds[v][1]
        if strip_dual:
            if not is_dual(x):
                raise SpaceMismatch(f"leg {x!r} of the first argument is not dual")
            x = undual(x)
        out[x].append(v)
    return out


def gluings(d1: Diagram, d2: Diagram):
    """Iterate over all gluings of the dx-legs of d1 to the x-legs of d2."""
    l1 = _legs_by_label(d1, True)
    l2 = _legs_by_label(d2, False)
    if set(l1) != set(l2) or any(len(l1[x]) != len(l2[x]) for x in l1):
        return
    xs = sorted(l1)
    for perms in itertools.product(*(itertools.permutations(l2[x]) for x in xs)):
        matching = [(a, b) for x, p in zip(xs, perms) for a, b in zip(l1[x], p)]
        yield _glue(d1, d2, matching)


def glue_pairing(c1: GradedSum, c2: GradedSum, reduce_output=True, max_degree=None):
    """Sum of all gluings, bilinear; reduced modulo AS/IHX by default."""
    n = max_degree
    out = []
    for d1, a in c1.terms.items():
        for d2, b in c2.terms.items():
            if n is not None and len(d2.trivalent()) + len(d1.trivalent()) > 2 * n:
                continue
            for g in gluings(d1, d2):
                out.append((g, a * b))
    s = GradedSum(out, n)
    return normal_form(s, "Aempty") if reduce_output else s


def _dual_monomials(counts, cov: LinkingMatrix):
    """Strut monomials of exp(-(1/2) sum l^xy strut) with prescribed leg counts."""
    labels = cov.labels
    inv = cov.inverse()
    pairs = [(i, j) for i in range(len(labels)) for j in range(i, len(labels))]
    need = [counts.get(x, 0) for x in labels]

    def rec(k, remaining):
        if k == len(pairs):
            if not any(remaining):
                yield ()
            return
        i, j = pairs[k]
        cap = remaining[i] // 2 if i == j else min(remaining[i], remaining[j])
        for m in range(cap + 1):
            r = list(remaining)
            if i == j:
                r[i] -= 2 * m
            else:
                r[i] -= m
                r[j] -= m
            for rest in rec(k + 1, r):
                yield ((m, i, j),) + rest

    for mono in rec(0, need):
        coeff = Fraction(1)
        parts = []
        for m, i, j in mono:
            if not m:
                continue
            c = -inv[i][j] if i != j else -inv[i][i] / 2
            coeff *= c ** m / factorial(m)
            parts.extend([strut(dual(labels[i]), dual(labels[j]))] * m)
        if coeff:
            yield coeff, disjoint_union(*parts)


def integrate_fg(pg: PerturbedGaussian, n: int) -> GradedSum:
    """Pair the perturbation with exp(-(1/2) sum l^xy strut_{dx dy}), to degree n."""
    cov = pg.covariance
    cov.inverse()
    out = []
    for d2, b in pg.perturbation.terms.items():
        if len(d2.trivalent()) > 2 * n:
            continue
        counts = d2.leg_counts()
        if set(counts) - set(cov.labels):
            raise SpaceMismatch("perturbation leg outside the covariance labels")
        for coeff, d1 in _dual_monomials(counts, cov):
            for g in gluings(d1, d2):
                out.append((g, coeff * b))
    return normal_form(GradedSum(out, n), "Aempty")


def substitute_legs(g: GradedSum, a: dict) -> GradedSum:
    """Linear change of leg variables x -> sum_y a[x][y] y, expanded multilinearly."""
    out = []
    for d, c in g.terms.items():
        legs = d.legs()
        choices = [sorted(a[d.kinds[v][1]].items()) for v in legs]
        for pick in itertools.product(*choices):
            k = c
            kinds = list(d.kinds)
            for v, (y, w) in zip(legs, pick):
                k *= w
                kinds[v] = (LEG, y)
            if k:
                out.append((d.with_kinds(kinds), k))
    return GradedSum(out, g.max_degree)


# -- the invariant ----------------------------------------------------------

def aarhus0(zcheck: GradedSum, n: int, labels=None) -> GradedSum:
    b = sigma(zcheck, labels)
    return integrate_fg(split_gaussian(b, labels), n)


def aarhus(zcheck: GradedSum, uplus: GradedSum, uminus: GradedSum, n: int,
           linking: LinkingMatrix = None, labels=None) -> GradedSum:
    """U+^(-s+) U-^(-s-) times the unnormalized value, s+- from the linking matrix.

    Without an explicit linking matrix it is read off the Gaussian part.
    """
    for u in (uplus, uminus):
        if u.constant_term() == 0:
            raise NonInvertibleUnit("unknot value has zero constant term")
    if zcheck.is_zero():
        raise NotGaussianForm("zero input")
    if linking is None and labels is None and not any(d.n for d in zcheck.terms):
        # empty surgery presentation
        base, sig = GradedSum.one(n), SignaturePair(0, 0)
    else:
        pg = split_gaussian(sigma(zcheck, labels), labels)
        if linking is not None and linking != pg.covariance:
            raise SpaceMismatch("supplied linking matrix differs from the data")
        base, sig = integrate_fg(pg, n), signature(pg.covariance)
    out = base.truncate(n)
    for u, k in ((uplus, sig.sigma_plus), (uminus, sig.sigma_minus)):
        if k:
            inv = inverse_union(u.truncate(n), n)
            for _ in range(k):
                out = du_product(out, inv)
    return normal_form(out, "Aempty")
