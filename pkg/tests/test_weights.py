from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aarhus.diagrams import disjoint_union, k4, strut, tadpole, theta, w2
from aarhus.enumerate import enumerate_diagrams
from aarhus.errors import BadLieData, SingularCovariance
from aarhus.gaussian import LinkingMatrix
from aarhus.gradedsum import GradedSum
from aarhus.relations import ihx_relators
from aarhus.weights import (HbarSeries, LieData, PolyTensor, dump_lie, hbar_grade, load_lie,
                            rozansky_series, sl2, so3, tg_closed, tg_open, wick_pair)

F = Fraction
G = GradedSum
TH = G.of(theta())


def brute_theta(g: LieData):
    """sum f_abc f_def g^ad g^be g^cf by plain loops."""
    gi = g.inv_metric
    n = g.dim
    total = F(0)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                fa = g.fval(a, b, c)
                if not fa:
                    continue
                for d in range(n):
                    for e in range(n):
                        for f in range(n):
                            total += fa * g.fval(d, e, f) * gi[a][d] * gi[b][e] * gi[c][f]
    return total


def test_theta_so3():
    assert tg_closed(so3(), theta()) == 6 == brute_theta(so3())
    assert tg_closed(sl2(), theta()) == brute_theta(sl2())


def test_tadpole_and_union():
    assert tg_closed(so3(), tadpole()) == 0
    assert tg_closed(so3(), disjoint_union(theta(), theta())) == 36


def test_flip_negates():
    for g in (so3(), sl2()):
        assert tg_closed(g, k4().flip(0)) == -tg_closed(g, k4())


def test_bad_lie_data():
    with pytest.raises(BadLieData):
        LieData(1, [[0]], {})
    with pytest.raises(BadLieData):
        LieData(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], {(0, 1, 2): 1})


def test_lie_text_roundtrip():
    for g in (so3(), sl2()):
        assert load_lie(dump_lie(g)) == g


def test_tg_open_examples():
    g = sl2()
    assert tg_open(g, G.one()) == PolyTensor.constant(1)
    xy = tg_open(g, strut("x", "y")).flat()
    want = {}
    for a in range(3):
        for b in range(3):
            c = g.inv_metric[a][b]
            if c:
                key = tuple(sorted([("x", a), ("y", b)]))
                want[key] = want.get(key, 0) + c
    assert xy == want
    xx = tg_open(g, strut("x", "x")).flat()
    want = {}
    for a in range(3):
        for b in range(3):
            c = g.inv_metric[a][b]
            if c:
                key = tuple(sorted([("x", a), ("x", b)]))
                want[key] = want.get(key, 0) + c
    assert xx == want


def test_tg_open_homogeneous():
    p = tg_open(so3(), G.of(w2("x", "y")))
    assert p.homogeneous_degrees() == [2]


def test_wick_examples():
    line = LieData(1, [[1]], {})
    cov = LinkingMatrix(["x"], [[1]])
    one = PolyTensor.constant(1)
    assert wick_pair(one, cov, line) == 1
    p = one + PolyTensor({0: {(("x", 0), ("x", 0)): 1}})
    assert wick_pair(p, cov, line) - wick_pair(one, cov, line) == -1
    odd = one + PolyTensor({1: {(("x", 0),): 3, (("x", 0),) * 3: 2}})
    assert wick_pair(odd, cov, line) == 1
    with pytest.raises(SingularCovariance):
        wick_pair(one, LinkingMatrix(["x"], [[0]]), line)


def test_hbar_examples():
    th2 = G.of(disjoint_union(theta(), theta()))
    assert hbar_grade(G.one()) == {0: G.one()}
    assert hbar_grade(TH) == {1: TH}
    assert hbar_grade(th2) == {2: th2}
    assert rozansky_series(so3(), G.one()) == HbarSeries((1,))
    assert rozansky_series(so3(), G.one() + TH) == HbarSeries((1, 6))
    assert rozansky_series(so3(), G.one() - TH / 2) == HbarSeries((1, -3))


_closed = [sc.canonical for m in (1, 2) for sc in enumerate_diagrams("Aempty", m)]


@given(st.lists(st.tuples(st.sampled_from(_closed), st.integers(-3, 3)), max_size=3),
       st.lists(st.tuples(st.sampled_from(_closed), st.integers(-3, 3)), max_size=3))
def test_rozansky_multiplicative(a, b):
    from aarhus.maps import du_product
    sa, sb = G.one(4) + G(a, 4), G.one(4) + G(b, 4)
    g = so3()
    assert rozansky_series(g, du_product(sa, sb)) == \
        rozansky_series(g, sa) * rozansky_series(g, sb)


@pytest.mark.parametrize("lie", [so3, sl2])
def test_ihx_vanishes_degree_two(lie):
    g = lie()
    for sc in enumerate_diagrams("Aempty", 2, include_zero=True):
        for terms in ihx_relators(sc.canonical):
            assert sum(c * tg_closed(g, d) for c, d in terms) == 0
