from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aarhus import io
from aarhus.diagrams import EMPTY, chord, strut, theta
from aarhus.enumerate import enumerate_diagrams
from aarhus.errors import ParseError, SpaceMismatch, VersionMismatch
from aarhus.gaussian import LinkingMatrix
from aarhus.gradedsum import GradedSum
from aarhus.ogl import ogl_expand
from aarhus.relations import quotient_basis
from aarhus.weights import sl2, so3

F = Fraction


def test_theta_roundtrip():
    text = io.serialize(theta())
    assert io.parse(text) == theta() or io.serialize(io.parse(text)) == text


def test_unknown_space_tag():
    text = io.serialize(theta()).replace("kind diagram", "kind diagram\nspace Nowhere")
    with pytest.raises(ParseError):
        io.parse(text)


def test_version_mismatch():
    text = io.serialize(theta()).replace("aarhus-format 1", "aarhus-format 9")
    with pytest.raises(VersionMismatch):
        io.parse(text)


def test_negative_fraction_roundtrip():
    s = GradedSum([(theta(), F(-3, 7)), (EMPTY, 1)], 3)
    text = io.serialize(s)
    assert "coeff -3/7" in text
    back = io.parse(text)
    assert back == s and back.max_degree == 3


def test_parse_error_has_line():
    text = io.serialize(GradedSum.of(theta())).replace("coeff 1", "coeff one", 1)
    with pytest.raises(ParseError) as err:
        io.parse(text)
    assert err.value.line > 1


def test_matrix_without_header():
    m = io.parse("labels x y\n0 1\n1 0\n")
    assert m == LinkingMatrix(["x", "y"], [[0, 1], [1, 0]])
    with pytest.raises(ParseError):
        io.parse("labels x y\n0 1\n2 0\n")


def test_mixed_sum_refused():
    with pytest.raises(SpaceMismatch):
        io.serialize(GradedSum([(theta(), 1), (strut("x", "x"), 1)]))


def test_header_space_is_enforced():
    text = io.serialize(chord("x", "y"), space="AupX", labels=["x", "y"])
    with pytest.raises(ParseError):
        io.parse(text.replace("labels x y", "labels x"))


@pytest.mark.parametrize("value", [so3(), sl2(), ogl_expand(theta()),
                                   LinkingMatrix(["x", "y"], [[0, 1], [1, F(1, 2)]])])
def test_other_kinds_roundtrip(value):
    text = io.serialize(value)
    back = io.parse(text)
    assert back == value
    assert io.serialize(back) == text


def test_basis_roundtrip():
    qb = quotient_basis("Aup", 2, ["x"])
    text = io.serialize(qb)
    back = io.parse_basis(text)
    assert back.basis == qb.basis and back.table == qb.table


_pools = [[sc.canonical for m in range(4) for sc in enumerate_diagrams("Aempty", m)],
          [sc.canonical for m in range(3) for sc in enumerate_diagrams("BX", m, ["x", "y"])],
          [sc.canonical for m in range(3) for sc in enumerate_diagrams("AupX", m, ["x"])]]


@st.composite
def sums(draw):
    pool = draw(st.sampled_from(_pools))
    terms = draw(st.lists(st.tuples(st.sampled_from(pool),
                                    st.fractions(max_denominator=50).filter(bool)),
                          max_size=5))
    return GradedSum(terms, draw(st.one_of(st.none(), st.integers(0, 4))))


@given(sums())
def test_gradedsum_roundtrip(s):
    text = io.serialize(s)
    back = io.parse(text)
    assert back == s
    assert io.serialize(back) == text
