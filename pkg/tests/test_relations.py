from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aarhus import io
from aarhus.canonical import canonical_form
from aarhus.diagrams import EMPTY, strut, tadpole, theta
from aarhus.enumerate import enumerate_diagrams
from aarhus.errors import SpaceMismatch
from aarhus.gradedsum import GradedSum
from aarhus.linalg import Echelon, inverse, matmul, rank, solve
from aarhus.errors import SolveFailure
from aarhus import relations
from aarhus.relations import (dimension, equal_mod_relations, ihx_relators, normal_form,
                              quotient_basis, reduce, relation_matrix, stu_relators)


def test_tadpole_self_negating():
    s = GradedSum.of(tadpole()) + GradedSum.of(tadpole())
    assert s.is_zero()
    assert GradedSum.of(tadpole()).is_zero()


def test_low_degree_dims():
    assert dimension("Aempty", 1) == 1
    assert dimension("Aempty", 2) == 2
    assert quotient_basis("Aempty", 0).basis == [EMPTY]
    assert quotient_basis("Aempty", 3).dim == 3
    assert quotient_basis("Aempty", 4).dim == 6
    assert dimension("B", 1, ["x"]) == 1


def test_reduce_examples():
    s = GradedSum([(theta(), 1), (tadpole(), 5)])
    assert reduce(s, "Aempty") == reduce(GradedSum.of(theta()), "Aempty")
    assert reduce(GradedSum.zero(), "Aempty") == {}


def test_ihx_relator_reduces_to_zero():
    k = enumerate_diagrams("Aempty", 2)[-1].canonical
    for terms in ihx_relators(k):
        s = GradedSum([(d, c) for c, d in terms])
        vec = reduce(s, "Aempty")
        assert all(x == 0 for v in vec.values() for x in v)


def test_stu_relators_vanish_in_quotient():
    for sc in enumerate_diagrams("AupX", 2, ["x"]):
        for terms in stu_relators(sc.canonical):
            assert normal_form(GradedSum([(d, c) for c, d in terms]), "Aup", ["x"]).is_zero()


def test_relation_matrix_rank_matches_dim():
    rm = relation_matrix("Aempty", 3)
    qb = quotient_basis("Aempty", 3)
    live = [d for d in rm.columns if canonical_form(d).sign != 0]
    e = Echelon()
    for r in rm.rows:
        e.add(dict(r))
    assert len(live) - e.rank == qb.dim


def test_normal_form_is_projection():
    pool = [sc.canonical for sc in enumerate_diagrams("AupX", 2, ["x", "y"])]
    s = GradedSum([(d, Fraction(i + 1, 3)) for i, d in enumerate(pool)])
    nf = normal_form(s, "Aup", ["x", "y"])
    assert normal_form(nf, "Aup", ["x", "y"]) == nf
    assert equal_mod_relations(s, nf, "Aup", ["x", "y"])


def test_space_mismatch():
    with pytest.raises(SpaceMismatch):
        reduce(GradedSum.of(strut("x", "y")), "Aempty")
    with pytest.raises(SpaceMismatch):
        relations.normalize_space("nowhere")


def test_disk_cache_roundtrip(tmp_path):
    relations.set_cache_dir(str(tmp_path))
    try:
        relations.clear_memory_cache()
        a = quotient_basis("Aup", 2, ["x"])
        files = list(tmp_path.iterdir())
        assert any(f.suffix != ".lock" for f in files)
        relations.clear_memory_cache()
        b = quotient_basis("Aup", 2, ["x"])
        assert a.basis == b.basis and a.table == b.table
        assert io.serialize_basis(a) == io.serialize_basis(b)
    finally:
        relations.set_cache_dir(None)
        relations.clear_memory_cache()


# -- exact linear algebra -----------------------------------------------------

small = st.integers(-4, 4).map(Fraction)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_or_singular(a):
    try:
        inv = inverse(a)
    except SolveFailure:
        assert rank([{j: x for j, x in enumerate(r) if x} for r in a]) < 3
        return
    eye = matmul(a, inv)
    assert eye == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


@given(st.lists(st.dictionaries(st.integers(0, 5), small.filter(bool), max_size=4),
                max_size=6))
def test_echelon_contains_its_rows(rows):
    e = Echelon()
    for r in rows:
        e.add(dict(r))
    for r in rows:
        assert e.contains(dict(r))
    dense = [[r.get(j, 0) for j in range(6)] for r in rows]
    assert e.rank == rank(dense)


def test_solve_simple():
    assert solve([[2, 0], [0, 3]], [4, 9]) == [2, 3]
