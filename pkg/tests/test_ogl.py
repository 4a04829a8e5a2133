from collections import Counter

import pytest

from aarhus.diagrams import EMPTY, k4, strut, tadpole, theta
from aarhus.errors import UnsupportedDiagram
from aarhus.ogl import ogl_expand


def test_empty():
    ex = ogl_expand(EMPTY)
    assert len(ex.terms) == 1
    t = ex.terms[0]
    assert (t.components, t.pd_crossings, t.sign) == (0, [], 1)


def test_theta():
    ex = ogl_expand(theta())
    assert len(ex.terms) == 4
    assert [t.sign for t in ex.terms] == [1, -1, -1, 1]
    for t in ex.terms:
        assert t.components == 3 and t.framings == [1, 1, 1]


def test_k4():
    ex = ogl_expand(k4())
    assert len(ex.terms) == 16
    assert all(t.components == 6 for t in ex.terms)


def test_pd_is_well_formed():
    for t in ogl_expand(k4()).terms:
        uses = Counter(a for x in t.pd_crossings for a in x[:4])
        assert set(uses.values()) == {2}
        for x in t.pd_crossings:
            assert x[4] in (x[1], x[3])
        assert t.arc_cycles() == t.components


def test_resolutions_differ_only_at_vertices():
    ex = ogl_expand(theta())
    a, b = ex.terms[0], ex.terms[3]
    assert a.pd_crossings != b.pd_crossings
    assert len(a.pd_crossings) == len(b.pd_crossings)


def test_rejects_non_manifold():
    with pytest.raises(UnsupportedDiagram):
        ogl_expand(strut("x", "y"))
    with pytest.raises(UnsupportedDiagram):
        ogl_expand(tadpole())
