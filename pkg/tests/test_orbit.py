from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nogo import checker
from nogo.errors import DecompositionFailure, NotSimple, ZeroPoint
from nogo.liealg import builtin, sl2r, so4, su2, su_n
from nogo.orbit import OrbitPoint, isotropy_decomposition, is_regular, minimality_witness, orbit_dimension

from .conftest import small_fractions


def test_su2_e3():
    p = OrbitPoint.of(su2(), [0, 0, 1])
    d = isotropy_decomposition(p)
    assert d.isotropy.basis == ((0, 0, 1),) or [list(v) for v in d.isotropy.basis] == [[0, 0, 1]]
    assert d.tangent.dim == 2 and d.tangent.contains([1, 0, 0]) and d.tangent.contains([0, 1, 0])
    assert d.direct and d.bracket_contained
    assert orbit_dimension(p) == 2
    reg = is_regular(p)
    assert reg.regular and reg.isotropy_abelian


def test_su2_diagonal_point():
    p = OrbitPoint.of(su2(), [1, 1, 1])
    d = isotropy_decomposition(p)
    assert d.isotropy.dim == 1 and d.isotropy.contains([1, 1, 1])


def test_so4_first_factor():
    p = OrbitPoint.of(so4(), [0, 0, 1, 0, 0, 0])
    d = isotropy_decomposition(p)
    assert d.isotropy.dim == 4
    assert all(d.isotropy.contains(v) for v in ([0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0],
                                                [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]))
    assert orbit_dimension(p) == 2
    reg = is_regular(p)
    assert not reg.regular and not reg.isotropy_abelian and not reg.dimension_maximal
    assert reg.max_sampled_dim == 4


def test_so4_minimality_refused():
    with pytest.raises(NotSimple):
        minimality_witness(OrbitPoint.of(so4(), [0, 0, 1, 0, 0, 0]))


def test_zero_point():
    p = OrbitPoint.of(su2(), [0, 0, 0])
    assert orbit_dimension(p) == 0
    assert not is_regular(p).regular
    with pytest.raises(ZeroPoint):
        minimality_witness(p)


def test_minimality_su2():
    c = minimality_witness(OrbitPoint.of(su2(), [0, 0, 1]))
    assert c.payload["rank_chain"] == [2, 3] and c.payload["closure_rounds"] == 1
    checker.verify(c)
    c7 = minimality_witness(OrbitPoint.of(su2(), [7, 0, 0]))
    assert c7.payload["rank_chain"][-1] == 3
    checker.verify(c7)


def test_noncompact_decomposition_fails():
    # h = e in sl(2,R) is nilpotent: ker ad_e meets im ad_e
    with pytest.raises(DecompositionFailure):
        isotropy_decomposition(OrbitPoint.of(sl2r(), [0, 1, 0]))


vec3 = st.lists(small_fractions, min_size=3, max_size=3).filter(any)


@given(vec3)
@settings(max_examples=30, deadline=None)
def test_su2_properties(h):
    p = OrbitPoint.of(su2(), h)
    d = isotropy_decomposition(p)
    assert d.isotropy.contains(h)
    assert orbit_dimension(p) % 2 == 0
    assert minimality_witness(p).payload["rank_chain"][-1] == 3


@given(st.lists(small_fractions, min_size=8, max_size=8).filter(any))
@settings(max_examples=10, deadline=None)
def test_su3_generation(h):
    L = su_n(3)
    p = OrbitPoint.of(L, h)
    d = isotropy_decomposition(p)
    assert d.isotropy.contains(h) and d.bracket_contained
    assert orbit_dimension(p) in (4, 6)
    checker.verify(minimality_witness(p))


def test_builtin_name_forms():
    assert builtin("su(3)").dim == 8
    assert OrbitPoint.of(su2(), ["1/2", 0, 0]).h[0] == Fraction(1, 2)
