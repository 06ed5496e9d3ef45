import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nogo import exact
from nogo.errors import AntisymmetryViolation, JacobiViolation, ParseError, UnsupportedAlgebra
from nogo.liealg import (
    Subspace,
    abelian,
    builtin,
    center,
    derived_algebra,
    direct_sum,
    from_json,
    is_compact_type,
    is_semisimple,
    is_simple,
    killing_form,
    lie_generate,
    new_lie_algebra,
    sl2r,
    so4,
    su2,
    su_n,
    to_json,
)

from .conftest import small_fractions


def eps_tensor():
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1}.items():
        c[i][j][k] = Fraction(s)
        c[j][i][k] = Fraction(-s)
    return c


def test_su2_from_tensor():
    L = new_lie_algebra(eps_tensor())
    assert L.dim == 3
    assert L == su2() or L.c == su2().c


def test_abelian_tensor_valid():
    assert new_lie_algebra([[[0, 0], [0, 0]], [[0, 0], [0, 0]]]).dim == 2


def test_antisymmetry_violation_names_indices():
    c = eps_tensor()
    c[0][1][2] = Fraction(-1)  # c^3_21 stays -1
    with pytest.raises(AntisymmetryViolation) as info:
        new_lie_algebra(c)
    assert info.value.indices == (1, 2, 3)


def test_jacobi_violation():
    # antisymmetric but [e1,e2] = e3, [e1,e3] = e3: Jacobi fails
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = Fraction(1), Fraction(-1)
    c[0][2][2], c[2][0][2] = Fraction(1), Fraction(-1)
    c[1][2][0], c[2][1][0] = Fraction(1), Fraction(-1)
    with pytest.raises(JacobiViolation):
        new_lie_algebra(c)


def ad_matrices_numpy(L):
    # oracle: ad_i[k][j] = c^k_ij as floats
    n = L.dim
    return [np.array([[float(L.c[i][j][k]) for j in range(n)] for k in range(n)]) for i in range(n)]


@pytest.mark.parametrize("name", ["su2", "so4", "su3", "sl2r", "su2+abelian1"])
def test_killing_against_trace_oracle(name):
    L = builtin(name)
    ads = ad_matrices_numpy(L)
    K = killing_form(L).matrix
    for i in range(L.dim):
        for j in range(L.dim):
            assert float(K[i][j]) == pytest.approx(np.trace(ads[i] @ ads[j]))


def test_killing_su2_so4():
    assert [list(r) for r in killing_form(su2()).matrix] == [[-2 * int(i == j) for j in range(3)] for i in range(3)]
    K = killing_form(so4()).matrix
    assert all(K[i][j] == (-2 if i == j else 0) for i in range(6) for j in range(6))
    assert not any(killing_form(abelian(2)).matrix[0] + killing_form(abelian(2)).matrix[1])


def test_su_n2_matches_su2_invariants():
    a, b = su_n(2), su2()
    assert a.dim == b.dim == 3
    assert killing_form(a).signature() == killing_form(b).signature() == (0, 3, 0)
    assert is_simple(a)


@pytest.mark.parametrize("name,ss,compact,zdim", [
    ("su2", True, True, 0), ("so4", True, True, 0), ("su3", True, True, 0), ("abelian2", False, False, 2),
    ("sl2r", True, False, 0), ("su2+abelian1", False, False, 1)])
def test_structure_verdicts(name, ss, compact, zdim):
    L = builtin(name)
    assert is_semisimple(L) == ss
    assert is_compact_type(L) == compact
    assert center(L).dim == zdim


def test_compact_minors_su2():
    assert killing_form(su2()).leading_minors() == [-2, 4, -8]


def test_center_of_su2_plus_line_is_the_line():
    L = builtin("su2+abelian1")
    z = center(L)
    assert z.dim == 1 and z.contains([0, 0, 0, 1])


def test_derived_and_generate():
    L = su2()
    assert derived_algebra(L).is_full()
    e1, e2 = L.basis_vector(0), L.basis_vector(1)
    assert lie_generate(L, [e1]).dim == 1
    assert lie_generate(L, [e1, e2]).is_full()


def test_simplicity():
    assert is_simple(su2()) and is_simple(su_n(3)) and is_simple(sl2r())
    assert not is_simple(so4())
    assert not is_simple(abelian(1))


@pytest.mark.parametrize("name", ["su2", "so4", "su3", "su4", "su2+su3"])
def test_builtins_satisfy_axioms_and_prop(name):
    L = builtin(name).validate()
    K = killing_form(L)
    assert K.is_symmetric()
    # compact and semisimple forces zero center
    if is_compact_type(L) and is_semisimple(L):
        assert center(L).is_zero()


def test_unknown_builtin():
    with pytest.raises(UnsupportedAlgebra):
        builtin("e8")


def test_json_round_trip():
    for name in ["su2", "so4", "su3"]:
        L = builtin(name)
        assert from_json(json.dumps(to_json(L))).c == L.c


def test_json_rejects_lower_triangle_and_garbage():
    with pytest.raises(ParseError):
        from_json({"dim": 2, "brackets": [{"i": 2, "j": 1, "coeffs": [{"k": 1, "v": "1"}]}]})
    with pytest.raises(ParseError):
        from_json("{not json")
    with pytest.raises(ParseError):
        from_json({"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": [{"k": 7, "v": "1"}]}]})


def test_json_unlisted_pairs_are_zero():
    L = from_json({"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": [{"k": 3, "v": "1"}]}]})
    assert L.bracket(L.basis_vector(0), L.basis_vector(2)) == [0, 0, 0]


vectors3 = st.lists(small_fractions, min_size=3, max_size=3)


@given(vectors3, vectors3, vectors3)
def test_killing_ad_invariant(x, y, z):
    for L in (su2(), sl2r()):
        K = killing_form(L)
        assert K(L.bracket(x, y), z) + K(y, L.bracket(x, z)) == 0


@given(st.lists(vectors3, min_size=1, max_size=3))
@settings(max_examples=40)
def test_lie_generate_monotone_and_idempotent(vs):
    L = su2()
    g = lie_generate(L, vs)
    assert all(g.contains(v) for v in vs)
    assert lie_generate(L, g.basis).basis == g.basis


def test_generate_derived_is_derived():
    for name in ["su2", "so4", "su3"]:
        L = builtin(name)
        d = derived_algebra(L)
        assert lie_generate(L, d).basis == d.basis


def test_subspace_canonical():
    L = su2()
    a = Subspace.span(L, [[1, 1, 0], [0, 1, 0]])
    b = Subspace.span(L, [[1, 0, 0], [0, 2, 0]])
    assert a.basis == b.basis and a.dim == 2
    assert exact.rank([list(v) for v in a.basis]) == 2
