import random
from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings

from nogo.errors import DegreeEscape, InputError, MeanUndefined, NonReducibleRelation, ParseError, VariableMismatch
from nogo.liealg import abelian, so4, su2
from nogo.poisson import (
    LinOp,
    OrbitIdeal,
    Polynomial,
    bracket_mod,
    check_ad_invariance,
    from_text,
    gram,
    is_poisson_ideal,
    laplacian,
    laplacian_analysis,
    laplacian_poly,
    lie_poisson_bracket,
    mean,
    poly_space,
    random_polynomial,
    rational_roots,
    reduce,
    sphere_ideal,
    to_text,
    variables,
    zero_mean_basis,
)

from .conftest import X, from_sympy, polynomials, to_sympy

x1, x2, x3 = variables(3)


def sympy_bracket(f, g, L):
    # oracle: sum c^k_ij x_k df/dx_i dg/dx_j with sympy derivatives
    F, G = to_sympy(f), to_sympy(g)
    n = L.dim
    out = sum(sympy.Rational(L.c[i][j][k].numerator, L.c[i][j][k].denominator) * X[k]
              * sympy.diff(F, X[i]) * sympy.diff(G, X[j])
              for i in range(n) for j in range(n) for k in range(n) if L.c[i][j][k])
    return from_sympy(out)


def sphere_integral_mean(e, r=1):
    # normalized integral of x^a y^b z^c over the sphere of radius r
    if any(a % 2 for a in e):
        return Fraction(0)

    def df(m):
        return prod(range(m, 0, -2)) if m > 0 else 1

    a, b, c = e
    return Fraction(df(a - 1) * df(b - 1) * df(c - 1), df(a + b + c + 1)) * Fraction(r) ** sum(e)


# --- text format ---------------------------------------------------------

@pytest.mark.parametrize("text", ["1/2 x1^2 x3 - 3 x2 + 1", "x1", "-x1 x2 x3", "0", "7/3"])
def test_text_round_trip(text):
    assert to_text(from_text(text, 3)) == text


def test_text_errors():
    with pytest.raises(ParseError):
        from_text("x1 x2 +", 3)
    with pytest.raises(VariableMismatch):
        from_text("x4", 3)


# --- bracket -------------------------------------------------------------

def test_bracket_generators(L):
    assert lie_poisson_bracket(x1, x2, L) == x3
    assert lie_poisson_bracket(x2, x3, L) == x1
    assert lie_poisson_bracket(x3, x1, L) == x2


def test_bracket_x3_x1x2(L):
    # {x3, x1 x2} = {x3,x1} x2 + x1 {x3,x2} = x2^2 - x1^2
    assert lie_poisson_bracket(x3, x1 * x2, L) == x2 * x2 - x1 * x1


def test_bracket_with_constant(L):
    assert not lie_poisson_bracket(x1 * x2 + x3, Polynomial.const(3, 5), L)


def test_bracket_variable_mismatch(L):
    with pytest.raises(VariableMismatch):
        lie_poisson_bracket(Polynomial.var(2, 0), x1, L)


@given(polynomials(), polynomials())
@settings(max_examples=60, deadline=None)
def test_bracket_matches_sympy_oracle(f, g):
    L = su2()
    assert lie_poisson_bracket(f, g, L) == sympy_bracket(f, g, L)


@given(polynomials(max_degree=2), polynomials(max_degree=2), polynomials(max_degree=2))
@settings(max_examples=60, deadline=None)
def test_bracket_laws(f, g, h):
    L = su2()
    b = lambda u, v: lie_poisson_bracket(u, v, L)  # noqa: E731
    assert b(f, g) == -b(g, f)
    assert not (b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g)))
    assert b(f, g * h) == b(f, g) * h + g * b(f, h)
    assert not (b(f, g * h) + b(g, h * f) + b(h, f * g))
    if f and g:
        assert b(f, g).degree() <= f.degree() + g.degree() - 1


# --- reduction -----------------------------------------------------------

def test_reduce_examples(L, ideal):
    assert reduce(x1 * x1 + x2 * x2 + x3 * x3, ideal) == Polynomial.const(3, 1)
    assert reduce(x1 ** 3, ideal) == x1 - x1 * x2 * x2 - x1 * x3 * x3
    assert reduce(x2 * x3, ideal) == x2 * x3


def test_reduce_radius():
    I = sphere_ideal(su2(), Fraction(3, 2))
    assert reduce(x1 * x1 + x2 * x2 + x3 * x3, I) == Polynomial.const(3, Fraction(9, 4))


@given(polynomials(max_degree=5))
@settings(max_examples=60, deadline=None)
def test_reduce_matches_sympy_normal_form(f):
    I = sphere_ideal(su2(), 2)
    _, rem = sympy.reduced(to_sympy(f), [X[0] ** 2 + X[1] ** 2 + X[2] ** 2 - 4], *X, order="grlex")
    assert reduce(f, I) == from_sympy(rem)
    assert reduce(reduce(f, I), I) == reduce(f, I)


@given(polynomials(max_degree=3), polynomials(max_degree=3))
@settings(max_examples=40, deadline=None)
def test_reduce_respects_bracket(f, g):
    L = su2()
    I = sphere_ideal(L)
    assert bracket_mod(f, g, L, I) == bracket_mod(reduce(f, I), reduce(g, I), L, I)


def test_casimir_commutes(L, ideal):
    cas = x1 * x1 + x2 * x2 + x3 * x3
    for x in variables(3):
        assert not lie_poisson_bracket(cas, x, L)
    assert is_poisson_ideal(L, ideal)


def test_relation_needs_grlex_lead():
    p = x1 + x2 * x2
    with pytest.raises(NonReducibleRelation):
        OrbitIdeal.from_relations([(p, (1, 0, 0))])


def test_sphere_ideal_needs_su2_blocks():
    with pytest.raises(InputError):
        sphere_ideal(abelian(3))
    assert len(sphere_ideal(so4()).relations) == 2


# --- spaces and the Laplacian -------------------------------------------

@pytest.mark.parametrize("k", range(0, 6))
def test_sphere_space_dimension(L, ideal, k):
    S = poly_space(L, k, ideal)
    assert S.dim == (k + 1) ** 2
    # cross-check: rank of all monomials of degree <= k modulo the ideal
    free = poly_space(L, k)
    coords = [S.coords(p) for p in free.elements()]
    assert sympy.Matrix(coords).rank() == (k + 1) ** 2


def test_free_space_dimension(L):
    assert poly_space(L, 1).dim == 4


def test_laplacian_examples(L, ideal):
    assert laplacian_poly(x3, L, ideal) == 2 * x3
    h = x1 * x1 - x2 * x2
    assert reduce(laplacian_poly(h, L, ideal), ideal) == reduce(6 * h, ideal)
    assert not laplacian_poly(Polynomial.const(3, 1), L, ideal)


def test_degree_escape(L):
    S = poly_space(L, 2)
    with pytest.raises(DegreeEscape):
        S.coords(x1 ** 3)


def sympy_eigen(op):
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in op.rows()])
    lam = sympy.Symbol("lam")
    _, factors = sympy.factor_list(m.charpoly(lam).as_expr())
    out = {}
    for fct, mult in factors:
        root = sympy.solve(fct, lam)[0]
        out[Fraction(int(root.p), int(root.q))] = mult
    return out


@pytest.mark.parametrize("k", [1, 2, 3])
def test_laplacian_spectrum_oracle(L, ideal, k):
    an = laplacian_analysis(laplacian(L, poly_space(L, k, ideal)))
    assert dict(an.eigenvalues()) == sympy_eigen(laplacian(L, poly_space(L, k, ideal)))
    assert dict(an.eigenvalues()) == {Fraction(l * (l + 1)): 2 * l + 1 for l in range(k + 1)}
    assert an.rank == (k + 1) ** 2 - 1
    assert [p.is_constant() for p in an.kernel_basis] == [True]


def test_laplacian_without_ideal_sees_casimir(L):
    S = poly_space(L, 2)
    an = laplacian_analysis(laplacian(L, S))
    cas = x1 * x1 + x2 * x2 + x3 * x3
    ker = [S.coords(p) for p in an.kernel_basis]
    assert len(ker) == 2
    both = sympy.Matrix(ker + [S.coords(cas), S.coords(Polynomial.const(3, 1))])
    assert both.rank() == 2


def test_laplacian_k0(L, ideal):
    assert laplacian_analysis(laplacian(L, poly_space(L, 0, ideal))).rank == 0


def test_rational_roots():
    assert rational_roots([Fraction(-2), Fraction(1), Fraction(1)]) == [(Fraction(-2), 1), (Fraction(1), 1)]
    assert rational_roots([Fraction(0), Fraction(0), Fraction(0), Fraction(1)]) == [(Fraction(0), 3)]


def test_laplacian_self_adjoint_wrt_gram(L, ideal):
    S = poly_space(L, 3, ideal)
    D = sympy.Matrix(laplacian(L, S).rows())
    G = sympy.Matrix([list(r) for r in gram(S).matrix])
    assert G * D == D.T * G


def test_laplacian_columns_have_zero_mean(L, ideal):
    S = poly_space(L, 3, ideal)
    for a in range(S.dim):
        assert mean(laplacian(L, S).apply(S.element(a)), S) == 0


# --- mean ----------------------------------------------------------------

def monomials_upto(k):
    return [(a, b, c) for a in range(k + 1) for b in range(k + 1) for c in range(k + 1) if a + b + c <= k]


@pytest.mark.parametrize("r", [1, Fraction(1, 2), 3])
def test_mean_matches_sphere_integral(L, r):
    I = sphere_ideal(L, r)
    S = poly_space(L, 6, I)
    for e in monomials_upto(6):
        assert mean(Polynomial.monomial(e), S) == sphere_integral_mean(e, r), e


def test_mean_examples(L, ideal, S2):
    assert mean(x1 * x1, S2) == Fraction(1, 3)
    assert mean(x3, S2) == 0
    assert mean(Polynomial.const(3, 7), S2) == 7


def test_mean_undefined_without_ideal(L):
    with pytest.raises(MeanUndefined, match="nonconstant invariants"):
        mean(x1 * x1, poly_space(L, 2))


def test_mean_of_brackets_vanishes(L, ideal):
    S = poly_space(L, 3, ideal)
    rng = random.Random(5)
    for _ in range(50):
        f, g = random_polynomial(S, rng), random_polynomial(S, rng)
        assert mean(bracket_mod(f, g, L, ideal), S) == 0


def test_zero_mean_basis(L, ideal, S2):
    zb = zero_mean_basis(S2)
    assert len(zb) == S2.dim - 1
    assert all(mean(p, S2) == 0 for p in zb)


# --- Gram and ad-invariance ---------------------------------------------

def test_gram_k1(L, ideal):
    G = gram(poly_space(L, 1, ideal)).matrix
    third = Fraction(1, 3)
    assert [list(r) for r in G] == [[1, 0, 0, 0], [0, third, 0, 0], [0, 0, third, 0], [0, 0, 0, third]]
    assert [list(r) for r in gram(poly_space(L, 0, ideal)).matrix] == [[1]]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gram_positive(L, ideal, k):
    assert gram(poly_space(L, k, ideal)).is_positive_definite()


def test_ad_invariance_and_negative_control(L, ideal, S2):
    res = check_ad_invariance(S2, samples=20, seed=1)
    assert res.ok and res.triples_checked == 9 ** 3

    def corrupted(u, v):
        # mean pairing plus a bump on the x1 coefficient: symmetric, not invariant
        e = (1, 0, 0)
        return mean(u * v, S2) + reduce(u, ideal).terms.get(e, 0) * reduce(v, ideal).terms.get(e, 0)

    res = check_ad_invariance(S2, form=corrupted)
    assert not res.ok and res.max_residual > 0


def test_linop_shapes(L, ideal, S2):
    op = laplacian(L, S2)
    assert isinstance(op, LinOp)
    assert len(op.rows()) == S2.dim and all(len(r) == S2.dim for r in op.rows())
