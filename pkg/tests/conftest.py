from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from nogo.liealg import su2
from nogo.poisson import Polynomial, poly_space, sphere_ideal

X = sympy.symbols("x1:4")


@pytest.fixture(scope="session")
def L():
    return su2()


@pytest.fixture(scope="session")
def ideal(L):
    return sphere_ideal(L, 1)


@pytest.fixture(scope="session")
def S2(L, ideal):
    return poly_space(L, 2, ideal)


def to_sympy(p: Polynomial, xs=X):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x ** a for x, a in zip(xs, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


def from_sympy(expr, n=3, xs=X) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *xs[:n])
    return Polynomial(n, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polynomials(draw, n=3, max_degree=3, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.lists(st.integers(0, max_degree), min_size=n, max_size=n)))
        if sum(e) <= max_degree:
            terms[e] = draw(small_fractions)
    return Polynomial(n, terms)


# acceptance criteria append (number, ok, detail); printed after the run
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
