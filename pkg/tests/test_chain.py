from fractions import Fraction

import pytest

from nogo import checker
from nogo.certificate import Kind
from nogo.chain import (
    bracket_decomposition,
    derived_ideal_certificate,
    gram_positivity_certificate,
    nogo_report,
    trivial_prequantization,
    verify_trivial_preq,
)
from nogo.errors import CertificateFailure, NotZeroMean
from nogo.liealg import LieAlgebra, abelian, so4, su2
from nogo.poisson import (
    LinOp,
    Polynomial,
    from_text,
    laplacian,
    laplacian_poly,
    poly_space,
    reduce,
    sphere_ideal,
    variables,
)

x1, x2, x3 = variables(3)


def test_derived_ideal_k2(L, ideal, S2):
    c = derived_ideal_certificate(S2)
    assert c.kind is Kind.DERIVED_IDEAL
    assert c.payload["rank"] == 8 and len(c.payload["basis"]) == 9
    assert c.checked


def test_derived_ideal_k0(L, ideal):
    c = derived_ideal_certificate(poly_space(L, 0, ideal))
    assert c.payload["rank"] == 0 and c.payload["preimages"] == []


def test_corrupted_laplacian_rejected(L, ideal, S2):
    op = laplacian(L, S2)
    m = [list(r) for r in op.matrix]
    m[1][1] += 1  # still full codimension-1 rank, but not the Laplacian
    bad = LinOp(op.domain, op.codomain, tuple(tuple(r) for r in m))
    with pytest.raises(CertificateFailure) as info:
        derived_ideal_certificate(S2, bad)
    assert info.value.step == "derived-ideal"


def test_kernel_too_big_rejected(L, ideal, S2):
    op = laplacian(L, S2)
    m = [list(r) for r in op.matrix]
    for r in m:
        r[1] = Fraction(0)
    bad = LinOp(op.domain, op.codomain, tuple(tuple(r) for r in m))
    with pytest.raises(CertificateFailure, match="nonconstant"):
        derived_ideal_certificate(S2, bad)


def test_decomposition_x3(L, ideal, S2):
    c = bracket_decomposition(x3, S2)
    assert from_text(c.payload["g"], 3) == Fraction(1, 2) * x3


def test_decomposition_harmonic(L, ideal, S2):
    h = x1 * x1 - x2 * x2
    c = bracket_decomposition(h, S2)
    g = from_text(c.payload["g"], 3)
    # g is h/6 up to an additive constant
    assert reduce(g - Fraction(1, 6) * h, ideal).is_constant()
    assert reduce(laplacian_poly(g, L, ideal), ideal) == reduce(h, ideal)


def test_decomposition_zero_and_nonzero_mean(L, ideal, S2):
    assert bracket_decomposition(Polynomial(3), S2).payload["pairs"] == []
    with pytest.raises(NotZeroMean):
        bracket_decomposition(x1 * x1, S2)


def test_decomposition_degree_beyond_space(L, ideal, S2):
    c = bracket_decomposition(x1 * x2 * x3, S2)
    checker.verify(c)


def test_gram_certificates(L, ideal, S2):
    c = gram_positivity_certificate(S2)
    assert len(c.payload["minors"]) == 9
    assert all(Fraction(m) > 0 for m in c.payload["minors"])
    assert gram_positivity_certificate(poly_space(L, 0, ideal)).payload["minors"] == ["1"]
    z = gram_positivity_certificate(S2, zero_mean_only=True)
    assert len(z.payload["minors"]) == 8 and z.checked


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_report_passes(L, ideal, k):
    r = nogo_report(L, k, ideal)
    assert r.ok
    assert [c.kind.value for c in r.certificates] == ["AdInvariance", "DerivedIdeal", "GramPositivity"]
    assert r.conclusion.payload["cited"]
    assert all(s.ok for s in r.steps)


def test_report_so4_two_spheres():
    L = so4()
    r = nogo_report(L, 2, sphere_ideal(L))
    assert r.ok


def test_report_negative_controls(L):
    assert nogo_report(abelian(3), 2).failed_step.name == "semisimple"
    r = nogo_report(L, 2, None)
    assert r.failed_step.name == "derived-ideal"
    assert "nonconstant invariants" in r.failed_step.detail
    c = [[list(row) for row in plane] for plane in L.c]
    c[0][1][2] = Fraction(2)  # [e2,e1] left alone: antisymmetry breaks
    tampered = LieAlgebra.unchecked(c, L.labels, L.su2_blocks)
    assert nogo_report(tampered, 2, sphere_ideal(L)).failed_step.name == "lie-algebra-axioms"


def test_trivial_prequantization(L):
    for r in (1, Fraction(2, 3)):
        S = poly_space(L, 3, sphere_ideal(L, r))
        assert trivial_prequantization(Polynomial.const(3, 1), S) == 1
        assert trivial_prequantization(x3, S) == 0
        assert trivial_prequantization(x1 * x1, S) == Fraction(r) ** 2 / 3
        c = verify_trivial_preq(S)
        assert c.payload["pairs_checked"] == 16 * 15 // 2
