"""The no-go certificate chain and the trivial prequantization.

For a compact semisimple algebra with the orbit quotient, the chain runs

    structure checks -> Lap(P^k) = P_0^k -> ad-invariance -> Gram positivity

and concludes that no nontrivial finite-dimensional Lie representation
exists. The first three links are exact computations at truncation ``k``.
The passage from there to the whole polynomial algebra is a cited
argument and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import checker, exact
from .certificate import Certificate, Kind
from .errors import (
    AntisymmetryViolation,
    CertificateFailure,
    JacobiViolation,
    MeanUndefined,
    NotZeroMean,
)
from .liealg import (
    LieAlgebra,
    center,
    is_compact_type,
    is_semisimple,
    killing_form,
    to_json,
)
from .poisson import (
    LinOp,
    OrbitIdeal,
    Polynomial,
    PolySpace,
    bracket_mod,
    check_ad_invariance,
    gram,
    laplacian,
    mean_functional,
    monomial_text,
    poly_space,
    reduce,
    to_text,
    variables,
)

# each step name pairs with the statement it checks
STEPS = {
    "lie-algebra-axioms": "antisymmetry and Jacobi identity of the structure constants",
    "semisimple": "Prop 2: semisimplicity (Cartan criterion, det Killing != 0)",
    "compact-type": "Prop 2: compactness (Killing form negative definite)",
    "zero-center": "Prop 2: zero center",
    "derived-ideal": "Thm 1 step (a): Lap(P^k) = P_0^k, so {P,P} contains P_0",
    "ad-invariance": "Prop 2: <{f,g},h> + <g,{f,h}> = 0",
    "gram-positivity": "Thm 1 step (b): f^2 has zero mean only if f = 0",
}

CITED = [
    "Prop 3.1: a finite-dimensional Lie representation either kills the derived ideal or is faithful on it",
    "passage from every truncation P^k to the full polynomial algebra",
    "Cor 2: no nontrivial finite-dimensional prequantization follows from Thm 1",
]


def ideal_json(ideal: OrbitIdeal | None):
    if ideal is None:
        return None
    return {"label": ideal.label,
            "relations": [{"poly": to_text(p), "lead": list(lead)}
                          for p, (lead, _) in zip(ideal.relation_polys(), ideal.relations)]}


def _base(S: PolySpace) -> dict:
    return {"algebra": to_json(S.algebra), "ideal": ideal_json(S.ideal), "k": S.k}


def mean_witness(S: PolySpace, cap: int) -> dict:
    """Mean values on every normal monomial of degree <= ``cap``."""
    mf = mean_functional(S.algebra, S.ideal)
    T = poly_space(S.algebra, cap, S.ideal, limit=10 ** 6)
    vals = mf.vector(T)
    return {"cap": cap, "values": {monomial_text(e) or "1": str(v) for e, v in zip(T.basis, vals)}}


def self_check(cert: Certificate) -> Certificate:
    checker.verify(cert)
    return cert


# ---------------------------------------------------------------------------
# derived ideal


def derived_ideal_certificate(S: PolySpace, op: LinOp | None = None) -> Certificate:
    """``Lap`` maps ``P^k`` onto the zero-mean part: rank dim-1, kernel = constants,
    constants outside the image. ``op`` substitutes a given matrix (negative controls)."""
    op = op or laplacian(S.algebra, S)
    m = op.rows()
    dim = S.dim
    one = S.index[(0,) * S.n]
    r = exact.rank(m) if dim else 0
    ker = exact.nullspace(m, dim)
    if len(ker) != 1 or any(x for i, x in enumerate(ker[0]) if i != one):
        extra = [to_text(S.poly(v)) for v in ker if any(x for i, x in enumerate(v) if i != one)]
        raise CertificateFailure("derived-ideal",
                                 f"kernel contains nonconstant invariants: {', '.join(extra) or 'none'}"
                                 if extra else f"kernel has dimension {len(ker)}")
    if exact.solve(m, [Fraction(int(i == one)) for i in range(dim)]) is not None:
        raise CertificateFailure("derived-ideal", "constants lie in the image of the Laplacian")
    left = exact.nullspace(exact.transpose(m), dim)
    mvec = [x / left[0][one] for x in left[0]]
    pre = []
    for a in range(dim):
        if a == one:
            continue
        target = [Fraction(0)] * dim
        target[a] = Fraction(1)
        target[one] -= mvec[a]
        g = exact.solve(m, target)
        pre.append({"target": a, "g": [str(x) for x in g]})
    cert = Certificate(Kind.DERIVED_IDEAL, {
        **_base(S),
        "basis": [monomial_text(e) or "1" for e in S.basis],
        "laplacian": [[str(x) for x in row] for row in m],
        "rank": r,
        "kernel": [[str(x) for x in v] for v in ker],
        "mean_vector": [str(x) for x in mvec],
        "preimages": pre,
    })
    return self_check(cert)


def bracket_decomposition(f: Polynomial, S: PolySpace) -> Certificate:
    """``f = Lap(g) = sum_i {-x_i, {x_i, g}}`` for zero-mean ``f``."""
    L, ideal = S.algebra, S.ideal
    f = reduce(f, ideal)
    mf = mean_functional(L, ideal)
    if mf(f):
        raise NotZeroMean(f"mean of {to_text(f)} is {mf(f)}, not 0")
    pairs = []
    g = Polynomial(S.n)
    if f:
        T = S if S.contains(f) else S.with_cap(max(f.degree(), 0))
        sol = exact.solve(laplacian(L, T).rows(), T.coords(f))
        if sol is None:
            raise CertificateFailure("bracket-decomposition", f"{to_text(f)} is not in the image of Lap")
        g = T.poly(sol)
        for x in variables(S.n):
            v = bracket_mod(x, g, L, ideal)
            if v:
                pairs.append([to_text(-x), to_text(v)])
    cert = Certificate(Kind.BRACKET_DECOMPOSITION, {
        **_base(S), "f": to_text(f), "g": to_text(g), "pairs": pairs})
    return self_check(cert)


# ---------------------------------------------------------------------------
# Gram form and ad-invariance


def gram_positivity_certificate(S: PolySpace, zero_mean_only: bool = False) -> Certificate:
    """Leading principal minors of ``G_ab = mean(e_a e_b)``, all required positive."""
    mf = mean_functional(S.algebra, S.ideal)
    if zero_mean_only:
        vecs = [e - mf(e) for e in S.elements() if not e.is_constant()]
        G = [[mf(a * b) for b in vecs] for a in vecs]
    else:
        vecs = S.elements()
        G = [list(r) for r in gram(S).matrix]
    minors = exact.leading_minors(G) if G else []
    bad = next((i for i, x in enumerate(minors) if x <= 0), None)
    if bad is not None:
        raise CertificateFailure("gram-positivity", f"leading minor {bad + 1} is {minors[bad]}, not positive")
    cert = Certificate(Kind.GRAM_POSITIVITY, {
        **_base(S),
        "vectors": [to_text(v) for v in vecs],
        "zero_mean_only": zero_mean_only,
        "mean": mean_witness(S, 2 * S.k),
        "gram": [[str(x) for x in r] for r in G],
        "minors": [str(x) for x in minors],
    })
    return self_check(cert)


def ad_invariance_certificate(S: PolySpace, samples: int = 200, seed: int = 0) -> Certificate:
    res = check_ad_invariance(S, samples=samples, seed=seed)
    if not res.ok:
        a, b, c, r = res.failures[0] if res.failures else (None, None, None, res.max_residual)
        raise CertificateFailure("ad-invariance", f"residual {r} at basis triple {(a, b, c)}")
    cert = Certificate(Kind.AD_INVARIANCE, {
        **_base(S),
        "mean": mean_witness(S, max(3 * S.k - 1, 0)),
        "triples_checked": res.triples_checked,
        "samples": {"count": res.samples_checked, "seed": seed},
        "max_residual": str(res.max_residual),
    })
    return self_check(cert)


# ---------------------------------------------------------------------------
# report


@dataclass
class StepResult:
    name: str
    ok: bool
    detail: str

    @property
    def statement(self) -> str:
        return STEPS.get(self.name, self.name)


@dataclass
class NogoReport:
    conclusion: Certificate | None
    certificates: list[Certificate] = field(default_factory=list)
    steps: list[StepResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.conclusion is not None

    @property
    def failed_step(self) -> StepResult | None:
        return next((s for s in self.steps if not s.ok), None)


def nogo_report(L: LieAlgebra, k: int, ideal: OrbitIdeal | None = None,
                samples: int = 200, seed: int = 0) -> NogoReport:
    """Run the chain at truncation ``k``; stops at the first failed step.

    ``L`` may be unvalidated (it is re-validated as the first step).
    """
    report = NogoReport(None)

    def step(name, fn):
        try:
            detail = fn()
        except (CertificateFailure, MeanUndefined, AntisymmetryViolation, JacobiViolation) as exc:
            msg = exc.detail if isinstance(exc, CertificateFailure) else str(exc)
            report.steps.append(StepResult(name, False, msg))
            return False
        report.steps.append(StepResult(name, True, detail))
        return True

    def axioms():
        L.validate()
        return "exact"

    def semisimple():
        if not is_semisimple(L):
            raise CertificateFailure("semisimple", "Killing form is degenerate")
        return "det Killing != 0"

    def compact():
        if not is_compact_type(L):
            raise CertificateFailure("compact-type", "Killing form is not negative definite")
        return "leading minors " + ", ".join(str(x) for x in killing_form(L).leading_minors())

    def zero_center():
        z = center(L)
        if z.dim:
            raise CertificateFailure("zero-center", f"center has dimension {z.dim}")
        return "center = 0"

    S_box = {}

    def derived():
        S = poly_space(L, k, ideal)
        S_box["S"] = S
        c = derived_ideal_certificate(S)
        report.certificates.append(c)
        return f"rank {c.payload['rank']} of {S.dim}"

    def adinv():
        c = ad_invariance_certificate(S_box["S"], samples, seed)
        report.certificates.insert(0, c)
        return f"{c.payload['triples_checked']} basis triples, {samples} samples, residual 0"

    def positivity():
        c = gram_positivity_certificate(S_box["S"])
        report.certificates.append(c)
        return f"{len(c.payload['minors'])} positive minors"

    for name, fn in (("lie-algebra-axioms", axioms), ("semisimple", semisimple), ("compact-type", compact),
                     ("zero-center", zero_center), ("derived-ideal", derived),
                     ("ad-invariance", adinv), ("gram-positivity", positivity)):
        if not step(name, fn):
            return report

    kmat = killing_form(L)
    report.conclusion = self_check(Certificate(Kind.TRIVIALITY_CONCLUSION, {
        "algebra": to_json(L),
        "ideal": ideal_json(ideal),
        "k": k,
        "killing_minors": [str(x) for x in kmat.leading_minors()],
        "certificates": {c.kind.value: c.digest for c in report.certificates},
        "statement": "no nontrivial finite-dimensional Lie representation of the Poisson algebra "
                     "(and hence no nontrivial finite-dimensional prequantization)",
        "machine_checked": [f"{s.name}: {s.statement} [{s.detail}]" for s in report.steps],
        "cited": CITED,
    }))
    return report


# ---------------------------------------------------------------------------
# trivial prequantization


def trivial_prequantization(f: Polynomial, S: PolySpace) -> Fraction:
    """``Q(f) = mean(f)`` acting on a one-dimensional space."""
    return mean_functional(S.algebra, S.ideal)(f)


def verify_trivial_preq(S: PolySpace) -> Certificate:
    mf = mean_functional(S.algebra, S.ideal)
    els = S.elements()
    if mf(Polynomial.const(S.n, 1)) != 1:
        raise CertificateFailure("trivial-prequantization", "Q(1) != 1")
    for a in range(len(els)):
        for b in range(a + 1, len(els)):
            v = mf(bracket_mod(els[a], els[b], S.algebra, S.ideal))
            if v:
                raise CertificateFailure("trivial-prequantization",
                                         f"mean of {{{els[a]},{els[b]}}} is {v}")
    cert = Certificate(Kind.TRIVIAL_PREQUANTIZATION, {
        **_base(S),
        "mean": mean_witness(S, max(2 * S.k - 1, S.k)),
        "values": {monomial_text(e) or "1": str(mf(Polynomial.monomial(e))) for e in S.basis},
        "pairs_checked": len(els) * (len(els) - 1) // 2,
    })
    return self_check(cert)
