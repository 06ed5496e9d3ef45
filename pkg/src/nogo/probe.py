"""Quantization-ansatz feasibility on a truncation of the sphere algebra.

The domain is ``P^k`` on S^2 (k = 2 or 3) in a harmonic basis: the
constant, the coordinates, and Laplacian eigenpolynomials of degrees 2..k.
``Q(1) = I`` and ``Q(x_i)`` are the spin-j images; the images of the
degree >= 2 harmonics are unknown N x N matrices. Every basis pair whose
bracket stays inside ``P^k`` contributes ``Q({f,g}) = [Q(f), Q(g)]``.
Pairs with a fixed member are linear in the unknowns; pairs of two free
elements are bilinear and are evaluated on the solution set of the linear
part.

Feasible solutions may need an algebraic extension of Q(i): they are
returned over ``Q(i)[u]/(m(u))`` with ``m`` recorded in the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import sympy

from . import exact
from .certificate import Certificate, Kind
from .errors import UnsupportedTruncation
from .exact import QI, SparseSystem
from .liealg import su2, to_json
from .poisson import (
    Polynomial,
    PolySpace,
    bracket_mod,
    laplacian,
    poly_space,
    sphere_ideal,
    to_text,
    variables,
)
from .spin import parse_spin, spin_images

FIXED_LABELS = ("1", "x1", "x2", "x3")
SPIN_SCALE = 2
MAX_COFACTOR_DEGREE = 3


def harmonic_basis(S: PolySpace, l: int) -> list[Polynomial]:
    """Eigenpolynomials of the Laplacian for ``l(l+1)`` inside ``S``."""
    lam = l * (l + 1)
    m = [[x - (lam if i == j else 0) for j, x in enumerate(row)]
         for i, row in enumerate(laplacian(S.algebra, S).rows())]
    return [S.poly(v) for v in exact.nullspace(m, S.dim)]


@dataclass
class ProbeSystem:
    j: Fraction
    N: int
    k: int
    radius: Fraction
    S: PolySpace
    domain: list[Polynomial]
    degrees: list[int]
    fixed_images: list[exact.Matrix]
    linear: list[tuple[dict, QI]]
    bilinear: list[tuple[int, int, list]]
    pairs_total: int

    @property
    def n_fixed(self) -> int:
        return len(FIXED_LABELS)

    @property
    def n_free(self) -> int:
        return len(self.domain) - self.n_fixed

    def var(self, g: int, r: int, c: int) -> int:
        return (g * self.N + r) * self.N + c


def build_system(j, k_domain: int, radius=1, order=None) -> ProbeSystem:
    """Assemble constraints. ``order`` permutes the free harmonic basis."""
    if k_domain not in (2, 3):
        raise UnsupportedTruncation(f"k_domain must be 2 or 3, got {k_domain}")
    j = parse_spin(j)
    L = su2()
    ideal = sphere_ideal(L, radius)
    S = poly_space(L, k_domain, ideal)
    qs = spin_images(j)
    N = len(qs[0])
    one = [[QI(int(r == c)) for c in range(N)] for r in range(N)]
    fixed = [Polynomial.const(3, 1)] + variables(3)
    fixed_images = [one] + qs
    free, degrees = [], [0, 1, 1, 1]
    for l in range(2, k_domain + 1):
        hs = harmonic_basis(S, l)
        free += hs
        degrees += [l] * len(hs)
    if order is not None:
        perm = list(order)
        free = [free[i] for i in perm]
        degrees = degrees[:4] + [degrees[4 + i] for i in perm]
    domain = fixed + free
    basis_cols = exact.transpose([S.coords(p) for p in domain])
    nf = len(fixed)

    def expand(p):
        return exact.solve(basis_cols, S.coords(p))

    linear, bilinear = [], []
    total = 0
    for a in range(len(domain)):
        for b in range(a + 1, len(domain)):
            br = bracket_mod(domain[a], domain[b], L, ideal)
            if not S.contains(br):
                continue
            total += 1
            co = expand(br)
            if b < nf:
                continue
            if a >= nf:
                bilinear.append((a, b, co))
                continue
            F = fixed_images[a]
            g = b - nf
            for r, c in product(range(N), repeat=2):
                row: dict = {}
                for s in range(N):
                    if F[r][s]:
                        v = (g * N + s) * N + c
                        row[v] = row.get(v, QI(0)) + F[r][s]
                    if F[s][c]:
                        v = (g * N + r) * N + s
                        row[v] = row.get(v, QI(0)) - F[s][c]
                rhs = QI(0)
                for bb, cb in enumerate(co):
                    if not cb:
                        continue
                    if bb < nf:
                        rhs = rhs + cb * fixed_images[bb][r][c]
                    else:
                        v = ((bb - nf) * N + r) * N + c
                        row[v] = row.get(v, QI(0)) - cb
                linear.append((row, rhs))
    return ProbeSystem(j, N, k_domain, exact.q(radius), S, domain, degrees,
                       fixed_images, linear, bilinear, total)


# ---------------------------------------------------------------------------
# polynomials in the free parameters, coefficients in Q(i)


def _padd(p: dict, q: dict, scale=1) -> dict:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, QI(0)) + c * scale
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, QI(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e)
    return out


def _param_matrices(sysm: ProbeSystem, x0, null) -> list[list[list[dict]]]:
    """Free images as matrices of polynomials in t."""
    d = len(null)
    zero_e = (0,) * d
    N = sysm.N
    out = []
    for g in range(sysm.n_free):
        m = []
        for r in range(N):
            row = []
            for c in range(N):
                v = sysm.var(g, r, c)
                p = {zero_e: QI.lift(x0[v])} if x0[v] else {}
                for i, nb in enumerate(null):
                    if nb[v]:
                        e = tuple(int(k == i) for k in range(d))
                        p[e] = QI.lift(nb[v])
                row.append(p)
            m.append(row)
        out.append(m)
    return out


def _residual(sysm: ProbeSystem, images: list, a: int, b: int, co: list, d: int) -> list[list[dict]]:
    """``[Q(a), Q(b)] - Q({a, b})`` for a free pair, entries polynomial in t."""
    N, nf = sysm.N, sysm.n_fixed
    A, B = images[a - nf], images[b - nf]
    out = []
    for r in range(N):
        row = []
        for c in range(N):
            acc: dict = {}
            for s in range(N):
                acc = _padd(acc, _pmul(A[r][s], B[s][c]))
                acc = _padd(acc, _pmul(B[r][s], A[s][c]), -1)
            for bb, cb in enumerate(co):
                if not cb:
                    continue
                if bb < nf:
                    val = sysm.fixed_images[bb][r][c]
                    if val:
                        acc = _padd(acc, {(0,) * d: val}, -cb)
                else:
                    acc = _padd(acc, images[bb - nf][r][c], -cb)
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# sympy bridge for the nonlinear stage


def _to_sym(z: QI):
    return sympy.Rational(z.re.numerator, z.re.denominator) + \
        sympy.I * sympy.Rational(z.im.numerator, z.im.denominator)


def _from_sym(expr) -> QI:
    re, im = sympy.nsimplify(expr).as_real_imag()
    re, im = sympy.Rational(re), sympy.Rational(im)
    return QI(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def _poly_expr(p: dict, ts):
    return sum((_to_sym(c) * sympy.Mul(*[t ** k for t, k in zip(ts, e)]) for e, c in p.items()),
               sympy.Integer(0))


def _cofactors(residuals: list[dict], d: int) -> list[dict] | None:
    """Find ``c_i`` with ``sum c_i r_i = 1`` by increasing cofactor degree."""
    for D in range(MAX_COFACTOR_DEGREE + 1):
        monos = [e for e in product(range(D + 1), repeat=d) if sum(e) <= D]
        cols = {}
        for i in range(len(residuals)):
            for e in monos:
                cols[(i, e)] = len(cols)
        # equations indexed by monomials of the product
        eqs: dict = {}
        for (i, e), col in cols.items():
            for re_, rc in residuals[i].items():
                m = tuple(a + b for a, b in zip(e, re_))
                eqs.setdefault(m, {})[col] = rc
        one = (0,) * d
        eqs.setdefault(one, {})
        sys_ = SparseSystem(len(cols), zero=QI(0))
        keys = sorted(eqs)
        for m in keys:
            sys_.add(eqs[m], QI(1) if m == one else QI(0))
        if sys_.conflict is None:
            sol = sys_.particular()
            out = []
            for i in range(len(residuals)):
                out.append({e: QI.lift(sol[cols[(i, e)]]) for e in monos if sol[cols[(i, e)]]})
            return out
    return None


def _feasible_point(residuals: list[dict], d: int):
    """Solve the residual system exactly.

    Returns ``("infeasible", None)``, ``("point", (modulus, values))`` where
    values are coefficient lists in u modulo ``modulus`` (None for Q(i)),
    or ``("unknown", reason)``.
    """
    ts = sympy.symbols(f"t0:{d}")
    exprs = [_poly_expr(p, ts) for p in residuals]
    G = sympy.groebner(exprs, *ts, order="lex", domain=sympy.QQ_I)
    if G.exprs == [1]:
        return "infeasible", None
    u = sympy.Symbol("u")
    for lam in ([k + 1 for k in range(d)], [1] * d, [2 * k + 1 for k in range(d)]):
        G = sympy.groebner(exprs + [u - sum(l * t for l, t in zip(lam, ts))], *ts, u,
                           order="lex", domain=sympy.QQ_I)
        polys = list(G.exprs)
        mins = [p for p in polys if p.free_symbols <= {u}]
        if len(mins) != 1 or len(polys) != d + 1:
            continue
        phi = {}
        for p in polys:
            if p is mins[0]:
                continue
            lead = [t for t in ts if t in p.free_symbols]
            if len(lead) != 1:
                break
            t = lead[0]
            pp = sympy.Poly(p, t)
            if pp.degree() != 1 or pp.LC().free_symbols:
                break
            phi[t] = sympy.expand(-pp.nth(0) / pp.LC())
        if len(phi) != d:
            continue
        _, factors = sympy.factor_list(mins[0], u, domain=sympy.QQ_I)
        factors = sorted((sympy.Poly(f, u) for f, _ in factors), key=lambda f: f.degree())
        m1 = factors[0].monic()
        coeffs = [_from_sym(c) for c in reversed(m1.all_coeffs())]
        values = []
        for t in ts:
            r = sympy.Poly(phi[t], u, domain=sympy.QQ_I).rem(sympy.Poly(m1, u, domain=sympy.QQ_I))
            values.append([_from_sym(c) for c in reversed(r.all_coeffs())] or [QI(0)])
        if m1.degree() == 1:
            root = -coeffs[0]
            values = [[_ext_eval(v, root)] for v in values]
            return "point", (None, values)
        return "point", (coeffs, values)
    return "unknown", "residual ideal is not in shape position for the tried primitive elements"


def _ext_eval(coeffs: list[QI], x: QI) -> QI:
    acc = QI(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Q(i)[u]/(m) arithmetic for explicit solutions


def ext_mul(a: list, b: list, modulus) -> list:
    out = [QI(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                if y:
                    out[i + k] = out[i + k] + x * y
    return ext_reduce(out, modulus)


def ext_reduce(a: list, modulus) -> list:
    a = [QI.lift(x) for x in a]
    if modulus is None:
        return a[:1] if a else [QI(0)]
    deg = len(modulus) - 1
    while len(a) > deg:
        top = a.pop()
        if top:
            for i in range(deg):
                a[len(a) - deg + i] = a[len(a) - deg + i] - top * modulus[i]
    return a or [QI(0)]


def _substitute(images, values, modulus, d):
    """Evaluate polynomial images at ``t_i = values[i]`` (elements of the extension)."""
    deg = 1 if modulus is None else len(modulus) - 1
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            if k == 0:
                powers[key] = [QI(1)]
            else:
                powers[key] = ext_mul(power(i, k - 1), values[i], modulus)
        return powers[key]

    out = []
    for m in images:
        mm = []
        for row in m:
            rr = []
            for p in row:
                acc = [QI(0)] * deg
                for e, c in p.items():
                    term = [c]
                    for i, k in enumerate(e):
                        if k:
                            term = ext_mul(term, power(i, k), modulus)
                    acc = [x + y for x, y in zip(acc + [QI(0)] * (len(term) - len(acc)), term + [QI(0)] * (len(acc) - len(term)))]
                rr.append(ext_reduce(acc, modulus))
            mm.append(rr)
        out.append(mm)
    return out


# ---------------------------------------------------------------------------
# the probe


def _qmat(m, scale=1) -> list[list[str]]:
    return [[str(QI.lift(x) * scale) for x in row] for row in m]


def _poly_payload(p: dict) -> list:
    return [[list(e), str(c)] for e, c in sorted(p.items())]


def feasibility_probe(j, k_domain: int, radius=1, order=None) -> Certificate:
    sysm = build_system(j, k_domain, radius, order)
    nf = sysm.n_fixed
    nvars = sysm.n_free * sysm.N * sysm.N
    solver = SparseSystem(nvars, zero=QI(0))
    for row, rhs in sysm.linear:
        solver.add(row, rhs)
    payload = {
        "j": str(sysm.j),
        "N": sysm.N,
        "k_domain": sysm.k,
        "radius": str(sysm.radius),
        "algebra": to_json(sysm.S.algebra),
        "convention": "Q(x_k) = -i J_k in the rescaled weight basis; Q({f,g}) = [Q(f),Q(g)]",
        "fixed_images": {"scale": str(SPIN_SCALE),
                         "matrices": [_qmat(m, SPIN_SCALE) for m in sysm.fixed_images[1:]],
                         "identity": "Q(1) = I"},
        "free_basis": [{"poly": to_text(p), "degree": l}
                       for p, l in zip(sysm.domain[nf:], sysm.degrees[nf:])],
        "counts": {"in_domain_pairs": sysm.pairs_total, "linear_equations": len(sysm.linear),
                   "bilinear_pairs": len(sysm.bilinear), "unknowns": nvars},
    }
    if solver.conflict is not None:
        payload["verdict"] = "LinearInfeasible"
        payload["dual"] = {str(k): str(v) for k, v in sorted(solver.conflict.items())}
        return Certificate(Kind.FEASIBILITY_VERDICT, payload)

    x0 = solver.particular()
    null = solver.null_basis()
    d = len(null)
    payload["linear_solution_dim"] = d
    images = _param_matrices(sysm, x0, null)
    residuals = [(a, b, _residual(sysm, images, a, b, co, d)) for a, b, co in sysm.bilinear]

    def pair_name(a, b):
        return [to_text(sysm.domain[a]), to_text(sysm.domain[b])]

    if not sysm.bilinear or d == 0:
        values = [[QI(1)] for _ in range(d)]
        explicit = _substitute(images, values, None, d)
        if d == 0:
            for a, b, res in residuals:
                if any(p for row in res for p in row):
                    payload["verdict"] = "ResidualObstruction"
                    payload["unique_linear_solution"] = [str(QI.lift(x)) for x in x0]
                    payload["constraint"] = {"pair": pair_name(a, b), "indices": [a, b]}
                    payload["residual"] = [[str(p.get((), QI(0))) for p in row] for row in res]
                    return Certificate(Kind.FEASIBILITY_VERDICT, payload)
        payload["verdict"] = "Feasible"
        payload["field"] = {"modulus": None}
        payload["free_images"] = [[[[str(x) for x in e] for e in row] for row in m] for m in explicit]
        return Certificate(Kind.FEASIBILITY_VERDICT, payload)

    flat = [p for _, _, res in residuals for row in res for p in row if p]
    status, data = _feasible_point(flat, d)
    payload["parametrization"] = {
        "x0": [str(QI.lift(x)) for x in x0],
        "null_basis": [{str(v): str(QI.lift(x)) for v, x in enumerate(nb) if x} for nb in null],
    }
    if status == "infeasible":
        cof = _cofactors(flat, d)
        if cof is not None:
            payload["verdict"] = "ResidualObstruction"
            payload["residual_polys"] = [_poly_payload(p) for p in flat]
            payload["cofactors"] = [_poly_payload(c) for c in cof]
            return Certificate(Kind.FEASIBILITY_VERDICT, payload)
        payload["verdict"] = "Inconclusive"
        payload["reason"] = f"residual ideal is trivial but no cofactors of degree <= {MAX_COFACTOR_DEGREE}"
        return Certificate(Kind.FEASIBILITY_VERDICT, payload)
    if status == "point":
        modulus, values = data
        explicit = _substitute(images, values, modulus, d)
        payload["verdict"] = "Feasible"
        payload["field"] = {"modulus": None if modulus is None else [str(c) for c in modulus]}
        payload["parameter_values"] = [[str(x) for x in v] for v in values]
        payload["free_images"] = [[[[str(x) for x in e] for e in row] for row in m] for m in explicit]
        return Certificate(Kind.FEASIBILITY_VERDICT, payload)
    payload["verdict"] = "Inconclusive"
    payload["reason"] = data
    return Certificate(Kind.FEASIBILITY_VERDICT, payload)
