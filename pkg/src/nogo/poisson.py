"""Lie-Poisson polynomial algebra on the dual of a Lie algebra.

Coordinates ``x1..xn`` are the basis elements of the algebra viewed as
linear functions on its dual, so ``{x_i, x_j} = sum_k c^k_ij x_k``.
Orbit ideals are handled by substitution rules ``lead -> tail``; the sphere
relation ``x_a^2 + x_b^2 + x_c^2 = r^2`` of each su(2) block is the exact
case.
"""

from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from . import exact
from .errors import (
    DegreeEscape,
    InputError,
    MeanUndefined,
    NonReducibleRelation,
    ParseError,
    VariableMismatch,
)
from .liealg import LieAlgebra

Exp = tuple[int, ...]


def max_dim() -> int:
    return int(os.environ.get("NOGO_MAX_DIM", "100"))


def grlex_key(e: Exp):
    return (sum(e), e)


class Polynomial:
    """Sparse polynomial ``{exponent tuple: Fraction}``; treat as immutable."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms=None):
        self.n = n
        t = {}
        for e, c in (terms or {}).items():
            if c:
                if len(e) != n:
                    raise VariableMismatch(f"monomial {e} has {len(e)} variables, expected {n}")
                t[tuple(e)] = exact.q(c)
        self.terms = t
        self._hash = None

    @classmethod
    def const(cls, n: int, c) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, e: Exp, c=1) -> "Polynomial":
        return cls(len(e), {tuple(e): c})

    def _check(self, other: "Polynomial"):
        if self.n != other.n:
            raise VariableMismatch(f"{self.n} vs {other.n} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(self.n, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Polynomial(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -exact.q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = exact.q(other)
            return Polynomial(self.n, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def diff(self, i: int) -> "Polynomial":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                t[tuple(d)] = c * e[i]
        return Polynomial(self.n, t)

    def sorted_terms(self) -> list[tuple[Exp, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r})"


def monomial_text(e: Exp) -> str:
    return " ".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)


def to_text(p: Polynomial) -> str:
    """``"1/2 x1^2 x3 - 3 x2 + 1"`` style, graded-lex descending."""
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = monomial_text(e)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag} {mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


_TERM = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*((?:x[0-9]+(?:\^[0-9]+)?\s*\*?\s*)*)")
_FACTOR = re.compile(r"x([0-9]+)(?:\^([0-9]+))?")


def from_text(s: str, n: int) -> Polynomial:
    """Parse the sparse text format, e.g. ``"x1^2 + 2/3 x2 x3 - 1"``."""
    src = s.strip()
    if src in ("", "0"):
        return Polynomial(n)
    t: dict = {}
    pos = 0
    src = re.sub(r"\s+", " ", src)
    while pos < len(src):
        if src[pos] == " ":
            pos += 1
            continue
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3).strip()):
            raise ParseError(f"cannot parse polynomial at {src[pos:]!r}")
        if pos > 0 and not m.group(1):
            raise ParseError(f"missing sign before {src[pos:]!r}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        e = [0] * n
        for fm in _FACTOR.finditer(m.group(3)):
            i = int(fm.group(1)) - 1
            if not 0 <= i < n:
                raise VariableMismatch(f"x{i + 1} outside x1..x{n}")
            e[i] += int(fm.group(2) or 1)
        e = tuple(e)
        t[e] = t.get(e, 0) + coef
        pos = m.end()
    return Polynomial(n, t)


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.var(n, i) for i in range(n)]


# ---------------------------------------------------------------------------
# bracket


def lie_poisson_bracket(f: Polynomial, g: Polynomial, L: LieAlgebra) -> Polynomial:
    """``{f, g} = sum_{i,j,k} c^k_ij x_k (df/dx_i)(dg/dx_j)``."""
    n = L.dim
    if f.n != n or g.n != n:
        raise VariableMismatch(f"polynomials in {f.n}/{g.n} variables, algebra has dimension {n}")
    df = [f.diff(i) for i in range(n)]
    dg = [g.diff(i) for i in range(n)]
    out: dict = {}
    for i in range(n):
        if not df[i] and not dg[i]:
            continue
        for j in range(i + 1, n):
            ck = L.c[i][j]
            if not any(ck):
                continue
            w = df[i] * dg[j] - df[j] * dg[i]
            if not w:
                continue
            for k, c in enumerate(ck):
                if not c:
                    continue
                for e, v in w.terms.items():
                    e2 = list(e)
                    e2[k] += 1
                    e2 = tuple(e2)
                    out[e2] = out.get(e2, 0) + c * v
    return Polynomial(n, out)


# ---------------------------------------------------------------------------
# orbit ideals


@dataclass(frozen=True)
class OrbitIdeal:
    """Substitution rules ``lead -> lead - relation / lc(relation)``."""

    n: int
    relations: tuple[tuple[Exp, tuple[tuple[Exp, Fraction], ...]], ...]
    label: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_relations(cls, rels: Sequence[tuple[Polynomial, Exp]], label: str = "") -> "OrbitIdeal":
        out = []
        n = None
        for p, lead in rels:
            n = p.n if n is None else n
            lead = tuple(lead)
            if lead not in p.terms:
                raise NonReducibleRelation(f"designated lead {monomial_text(lead)} not a term of {p}")
            for e in p.terms:
                if e != lead and grlex_key(e) >= grlex_key(lead):
                    raise NonReducibleRelation(
                        f"lead {monomial_text(lead)} is not graded-lex above {monomial_text(e) or '1'}")
            out.append((lead, tuple(sorted(p.terms.items()))))
        return cls(n or 0, tuple(out), label)

    def relation_polys(self) -> list[Polynomial]:
        return [Polynomial(self.n, dict(t)) for _, t in self.relations]

    @cached_property
    def rules(self) -> list[tuple[Exp, dict]]:
        rules = []
        for lead, terms in self.relations:
            t = dict(terms)
            lc = t[lead]
            tail = {e: -c / lc for e, c in t.items() if e != lead}
            rules.append((lead, tail))
        return rules

    def is_normal(self, e: Exp) -> bool:
        return not any(all(a >= b for a, b in zip(e, lead)) for lead, _ in self.rules)

    def normal_monomial(self, e: Exp) -> dict:
        cache = self._cache
        hit = cache.get(e)
        if hit is not None:
            return hit
        for lead, tail in self.rules:
            if all(a >= b for a, b in zip(e, lead)):
                rest = tuple(a - b for a, b in zip(e, lead))
                out: dict = {}
                for te, tc in tail.items():
                    sub = tuple(a + b for a, b in zip(rest, te))
                    for ne, nc in self.normal_monomial(sub).items():
                        out[ne] = out.get(ne, 0) + tc * nc
                out = {k: v for k, v in out.items() if v}
                break
        else:
            out = {e: Fraction(1)}
        cache[e] = out
        return out


def sphere_ideal(L: LieAlgebra, radius=1, blocks=None) -> OrbitIdeal:
    """``x_a^2 + x_b^2 + x_c^2 - r^2`` for each su(2) block (radius per block allowed)."""
    blocks = list(blocks if blocks is not None else L.su2_blocks)
    if not blocks:
        raise InputError("algebra has no su(2) blocks; sphere ideal unavailable")
    radii = list(radius) if isinstance(radius, (list, tuple)) else [radius] * len(blocks)
    rels = []
    n = L.dim
    for blk, r in zip(blocks, radii):
        r = exact.q(r)
        if r <= 0:
            raise InputError("sphere radius must be positive")
        t = {}
        for a in blk:
            e = [0] * n
            e[a] = 2
            t[tuple(e)] = Fraction(1)
        t[(0,) * n] = -r * r
        a0 = min(blk)
        lead = [0] * n
        lead[a0] = 2
        rels.append((Polynomial(n, t), tuple(lead)))
    return OrbitIdeal.from_relations(rels, label="sphere r=" + ",".join(str(exact.q(r)) for r in radii))


def reduce(f: Polynomial, ideal: OrbitIdeal | None) -> Polynomial:
    """Normal form modulo the ideal (identity when ``ideal`` is None)."""
    if ideal is None or not ideal.relations:
        return f
    if f.n != ideal.n:
        raise VariableMismatch(f"{f.n} variables vs ideal in {ideal.n}")
    out: dict = {}
    for e, c in f.terms.items():
        for ne, nc in ideal.normal_monomial(e).items():
            out[ne] = out.get(ne, 0) + c * nc
    return Polynomial(f.n, out)


def bracket_mod(f: Polynomial, g: Polynomial, L: LieAlgebra, ideal: OrbitIdeal | None) -> Polynomial:
    return reduce(lie_poisson_bracket(f, g, L), ideal)


def is_poisson_ideal(L: LieAlgebra, ideal: OrbitIdeal) -> bool:
    """Each relation Poisson-commutes with every coordinate modulo the ideal."""
    xs = variables(L.dim)
    return all(not bracket_mod(p, x, L, ideal) for p in ideal.relation_polys() for x in xs)


# ---------------------------------------------------------------------------
# spaces and operators


def _monomials_upto(n: int, k: int) -> list[Exp]:
    out = []
    for d in range(k + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _basis_order(e: Exp):
    return (sum(e), tuple(-a for a in e))


@dataclass(frozen=True)
class PolySpace:
    """Normal-form monomials of degree at most ``k``."""

    algebra: LieAlgebra
    k: int
    ideal: OrbitIdeal | None
    basis: tuple[Exp, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.algebra.dim

    @cached_property
    def index(self) -> dict[Exp, int]:
        return {e: i for i, e in enumerate(self.basis)}

    def element(self, a: int) -> Polynomial:
        return Polynomial.monomial(self.basis[a])

    def elements(self) -> list[Polynomial]:
        return [self.element(a) for a in range(self.dim)]

    def coords(self, f: Polynomial) -> list[Fraction]:
        f = reduce(f, self.ideal)
        v = [Fraction(0)] * self.dim
        for e, c in f.terms.items():
            i = self.index.get(e)
            if i is None:
                raise DegreeEscape(f"monomial {monomial_text(e)} outside the degree-{self.k} space")
            v[i] = c
        return v

    def poly(self, v: Sequence) -> Polynomial:
        return Polynomial(self.n, {e: c for e, c in zip(self.basis, v) if c})

    def contains(self, f: Polynomial) -> bool:
        f = reduce(f, self.ideal)
        return all(e in self.index for e in f.terms)

    def with_cap(self, k: int) -> "PolySpace":
        return poly_space(self.algebra, k, self.ideal)


def poly_space(L: LieAlgebra, k: int, ideal: OrbitIdeal | None = None, limit: int | None = None) -> PolySpace:
    if k < 0:
        raise InputError("degree cap must be >= 0")
    mons = [e for e in _monomials_upto(L.dim, k) if ideal is None or ideal.is_normal(e)]
    cap = max_dim() if limit is None else limit
    if len(mons) > cap:
        raise InputError(f"space of dimension {len(mons)} exceeds NOGO_MAX_DIM={cap}")
    mons.sort(key=_basis_order)
    return PolySpace(L, k, ideal, tuple(mons))


@dataclass(frozen=True)
class LinOp:
    domain: PolySpace
    codomain: PolySpace
    matrix: tuple[tuple[Fraction, ...], ...]

    def rows(self) -> exact.Matrix:
        return [list(r) for r in self.matrix]

    def apply(self, f: Polynomial) -> Polynomial:
        return self.codomain.poly(exact.matvec(self.rows(), self.domain.coords(f)))


def laplacian_poly(f: Polynomial, L: LieAlgebra, ideal: OrbitIdeal | None = None) -> Polynomial:
    """``-sum_i {x_i, {x_i, f}}`` over the structure basis, reduced."""
    out = Polynomial(L.dim)
    for x in variables(L.dim):
        out = out - bracket_mod(x, bracket_mod(x, f, L, ideal), L, ideal)
    return out


@lru_cache(maxsize=64)
def laplacian(L: LieAlgebra, S: PolySpace) -> LinOp:
    cols = []
    for a in range(S.dim):
        img = laplacian_poly(S.element(a), L, S.ideal)
        try:
            cols.append(S.coords(img))
        except DegreeEscape as exc:
            raise DegreeEscape(f"Laplacian of {monomial_text(S.basis[a]) or '1'} leaves the space: {exc}") from exc
    return LinOp(S, S, tuple(tuple(r) for r in exact.transpose(cols)) if cols else ())


@dataclass(frozen=True)
class LaplacianAnalysis:
    rank: int
    kernel_basis: tuple[Polynomial, ...]
    image_basis: tuple[Polynomial, ...]
    char_poly: tuple[Fraction, ...]

    def eigenvalues(self) -> list[tuple[Fraction, int]]:
        return rational_roots(list(self.char_poly))


def laplacian_analysis(op: LinOp) -> LaplacianAnalysis:
    S = op.domain
    m = op.rows()
    if not m:
        return LaplacianAnalysis(0, (), (), (Fraction(1),))
    ker = exact.nullspace(m, S.dim)
    img = exact.column_space(m)
    return LaplacianAnalysis(
        rank=len(img),
        kernel_basis=tuple(S.poly(v) for v in ker),
        image_basis=tuple(S.poly(v) for v in img),
        char_poly=tuple(exact.charpoly(m)),
    )


def rational_roots(cp: list[Fraction]) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicity.

    Floating-point roots of the exact square-free part only propose
    candidates; each is confirmed, and its multiplicity counted, by exact
    division of the full polynomial.
    """
    poly = list(cp)
    if len(poly) <= 1:
        return []
    sqf = _poly_quo(poly, _poly_gcd(poly, _poly_deriv(poly)))
    est = np.roots([float(c) for c in reversed(sqf)]) if len(sqf) > 1 else []
    cands = sorted({Fraction(complex(z).real).limit_denominator(10_000) for z in est})
    out = []
    for r in cands:
        mult = 0
        while len(poly) > 1:
            quot, rem = _synthetic_div(poly, r)
            if rem:
                break
            poly = quot
            mult += 1
        if mult:
            out.append((r, mult))
    return out


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _poly_deriv(p):
    return _poly_trim([i * c for i, c in enumerate(p)][1:] or [Fraction(0)])


def _poly_divmod(a, b):
    a = _poly_trim(a)
    b = _poly_trim(b)
    if len(a) < len(b):
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = list(a)
    lead = b[-1]
    for d in range(len(a) - len(b), -1, -1):
        f = rem[d + len(b) - 1] / lead
        quot[d] = f
        if f:
            for i, c in enumerate(b):
                rem[d + i] -= f * c
    return quot, _poly_trim(rem[: len(b) - 1] or [Fraction(0)])


def _poly_quo(a, b):
    return _poly_divmod(a, b)[0]


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while any(b):
        a, b = b, _poly_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _synthetic_div(poly: list[Fraction], r: Fraction):
    # poly lowest-degree first
    n = len(poly) - 1
    quot = [Fraction(0)] * n
    acc = Fraction(0)
    for d in range(n, 0, -1):
        acc = poly[d] + acc * r
        quot[d - 1] = acc
    rem = poly[0] + acc * r
    return quot, rem


# ---------------------------------------------------------------------------
# mean functional


class MeanFunctional:
    """Projection onto the constants along the image of the Laplacian.

    The Laplacian preserves the degree filtration of normal forms, so the
    functional ``m`` with ``m(1) = 1`` and ``m o Lap = 0`` is built one
    degree at a time by solving the top-degree block. A singular block
    means the kernel is larger than the constants (or meets the image) and
    the mean is undefined.
    """

    def __init__(self, L: LieAlgebra, ideal: OrbitIdeal | None):
        self.L = L
        self.ideal = ideal
        n = L.dim
        self.values: dict[Exp, Fraction] = {(0,) * n: Fraction(1)}
        self.degree = 0
        self.failed_at: int | None = None
        self._mono: dict[Exp, Fraction] = {}

    def _normal_of_degree(self, d: int) -> list[Exp]:
        mons = [e for e in _monomials_upto(self.L.dim, d) if sum(e) == d]
        if self.ideal is not None:
            mons = [e for e in mons if self.ideal.is_normal(e)]
        return sorted(mons, key=_basis_order)

    def extend(self, d: int) -> None:
        while self.degree < d:
            D = self.degree + 1
            if self.failed_at is not None:
                raise MeanUndefined(self._failure_msg())
            top = self._normal_of_degree(D)
            idx = {e: i for i, e in enumerate(top)}
            a = [[Fraction(0)] * len(top) for _ in top]  # row = column monomial e, col = unknown
            rhs = []
            for r, e in enumerate(top):
                img = laplacian_poly(Polynomial.monomial(e), self.L, self.ideal)
                low = Fraction(0)
                for me, mc in img.terms.items():
                    if sum(me) == D:
                        a[r][idx[me]] += mc
                    elif sum(me) < D:
                        low += mc * self.values[me]
                    else:
                        raise DegreeEscape("Laplacian raised the degree")
                rhs.append(-low)
            if exact.rank(a) < len(top):
                self.failed_at = D
                raise MeanUndefined(self._failure_msg())
            sol = exact.solve(a, rhs)
            for e, v in zip(top, sol):
                self.values[e] = v
            self.degree = D

    def _failure_msg(self) -> str:
        return (f"Laplacian is singular on degree-{self.failed_at} normal forms: "
                "kernel contains nonconstant invariants, mean undefined")

    def __call__(self, f: Polynomial) -> Fraction:
        return sum((c * self.monomial_mean(e) for e, c in f.terms.items()), Fraction(0))

    def monomial_mean(self, e: Exp) -> Fraction:
        """Mean of the (not necessarily normal) monomial ``x^e``, cached."""
        hit = self._mono.get(e)
        if hit is None:
            nf = self.ideal.normal_monomial(e) if self.ideal is not None and self.ideal.relations else {e: 1}
            self.extend(max((sum(x) for x in nf), default=0))
            hit = sum((c * self.values[x] for x, c in nf.items()), Fraction(0))
            self._mono[e] = hit
        return hit

    def pair(self, f: Polynomial, g: Polynomial) -> Fraction:
        """``mean(f g)`` without forming the product."""
        acc = Fraction(0)
        for e1, c1 in f.terms.items():
            for e2, c2 in g.terms.items():
                acc += c1 * c2 * self.monomial_mean(tuple(a + b for a, b in zip(e1, e2)))
        return acc

    def vector(self, S: PolySpace) -> list[Fraction]:
        self.extend(S.k)
        return [self.values[e] for e in S.basis]


@lru_cache(maxsize=32)
def mean_functional(L: LieAlgebra, ideal: OrbitIdeal | None) -> MeanFunctional:
    return MeanFunctional(L, ideal)


def mean(f: Polynomial, S: PolySpace) -> Fraction:
    """Mean of ``f``; spaces are enlarged to ``deg f`` as needed."""
    return mean_functional(S.algebra, S.ideal)(f)


def zero_mean_basis(S: PolySpace) -> list[Polynomial]:
    """``e_a - mean(e_a)`` for each nonconstant basis monomial."""
    m = mean_functional(S.algebra, S.ideal)
    return [e - m(e) for e in S.elements() if not e.is_constant()]


# ---------------------------------------------------------------------------
# Gram form and ad-invariance


@dataclass(frozen=True)
class GramForm:
    space: PolySpace
    matrix: tuple[tuple[Fraction, ...], ...]

    def __call__(self, f: Polynomial, g: Polynomial) -> Fraction:
        mf = mean_functional(self.space.algebra, self.space.ideal)
        return mf.pair(f, g)

    def leading_minors(self) -> list[Fraction]:
        return exact.leading_minors([list(r) for r in self.matrix])

    def is_positive_definite(self) -> bool:
        return all(m > 0 for m in self.leading_minors())


def inner(f: Polynomial, g: Polynomial, L: LieAlgebra, ideal: OrbitIdeal | None) -> Fraction:
    return mean_functional(L, ideal).pair(f, g)


def gram(S: PolySpace) -> GramForm:
    mf = mean_functional(S.algebra, S.ideal)
    els = S.elements()
    g = [[Fraction(0)] * S.dim for _ in range(S.dim)]
    for a in range(S.dim):
        for b in range(a, S.dim):
            g[a][b] = g[b][a] = mf.pair(els[a], els[b])
    return GramForm(S, tuple(tuple(r) for r in g))


def random_polynomial(S: PolySpace, rng: random.Random, density: float = 0.5, span: int = 5) -> Polynomial:
    t = {}
    for e in S.basis:
        if rng.random() < density:
            c = Fraction(rng.randint(-span, span), rng.randint(1, 3))
            if c:
                t[e] = c
    return Polynomial(S.n, t)


@dataclass(frozen=True)
class AdInvarianceResult:
    triples_checked: int
    samples_checked: int
    max_residual: Fraction
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.max_residual == 0


def ad_invariance_residual(f, g, h, L, ideal, form=None) -> Fraction:
    """``<{f,g},h> + <g,{f,h}>`` using ``form`` (default: the mean pairing)."""
    ip = form or (lambda u, v: inner(u, v, L, ideal))
    return ip(bracket_mod(f, g, L, ideal), h) + ip(g, bracket_mod(f, h, L, ideal))


def check_ad_invariance(S: PolySpace, samples: int = 0, seed: int = 0, form=None) -> AdInvarianceResult:
    """Residuals over all basis triples of ``S`` plus ``samples`` random triples.

    ``form`` may replace the mean pairing (negative controls pass a
    corrupted one).
    """
    L, ideal = S.algebra, S.ideal
    els = S.elements()
    ip = form or (lambda u, v: inner(u, v, L, ideal))
    br = {(a, b): bracket_mod(els[a], els[b], L, ideal)
          for a in range(S.dim) for b in range(S.dim)}
    worst = Fraction(0)
    failures = []
    for a in range(S.dim):
        for b in range(S.dim):
            for c in range(S.dim):
                r = ip(br[a, b], els[c]) + ip(els[b], br[a, c])
                if r:
                    failures.append((a, b, c, r))
                    worst = max(worst, abs(r))
    rng = random.Random(seed)
    for _ in range(samples):
        f, g, h = (random_polynomial(S, rng) for _ in range(3))
        r = ad_invariance_residual(f, g, h, L, ideal, ip)
        if r:
            failures.append((str(f), str(g), str(h), r))
            worst = max(worst, abs(r))
    return AdInvarianceResult(S.dim ** 3, samples, worst, tuple(failures[:10]))
