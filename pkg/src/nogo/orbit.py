"""(Co)adjoint orbit data at a base point ``h``.

The algebra is identified with its dual through minus the Killing form, so
the isotropy algebra is ``ker ad_h`` and the orbit tangent space at ``h`` is
``im ad_h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .certificate import Certificate, Kind
from .errors import DecompositionFailure, NotSimple, ZeroPoint
from .liealg import (
    LieAlgebra,
    Subspace,
    is_compact_type,
    is_simple,
    lie_closure,
    to_json,
)

# finite deterministic probe set for regularity
PERTURBATIONS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3), Fraction(-5, 7))


@dataclass(frozen=True)
class OrbitPoint:
    algebra: LieAlgebra
    h: tuple[Fraction, ...]

    @classmethod
    def of(cls, algebra: LieAlgebra, h: Sequence) -> "OrbitPoint":
        if len(h) != algebra.dim:
            raise ZeroPoint(f"h has {len(h)} coordinates, algebra has dimension {algebra.dim}")
        return cls(algebra, tuple(exact.q(x) for x in h))

    @property
    def is_zero(self) -> bool:
        return not any(self.h)

    def ad(self) -> exact.Matrix:
        return self.algebra.ad(self.h)


@dataclass(frozen=True)
class IsotropyDecomposition:
    isotropy: Subspace
    tangent: Subspace
    direct: bool
    bracket_contained: bool


def isotropy_decomposition(p: OrbitPoint) -> IsotropyDecomposition:
    """``b = b_h + [b, h]`` with ``[b_h, [b, h]]`` inside ``[b, h]``, both checked."""
    L = p.algebra
    ad_h = p.ad()
    iso = Subspace.span(L, exact.nullspace(ad_h, L.dim))
    tan = Subspace.span(L, exact.column_space(ad_h))
    direct = exact.rank([list(v) for v in iso.basis + tan.basis] or [[0] * L.dim]) == L.dim \
        and iso.dim + tan.dim == L.dim
    if not direct:
        raise DecompositionFailure(
            f"isotropy (dim {iso.dim}) and tangent (dim {tan.dim}) do not form a direct sum; "
            "the algebra is probably not of compact type")
    contained = all(tan.contains(L.bracket(u, v)) for u in iso.basis for v in tan.basis)
    if not contained:
        raise DecompositionFailure("[b_h, [b, h]] is not contained in [b, h]")
    return IsotropyDecomposition(iso, tan, direct, contained)


def orbit_dimension(p: OrbitPoint) -> int:
    d = exact.rank(p.ad()) if not p.is_zero else 0
    if d % 2 and is_compact_type(p.algebra):
        raise DecompositionFailure(f"odd orbit dimension {d} for a compact-type algebra")
    return d


@dataclass(frozen=True)
class Regularity:
    regular: bool
    dimension_maximal: bool
    isotropy_abelian: bool
    orbit_dim: int
    max_sampled_dim: int


def probe_points(p: OrbitPoint) -> list[list[Fraction]]:
    n = p.algebra.dim
    pts = []
    for i in range(n):
        for eps in PERTURBATIONS:
            v = list(p.h)
            v[i] += eps
            pts.append(v)
    # a fixed "generic" direction added to h
    pts.append([x + Fraction(k + 1, 2 * k + 3) for k, x in enumerate(p.h)])
    return pts


def is_regular(p: OrbitPoint) -> Regularity:
    """Sampled maximality of ``rank ad_h`` plus abelian isotropy (reported separately)."""
    L = p.algebra
    d = 0 if p.is_zero else exact.rank(p.ad())
    dmax = max([d] + [exact.rank(L.ad(v)) for v in probe_points(p)])
    iso = Subspace.span(L, exact.nullspace(p.ad(), L.dim))
    abelian = all(not any(L.bracket(u, v)) for u in iso.basis for v in iso.basis)
    maximal = d == dmax and d > 0
    return Regularity(maximal and abelian, maximal, abelian, d, dmax)


def minimality_witness(p: OrbitPoint) -> Certificate:
    """Certificate that ``[b, h]`` generates ``b``.

    Payload lists preimages ``w`` with tangent vectors ``[h, w]`` and the
    bracket steps of a greedy closure, so a checker only re-evaluates
    brackets and one rank.
    """
    L = p.algebra
    if p.is_zero:
        raise ZeroPoint("h = 0: the orbit is a point")
    if not is_simple(L):
        raise NotSimple("algebra is not simple; minimality of the whole algebra is not claimed")
    ad_h = p.ad()
    # column j of ad_h is [h, e_j]; keep an independent set of columns
    _, pivots = exact.rref(ad_h)
    preimages = [L.basis_vector(j) for j in pivots]
    tangent = [[ad_h[r][j] for r in range(L.dim)] for j in pivots]
    gens, chain, steps = lie_closure(L, tangent)
    if len(gens) != L.dim:
        raise NotSimple(f"[b, h] generates only a {len(gens)}-dimensional subalgebra")
    return Certificate(Kind.MINIMALITY, {
        "algebra": to_json(L),
        "h": [str(x) for x in p.h],
        "preimages": [[str(x) for x in w] for w in preimages],
        "steps": [list(s) for s in steps],
        "rank_chain": chain,
        "closure_rounds": len(chain) - 1,
    })
