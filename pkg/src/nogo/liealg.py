"""Finite-dimensional Lie algebras over the rationals.

Structure constants are stored as ``c[i][j][k]`` meaning
``[e_i, e_j] = sum_k c[i][j][k] e_k`` (0-based internally, 1-based in
error messages and in the JSON format).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Sequence

from . import exact
from .errors import (
    AntisymmetryViolation,
    JacobiViolation,
    ParseError,
    UnsupportedAlgebra,
)
from .exact import QI

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    labels: tuple[str, ...]
    c: tuple[tuple[tuple[Fraction, ...], ...], ...]
    # block decomposition into su(2)-type factors, used to build sphere ideals
    su2_blocks: tuple[tuple[int, int, int], ...] = ()

    @classmethod
    def unchecked(cls, c, labels=None, su2_blocks=()) -> "LieAlgebra":
        n = len(c)
        ct = tuple(tuple(tuple(exact.q(x) for x in c[i][j]) for j in range(n)) for i in range(n))
        if labels is None:
            labels = [f"e{i + 1}" for i in range(n)]
        return cls(n, tuple(labels), ct, tuple(tuple(b) for b in su2_blocks))

    def validate(self) -> "LieAlgebra":
        n = self.dim
        c = self.c
        if len(self.labels) != n:
            raise ParseError(f"{len(self.labels)} labels for dimension {n}")
        for i, j, k in product(range(n), repeat=3):
            if i <= j and c[i][j][k] + c[j][i][k]:
                raise AntisymmetryViolation(i + 1, j + 1, k + 1, c[i][j][k] + c[j][i][k])
        # with antisymmetry the Jacobi sum is totally antisymmetric in (i,j,k)
        nz = [[[(m, v) for m, v in enumerate(c[i][j]) if v] for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    acc = [Fraction(0)] * n
                    for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, v in nz[a][b]:
                            for l, w in nz[m][d]:
                                acc[l] += v * w
                    for l, s in enumerate(acc):
                        if s:
                            raise JacobiViolation(i + 1, j + 1, k + 1, l + 1, s)
        return self

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                w = x[i] * y[j]
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] += w * ck
        return out

    def basis_vector(self, i: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def ad(self, x: Sequence) -> exact.Matrix:
        """Matrix of ``y -> [x, y]``; column j is ``[x, e_j]``."""
        n = self.dim
        m = exact.zeros(n)
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        m[k][j] += x[i] * ck
        return m

    @cached_property
    def ad_basis(self) -> list[exact.Matrix]:
        return [self.ad(self.basis_vector(i)) for i in range(self.dim)]

    def __str__(self):
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


@dataclass(frozen=True)
class Subspace:
    """Span of vectors, stored as a reduced row-echelon basis."""

    ambient: LieAlgebra
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, ambient: LieAlgebra, vectors) -> "Subspace":
        vs = [[exact.q(x) for x in v] for v in vectors]
        return cls(ambient, tuple(tuple(r) for r in exact.row_basis(vs)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return exact.in_span(self.basis, list(v))

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)


@dataclass(frozen=True)
class BilinearForm:
    matrix: tuple[tuple[Fraction, ...], ...]

    def __call__(self, x: Sequence, y: Sequence) -> Fraction:
        return sum((x[i] * self.matrix[i][j] * y[j]
                    for i in range(len(x)) for j in range(len(y)) if x[i] and y[j]),
                   Fraction(0))

    def is_symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(i))

    def leading_minors(self) -> list[Fraction]:
        return exact.leading_minors([list(r) for r in self.matrix])

    def signature(self) -> tuple[int, int, int]:
        """(n_plus, n_minus, n_zero) via exact LDL^T with symmetric pivoting."""
        return _sylvester_signature([list(r) for r in self.matrix])


# ---------------------------------------------------------------------------
# construction


def new_lie_algebra(c, labels=None) -> LieAlgebra:
    """Build and validate an algebra from a ``dim x dim x dim`` tensor."""
    n = len(c)
    if any(len(row) != n or any(len(col) != n for col in row) for row in c):
        raise ParseError("structure tensor must have shape dim^3")
    return LieAlgebra.unchecked(c, labels).validate()


def _epsilon_tensor(n_blocks: int = 1):
    n = 3 * n_blocks
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for b in range(n_blocks):
        o = 3 * b
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            c[o + i][o + j][o + k] = 1
            c[o + j][o + i][o + k] = -1
    return c


def su2() -> LieAlgebra:
    """su(2) with ``[e_i, e_j] = eps_ijk e_k``."""
    return LieAlgebra.unchecked(_epsilon_tensor(), ["e1", "e2", "e3"], [(0, 1, 2)]).validate()


def so3() -> LieAlgebra:
    return LieAlgebra.unchecked(_epsilon_tensor(), ["L1", "L2", "L3"], [(0, 1, 2)]).validate()


def so4() -> LieAlgebra:
    """so(4) realized as su(2) + su(2), block-diagonal epsilon constants."""
    return direct_sum(su2(), su2())


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra.unchecked([[[0] * n for _ in range(n)] for _ in range(n)],
                                [f"a{i + 1}" for i in range(n)]).validate()


def sl2r() -> LieAlgebra:
    """sl(2, R) in the Chevalley basis h, e, f."""
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    h, e, f = 0, 1, 2
    c[h][e][e], c[e][h][e] = 2, -2
    c[h][f][f], c[f][h][f] = -2, 2
    c[e][f][h], c[f][e][h] = 1, -1
    return LieAlgebra.unchecked(c, ["h", "e", "f"]).validate()


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    n = a.dim + b.dim
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in product(range(a.dim), repeat=3):
        c[i][j][k] = a.c[i][j][k]
    o = a.dim
    for i, j, k in product(range(b.dim), repeat=3):
        c[o + i][o + j][o + k] = b.c[i][j][k]
    labels = list(a.labels) + list(b.labels)
    if len(set(labels)) < len(labels):
        labels = [f"{s}_1" for s in a.labels] + [f"{s}_2" for s in b.labels]
    blocks = list(a.su2_blocks) + [tuple(o + x for x in blk) for blk in b.su2_blocks]
    return LieAlgebra.unchecked(c, labels, blocks).validate()


def from_matrix_basis(mats: Sequence[exact.Matrix], labels=None) -> LieAlgebra:
    """Structure constants of a real Lie algebra given by a basis of
    (Gaussian-rational) matrices, solving ``[A_i, A_j] = sum_k c A_k``
    over Q through real and imaginary parts."""
    n = len(mats)

    def flat(m):
        cells = [QI.lift(x) for row in m for x in row]
        return [x.re for x in cells] + [x.im for x in cells]

    cols = [flat(m) for m in mats]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rhs = []
    for i, j in pairs:
        ab = exact.matmul(mats[i], mats[j])
        ba = exact.matmul(mats[j], mats[i])
        rhs.append(flat([[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]))
    # one elimination for all right-hand sides
    aug = [[col[r] for col in cols] + [b[r] for b in rhs] for r in range(len(cols[0]))]
    R, piv = exact.rref(aug)
    if piv[:n] != list(range(n)):
        raise UnsupportedAlgebra("basis matrices are linearly dependent")
    if len(piv) > n:
        i, j = pairs[piv[n] - n]
        raise UnsupportedAlgebra(f"[A{i + 1}, A{j + 1}] leaves the rational span of the basis")
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for p, (i, j) in enumerate(pairs):
        for k in range(n):
            c[i][j][k] = R[k][n + p]
            c[j][i][k] = -R[k][n + p]
    return LieAlgebra.unchecked(c, labels).validate()


@lru_cache(maxsize=16)
def su_n(n: int) -> LieAlgebra:
    """Compact su(n) in a Chevalley-derived basis with rational constants.

    Basis: ``i(E_aa - E_a+1,a+1)``, then for a < b the pair
    ``E_ab - E_ba`` and ``i(E_ab + E_ba)``.
    """
    if n < 2:
        raise UnsupportedAlgebra("su(n) needs n >= 2")
    zero, one, iu = QI(0), QI(1), QI(0, 1)

    def e(a, b, val):
        m = [[zero] * n for _ in range(n)]
        m[a][b] = val
        return m

    def add(x, y):
        return [[u + v for u, v in zip(r, s)] for r, s in zip(x, y)]

    def neg(x):
        return [[-u for u in r] for r in x]

    mats, labels = [], []
    for a in range(n - 1):
        mats.append(add(e(a, a, iu), e(a + 1, a + 1, -iu)))
        labels.append(f"h{a + 1}")
    for a in range(n):
        for b in range(a + 1, n):
            mats.append(add(e(a, b, one), neg(e(b, a, one))))
            labels.append(f"x{a + 1}{b + 1}")
            mats.append(add(e(a, b, iu), e(b, a, iu)))
            labels.append(f"y{a + 1}{b + 1}")
    return from_matrix_basis(mats, labels)


_BUILTIN_SIMPLE = {
    "su2": su2, "su(2)": su2,
    "so3": so3, "so(3)": so3,
    "so4": so4, "so(4)": so4,
    "sl2r": sl2r, "sl(2,r)": sl2r,
}


def builtin(name: str) -> LieAlgebra:
    """Look up a named algebra.

    Accepts ``su2 so3 so4 sl2r``, ``suN``/``su(N)``, ``abelianN`` and
    ``A+B`` for direct sums of any of those.
    """
    key = name.strip().lower().replace(" ", "")
    if "+" in key:
        parts = [builtin(p) for p in key.split("+")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_sum(out, p)
        return out
    if key in _BUILTIN_SIMPLE:
        return _BUILTIN_SIMPLE[key]()
    m = re.fullmatch(r"su\(?(\d+)\)?", key)
    if m:
        return su_n(int(m.group(1)))
    m = re.fullmatch(r"abelian\(?(\d+)\)?", key)
    if m:
        return abelian(int(m.group(1)))
    raise UnsupportedAlgebra(f"unknown builtin algebra {name!r}")


# ---------------------------------------------------------------------------
# JSON


def to_json(L: LieAlgebra) -> dict:
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            coeffs = [{"k": k + 1, "v": str(v)} for k, v in enumerate(L.c[i][j]) if v]
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    out = {"dim": L.dim, "labels": list(L.labels), "brackets": brackets}
    if L.su2_blocks:
        out["su2_blocks"] = [[x + 1 for x in b] for b in L.su2_blocks]
    return out


def from_json(data, validate: bool = True) -> LieAlgebra:
    """Parse the algebra JSON format; i > j entries are rejected."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        n = int(data["dim"])
        if n <= 0:
            raise ParseError("dim must be positive")
        labels = data.get("labels") or [f"e{i + 1}" for i in range(n)]
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for entry in data.get("brackets", []):
            i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(f"bracket index out of range: ({i + 1},{j + 1})")
            if i >= j:
                raise ParseError(f"bracket ({i + 1},{j + 1}) must have i < j")
            for co in entry["coeffs"]:
                k = int(co["k"]) - 1
                if not 0 <= k < n:
                    raise ParseError(f"coefficient index k={k + 1} out of range")
                v = Fraction(str(co["v"]))
                c[i][j][k] = v
                c[j][i][k] = -v
        blocks = [tuple(x - 1 for x in b) for b in data.get("su2_blocks", [])]
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed algebra JSON: {exc}") from exc
    L = LieAlgebra.unchecked(c, labels, blocks)
    return L.validate() if validate else L


# ---------------------------------------------------------------------------
# structure


def killing_form(L: LieAlgebra) -> BilinearForm:
    """``K_ij = tr(ad_i ad_j) = sum_{k,m} c^k_{im} c^m_{jk}``."""
    n = L.dim
    c = L.c
    k = [[sum(c[i][m][kk] * c[j][kk][m] for m in range(n) for kk in range(n))
          for j in range(n)] for i in range(n)]
    return BilinearForm(tuple(tuple(r) for r in k))


def is_semisimple(L: LieAlgebra) -> bool:
    """Cartan's criterion: the Killing form is nondegenerate."""
    return exact.det([list(r) for r in killing_form(L).matrix]) != 0


def is_compact_type(L: LieAlgebra) -> bool:
    """Killing form negative definite: leading minors alternate in sign starting negative."""
    minors = killing_form(L).leading_minors()
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


def center(L: LieAlgebra) -> Subspace:
    # x central iff sum_j x_j c^k_{ij} = 0 for every i, k
    n = L.dim
    rows = [[L.c[i][j][k] for j in range(n)] for i in range(n) for k in range(n)]
    return Subspace.span(L, exact.nullspace(rows, n))


def derived_algebra(L: LieAlgebra) -> Subspace:
    n = L.dim
    return Subspace.span(L, [L.c[i][j] for i in range(n) for j in range(i + 1, n)])


def lie_closure(L: LieAlgebra, vectors) -> tuple[list[list[Fraction]], list[int], list[tuple[int, int]]]:
    """Greedy bracket closure.

    Returns ``(gens, chain, steps)``: ``gens`` starts with an independent
    subset of ``vectors`` and each later entry ``gens[m]`` equals
    ``[gens[a], gens[b]]`` for ``steps[m - len0] = (a, b)``; ``chain`` is
    the rank after each closure round.
    """
    gens: list[list[Fraction]] = []
    for v in vectors:
        v = [exact.q(x) for x in v]
        if not exact.in_span(gens, v):
            gens.append(v)
    chain = [len(gens)]
    steps: list[tuple[int, int]] = []
    while True:
        added = False
        m = len(gens)
        for a in range(m):
            for b in range(a + 1, m):
                w = L.bracket(gens[a], gens[b])
                if not exact.in_span(gens, w):
                    gens.append(w)
                    steps.append((a, b))
                    added = True
        if not added:
            return gens, chain, steps
        chain.append(len(gens))


def lie_generate(L: LieAlgebra, S) -> Subspace:
    """Least subalgebra containing ``S`` (a Subspace or list of vectors)."""
    vectors = S.basis if isinstance(S, Subspace) else S
    gens, _, _ = lie_closure(L, vectors)
    return Subspace.span(L, gens)


def ideal_generated(L: LieAlgebra, vectors) -> Subspace:
    span = [list(v) for v in exact.row_basis(vectors)] if vectors else []
    while True:
        new = list(span)
        for v in span:
            for i in range(L.dim):
                w = L.bracket(L.basis_vector(i), v)
                if not exact.in_span(new, w):
                    new.append(w)
        if len(new) == len(span):
            return Subspace.span(L, span)
        span = new


def centroid_dim(L: LieAlgebra) -> int:
    """Dimension of ``{T : T ad_x = ad_x T for all x}``."""
    n = L.dim
    rows = []
    for a in L.ad_basis:
        # (T a - a T)_{pq} = sum_r T_pr a_rq - a_pr T_rq, unknown T_pr at index p*n + r
        for p in range(n):
            for qq in range(n):
                row = [Fraction(0)] * (n * n)
                for r in range(n):
                    row[p * n + r] += a[r][qq]
                    row[r * n + qq] -= a[p][r]
                if any(row):
                    rows.append(row)
    return n * n - exact.rank(rows) if rows else n * n


def is_simple(L: LieAlgebra) -> bool:
    """Semisimple, every basis vector generates the whole algebra as an
    ideal, and the centroid is one-dimensional (a nontrivial ideal
    decomposition would give a second commuting projector)."""
    if L.dim == 0 or not is_semisimple(L):
        return False
    if any(not ideal_generated(L, [L.basis_vector(i)]).is_full() for i in range(L.dim)):
        return False
    return centroid_dim(L) == 1


def _sylvester_signature(a: exact.Matrix) -> tuple[int, int, int]:
    m = [list(r) for r in a]
    n = len(m)
    plus = minus = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i]), None)
        if piv is None:
            # all remaining diagonal entries zero: find an off-diagonal pair
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # replace row/col i by i + j to create a nonzero diagonal entry
            for r in range(n):
                m[r][i] = m[r][i] + m[r][j]
            for cidx in range(n):
                m[i][cidx] = m[i][cidx] + m[j][cidx]
            continue
        d = m[piv][piv]
        if d > 0:
            plus += 1
        else:
            minus += 1
        active.remove(piv)
        for i in active:
            f = m[i][piv] / d
            if f:
                for j in range(n):
                    m[i][j] -= f * m[piv][j]
        for i in active:
            m[i][piv] = m[piv][i] = Fraction(0)
    return plus, minus, n - plus - minus
