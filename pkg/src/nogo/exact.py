"""Exact scalars and linear algebra over Q and Q(i).

Matrices are plain lists of rows. Every routine here is field-generic: it
only needs ``+ - * /`` and truthiness of the entries, so the same code runs
on :class:`fractions.Fraction` and on :class:`QI` (Gaussian rationals).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list]


def q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` or Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def qstr(x: Fraction) -> str:
    return str(x)


class QI:
    """Gaussian rational ``re + im*i`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = q(re)
        self.im = q(im)

    @staticmethod
    def lift(x) -> "QI":
        return x if isinstance(x, QI) else QI(x)

    def __add__(self, other):
        o = QI.lift(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QI.lift(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QI.lift(other) - self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, QI):
            return QI(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)
        o = q(other)
        return QI(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.lift(other)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("QI division by zero")
        return QI((self.re * o.re + self.im * o.im) / n,
                  (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        return QI.lift(other) / self

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            o = QI.lift(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QI({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    @classmethod
    def parse(cls, s: str) -> "QI":
        """Inverse of ``str``: ``"1/2"``, ``"-3i"``, ``"1/2-3/4i"``."""
        s = s.strip().replace(" ", "")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not the leading one
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut <= 0:
            return cls(0, Fraction(body) if body not in ("", "+", "-") else Fraction(body + "1"))
        im = body[cut:]
        if im in ("+", "-"):
            im += "1"
        return cls(Fraction(body[:cut]), Fraction(im))


# ---------------------------------------------------------------------------
# dense matrices


def zeros(n: int, m: int | None = None, zero=Fraction(0)) -> Matrix:
    return [[zero] * (n if m is None else m) for _ in range(n)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), start=0 * row[0] if row else 0)
                    for col in bt])
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (Gauss-Jordan)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        piv = m[r]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], piv)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[list]:
    """Basis of ``{v : a v = 0}``, one vector per free column."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(r, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def column_space(a: Matrix) -> list[list]:
    """Canonical basis of the column span: rows of rref(a^T), zero rows dropped."""
    if not a or not a[0]:
        return []
    r, piv = rref(transpose(a))
    return [row for row in r[: len(piv)]]


def row_basis(vectors: Iterable[Sequence]) -> list[list]:
    """Reduced row-echelon basis of the span of ``vectors``."""
    vs = [list(v) for v in vectors]
    if not vs:
        return []
    r, piv = rref(vs)
    return r[: len(piv)]


def solve(a: Matrix, b: Sequence):
    """One solution of ``a x = b`` (free variables 0), or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(r, pivots):
        x[p] = row[n]
    return x


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return not any(v)
    return solve(transpose([list(u) for u in vectors]), v) is not None


def det(a: Matrix):
    """Determinant by Bareiss fraction-free elimination."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not m[k][k]:
            p = next((i for i in range(k + 1, n) if m[i][k]), None)
            if p is None:
                return Fraction(0)
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_minors(a: Matrix) -> list:
    """``[det(a[:1,:1]), det(a[:2,:2]), ...]``.

    Bareiss without pivoting yields the leading minors as its successive
    pivots; a vanishing pivot falls back to explicit determinants.
    """
    n = len(a)
    m = [list(row) for row in a]
    minors = []
    prev = Fraction(1)
    for k in range(n):
        minors.append(m[k][k])
        if not m[k][k]:
            minors.extend(det([row[: i + 1] for row in a[: i + 1]]) for i in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return minors


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients of det(x I - a), lowest degree first.

    Similarity reduction to upper Hessenberg form followed by the standard
    three-term-style recurrence over the subdiagonal.
    """
    n = len(a)
    h = [list(row) for row in a]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if h[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            h[i], h[m] = h[m], h[i]
            for row in h:
                row[i], row[m] = row[m], row[i]
        piv = h[m][m - 1]
        for i in range(m + 1, n):
            if not h[i][m - 1]:
                continue
            u = h[i][m - 1] / piv
            h[i] = [x - u * y for x, y in zip(h[i], h[m])]
            for row in h:
                row[m] = row[m] + u * row[i]
    # p[k] = charpoly of the leading k x k block
    p: list[list] = [[Fraction(1)]]
    for m in range(1, n + 1):
        # (x - h[m-1][m-1]) p[m-1]
        prev = p[m - 1]
        cur = [Fraction(0)] * (m + 1)
        for d, c in enumerate(prev):
            cur[d + 1] += c
            cur[d] -= h[m - 1][m - 1] * c
        t = Fraction(1)
        for i in range(1, m):
            t = t * h[m - i][m - i - 1]
            coeff = t * h[m - i - 1][m - 1]
            if coeff:
                for d, c in enumerate(p[m - i - 1]):
                    cur[d] -= coeff * c
        p.append(cur)
    return p[n]


def poly_from_roots(roots: Iterable[tuple]) -> list[Fraction]:
    """Monic polynomial prod (x - r)^mult, lowest degree first."""
    out = [Fraction(1)]
    for r, mult in roots:
        for _ in range(mult):
            nxt = [Fraction(0)] * (len(out) + 1)
            for d, c in enumerate(out):
                nxt[d + 1] += c
                nxt[d] -= r * c
            out = nxt
    return out


# ---------------------------------------------------------------------------
# sparse systems with dual witnesses


class SparseSystem:
    """Incremental Gauss-Jordan over sparse rows ``{col: coef}``.

    Every stored row remembers which original equations it combines, so an
    inconsistency comes with a dual vector ``y`` such that ``y^T A = 0`` and
    ``y^T b = 1``.
    """

    def __init__(self, ncols: int, zero=Fraction(0)):
        self.ncols = ncols
        self.zero = zero
        self.pivots: dict[int, tuple[dict, object, dict]] = {}
        self.n_eq = 0
        self.conflict: dict | None = None

    def add(self, row: dict, rhs) -> None:
        eq = self.n_eq
        self.n_eq += 1
        if self.conflict is not None:
            return
        row = {c: v for c, v in row.items() if v}
        combo = {eq: self.zero + 1}
        for c in [c for c in row if c in self.pivots]:
            f = row.get(c)
            if not f:
                continue
            prow, prhs, pcombo = self.pivots[c]
            row = _axpy(row, prow, -f)
            rhs = rhs - f * prhs
            combo = _axpy(combo, pcombo, -f)
        if not row:
            if rhs:
                inv = 1 / rhs
                self.conflict = {k: v * inv for k, v in combo.items()}
            return
        c0 = min(row)
        inv = 1 / row[c0]
        row = {c: v * inv for c, v in row.items()}
        rhs = rhs * inv
        combo = {k: v * inv for k, v in combo.items()}
        for c, (prow, prhs, pcombo) in list(self.pivots.items()):
            f = prow.get(c0)
            if f:
                self.pivots[c] = (_axpy(prow, row, -f), prhs - f * rhs, _axpy(pcombo, combo, -f))
        self.pivots[c0] = (row, rhs, combo)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def particular(self) -> list:
        x = [self.zero] * self.ncols
        for c, (_, rhs, _) in self.pivots.items():
            x[c] = rhs
        return x

    def null_basis(self) -> list[list]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            v = [self.zero] * self.ncols
            v[f] = self.zero + 1
            for c, (row, _, _) in self.pivots.items():
                if f in row:
                    v[c] = -row[f]
            basis.append(v)
        return basis


def _axpy(x: dict, y: dict, a) -> dict:
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) + a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out
