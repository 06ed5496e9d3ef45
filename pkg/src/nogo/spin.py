"""Spin-j representations of su(2) with Gaussian-rational entries.

The usual orthonormal basis forces square roots into the ladder operators.
Rescaling the weight vectors instead gives

    J_- v_m = v_{m-1},   J_+ v_{m-1} = (j+m)(j-m+1) v_m,   J_z v_m = m v_m,

which is similar to the standard representation by a positive diagonal
matrix. Images of the coordinates are ``Q(x_k) = -i J_k``, so
``[Q(x_1), Q(x_2)] = Q(x_3)`` matches ``{x_1, x_2} = x_3`` with no extra
scalar; the operators are skew-adjoint for the rescaled inner product.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .exact import QI, Matrix


def parse_spin(j) -> Fraction:
    jf = Fraction(str(j)) if not isinstance(j, Fraction) else j
    if jf < 0 or (2 * jf).denominator != 1:
        raise InputError(f"spin must be a non-negative integer or half-integer, got {j}")
    return jf


def weights(j) -> list[Fraction]:
    j = parse_spin(j)
    n = int(2 * j) + 1
    return [j - a for a in range(n)]


def ladder(j) -> tuple[Matrix, Matrix, Matrix]:
    """``(J_+, J_-, J_z)`` in the rescaled weight basis ``v_j, ..., v_-j``."""
    ms = weights(j)
    j = parse_spin(j)
    n = len(ms)
    zero = Fraction(0)
    jp = [[zero] * n for _ in range(n)]
    jm = [[zero] * n for _ in range(n)]
    jz = [[zero] * n for _ in range(n)]
    for a, m in enumerate(ms):
        jz[a][a] = m
        if a + 1 < n:
            # v_m at index a, v_{m-1} at index a + 1
            jm[a + 1][a] = Fraction(1)
            jp[a][a + 1] = (j + m) * (j - m + 1)
    return jp, jm, jz


def spin_images(j) -> list[Matrix]:
    """``[Q(x_1), Q(x_2), Q(x_3)] = [-i J_x, -i J_y, -i J_z]`` as QI matrices."""
    jp, jm, jz = ladder(j)
    n = len(jz)
    q1 = [[QI(0, -(jp[r][c] + jm[r][c]) / 2) for c in range(n)] for r in range(n)]
    q2 = [[QI(-(jp[r][c] - jm[r][c]) / 2) for c in range(n)] for r in range(n)]
    q3 = [[QI(0, -jz[r][c]) for c in range(n)] for r in range(n)]
    return [q1, q2, q3]


def commutator(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = [[QI(0)] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            acc = QI(0)
            for s in range(n):
                if a[r][s] and b[s][c]:
                    acc = acc + a[r][s] * b[s][c]
                if b[r][s] and a[s][c]:
                    acc = acc - b[r][s] * a[s][c]
            out[r][c] = acc
    return out


def casimir(j) -> Matrix:
    """``sum_k Q(x_k)^2``; equals ``-j(j+1) I``."""
    qs = spin_images(j)
    n = len(qs[0])
    out = [[QI(0)] * n for _ in range(n)]
    for m in qs:
        for r in range(n):
            for c in range(n):
                out[r][c] = out[r][c] + sum((m[r][s] * m[s][c] for s in range(n)), QI(0))
    return out
