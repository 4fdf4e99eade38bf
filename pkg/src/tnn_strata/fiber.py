"""Projection onto a cell, the x = x_u x^u factorization, and the
fiber-to-fiber map rho, all in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cells import cell_of
from .errors import (
    CellMismatch,
    InternalInvariantError,
    NonPositiveTau,
    NotInG0u,
    NotUnipotentUpper,
)
from .perms import Permutation
from .ratmat import (
    NotInG0,
    RatMatrix,
    conj_by_perm,
    gauss_decompose,
    gauss_minus,
    gauss_plus,
    g0u_witness,
    is_in_N,
    mul_perm_left,
    mul_perm_right,
)


@dataclass(frozen=True)
class FiberFrame:
    """All intermediates of the factorization x = x_u x^u at one point."""

    u: Permutation
    x: RatMatrix
    x_u: RatMatrix
    x_upper_u: RatMatrix
    A: RatMatrix
    y: RatMatrix


def factor_u(x: RatMatrix, u: Permutation) -> FiberFrame:
    """Split x in N cap G_0 u as x_u * x^u with x_u in the u-cell and
    x^u in N(u):

        A   = u^-1 [x u^-1]_+ u,
        y   = [A]_-,   x^u = [A]_+,
        x_u = [u y]_+.
    """
    if not is_in_N(x):
        raise NotUnipotentUpper("factor_u expects x in N")
    w = g0u_witness(x, u)
    if w is not None:
        raise NotInG0u(w)
    try:
        plus = gauss_plus(mul_perm_right(x, u.inverse()))
        A = conj_by_perm(u, plus)
        fac = gauss_decompose(A)
        y, x_upper = fac.lower, fac.upper
        x_u = gauss_plus(mul_perm_left(u, y))
    except NotInG0 as exc:  # ruled out by the theory once x is in G_0 u
        raise InternalInvariantError(
            f"inner Gaussian decomposition failed for u={u.serialize()}"
        ) from exc
    if fac.diag != RatMatrix.identity(x.n):
        raise InternalInvariantError("A must have trivial diagonal factor")
    return FiberFrame(u=u, x=x, x_u=x_u, x_upper_u=x_upper, A=A, y=y)


def pi_u(x: RatMatrix, u: Permutation) -> RatMatrix:
    """The projection onto the u-cell: the x_u component of factor_u."""
    return factor_u(x, u).x_u


def recover_shift(x_w: RatMatrix, xt_w: RatMatrix, w: Permutation) -> RatMatrix:
    """The unique n_1 in N_-(w) with [xt_w n_1]_+ = x_w:

        n_1 = w^-1 ([xt_w w^-1]_+)^-1 [x_w w^-1]_+ w.
    """
    for m in (x_w, xt_w):
        if cell_of(m) != w:
            raise CellMismatch(
                f"recover_shift arguments must lie in the {w.serialize()}-cell"
            )
    winv = w.inverse()
    a = gauss_plus(mul_perm_right(xt_w, winv)).inverse()
    b = gauss_plus(mul_perm_right(x_w, winv))
    return conj_by_perm(w, a @ b)


def rho(xt: RatMatrix, x_u: RatMatrix, u: Permutation) -> RatMatrix:
    """Move xt into the fiber of pi_u over x_u, preserving its Bruhat cell:

        n_- = [(xt^u)^-1 n_1]_-,   rho(xt) = [xt n_-]_+.
    """
    frame = factor_u(xt, u)
    n_1 = recover_shift(x_u, frame.x_u, u)
    try:
        n_minus = gauss_minus(frame.x_upper_u.inverse() @ n_1)
        return gauss_plus(xt @ n_minus)
    except NotInG0 as exc:
        raise InternalInvariantError(
            f"rho hit an undecomposable intermediate for u={u.serialize()}"
        ) from exc


def conj_d(tau, x: RatMatrix) -> RatMatrix:
    """Torus conjugation d(tau) x d(tau)^-1: entry (i,j) scales by tau^(j-i)."""
    t = tau if isinstance(tau, Fraction) else Fraction(tau)
    if t <= 0:
        raise NonPositiveTau("tau must be > 0")
    return RatMatrix.from_rows(
        [
            [x.rows[i][j] * t ** (j - i) for j in range(x.n)]
            for i in range(x.n)
        ]
    )
