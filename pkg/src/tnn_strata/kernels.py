"""Float kernels for the flow integrator.

Mirrors the exact-arithmetic maps (Gaussian factors, fiber factorization,
the tangent field, rho) on float64 numpy arrays.  The hot kernels are
compiled with numba when it is available; set ``TNN_STRATA_BACKEND=numpy``
to force the pure-numpy path, ``numba`` to require the jit path, or leave
unset/``auto`` to use numba opportunistically.

Permutations enter as 0-based index arrays: ``u0[j] = u(j+1)-1`` and
``uinv0`` for the inverse.  Column permutation ``x[:, uinv0]`` is x*P_u^-1;
row permutation ``y[uinv0, :]`` is P_u*y.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "TNN_STRATA_BACKEND"
THREADS_ENV = "TNN_STRATA_THREADS"


def _ldu_factors(M):
    """Unipotent lower and upper Gaussian factors of M (no pivoting)."""
    n = M.shape[0]
    work = M.copy()
    lower = np.eye(n)
    for k in range(n):
        for i in range(k + 1, n):
            f = work[i, k] / work[k, k]
            lower[i, k] = f
            for j in range(n):
                work[i, j] -= f * work[k, j]
    upper = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            upper[i, j] = work[i, j] / work[i, i]
    return lower, upper


def _fiber_parts(x, u0, uinv0):
    """(x_u, x^u, A) of the factorization of x with respect to u."""
    plus = _ldu_factors(x[:, uinv0].copy())[1]
    A = plus[u0, :][:, u0].copy()
    y, x_upper = _ldu_factors(A)
    x_u = _ldu_factors(y[uinv0, :].copy())[1]
    return x_u, x_upper, A


def _psi_tangent(x, u0, uinv0, nu):
    """The gradient-like field at x: x * (strict upper part of A^-1 nu A)."""
    n = x.shape[0]
    _, _, A = _fiber_parts(x, u0, uinv0)
    M = np.linalg.inv(A) @ (nu.reshape(-1, 1) * A)
    for i in range(n):
        for j in range(i + 1):
            M[i, j] = 0.0
    return x @ M


def _rho_move(xt, x_u, u0, uinv0):
    """Float rho: move xt into the fiber over x_u (same cell)."""
    xt_u, xt_upper, _ = _fiber_parts(xt, u0, uinv0)
    a = np.linalg.inv(_ldu_factors(xt_u[:, uinv0].copy())[1])
    b = _ldu_factors(x_u[:, uinv0].copy())[1]
    prod = a @ b
    n1 = prod[u0, :][:, u0].copy()
    n_minus = _ldu_factors(np.linalg.inv(xt_upper) @ n1)[0]
    return _ldu_factors(xt @ n_minus)[1]


def _want_numba() -> str:
    return os.environ.get(BACKEND_ENV, "auto").strip().lower() or "auto"


_mode = _want_numba()
if _mode not in ("auto", "numba", "numpy"):
    raise ValueError(f"{BACKEND_ENV} must be auto, numba, or numpy, not {_mode!r}")

USING_NUMBA = False
if _mode in ("auto", "numba"):
    try:
        import numba

        if THREADS_ENV in os.environ:
            numba.set_num_threads(max(1, int(os.environ[THREADS_ENV])))
        _jit = numba.njit(cache=True)
        _ldu_factors = _jit(_ldu_factors)
        _fiber_parts = _jit(_fiber_parts)
        _psi_tangent = _jit(_psi_tangent)
        _rho_move = _jit(_rho_move)
        USING_NUMBA = True
    except ImportError:
        if _mode == "numba":
            raise

ldu_factors = _ldu_factors
fiber_parts = _fiber_parts
psi_tangent = _psi_tangent
rho_move = _rho_move


def perm_arrays(u) -> tuple[np.ndarray, np.ndarray]:
    """0-based image arrays for a Permutation and its inverse."""
    u0 = np.array([v - 1 for v in u.image], dtype=np.int64)
    uinv0 = np.array([v - 1 for v in u.inverse().image], dtype=np.int64)
    return u0, uinv0


def nu_vector(n: int) -> np.ndarray:
    """Diagonal of the fixed torus direction: (n, n-1, ..., 1)."""
    return np.arange(n, 0, -1).astype(np.float64)
