"""The superdiagonal-sum functional, the gradient-like field on fibers,
its numerical integration, link sampling, and the retraction of a link."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .cells import cell_of, is_tnn, lusztig_point
from .errors import (
    MaxStepsExceeded,
    NotComparable,
    StepUnderflow,
    StratumEscape,
    ZNotInYgeqV,
)
from .fiber import factor_u, pi_u, rho
from .perms import Permutation, bruhat_leq, bruhat_less, interval, reduced_word
from .ratmat import RatMatrix, is_in_G0_u

STRATUM_CHECK_FLOOR = 1e-3


def str_of(x) -> float | Fraction:
    """Sum of the entries just above the diagonal; additive on N."""
    if isinstance(x, RatMatrix):
        return sum(x.rows[i][i + 1] for i in range(x.n - 1))
    return float(np.trace(x, offset=1))


def pi_n(m: RatMatrix) -> RatMatrix:
    """Projection onto strictly upper-triangular matrices (kernel: the
    Borel algebra on and below the diagonal)."""
    return RatMatrix.from_rows(
        [[m.rows[i][j] if j > i else 0 for j in range(m.n)] for i in range(m.n)]
    )


def nu_matrix(n: int) -> RatMatrix:
    return RatMatrix.from_rows(
        [[n - i if i == j else 0 for j in range(n)] for i in range(n)]
    )


@dataclass(frozen=True)
class FlowField:
    """Exact data of the tangent field on the fiber over ``base``."""

    u: Permutation
    base: RatMatrix
    nu: RatMatrix


def psi(x: RatMatrix, u: Permutation) -> RatMatrix:
    """Exact tangent vector x * pi_n(A^-1 nu A); zero exactly at the
    fiber's base point."""
    frame = factor_u(x, u)
    nu = nu_matrix(x.n)
    return x @ pi_n(frame.A.inverse() @ nu @ frame.A)


@dataclass(frozen=True)
class SignViolation:
    i: int
    j: int
    value: Fraction
    expected: str


@dataclass(frozen=True)
class SignReport:
    violations: tuple[SignViolation, ...]
    str_value: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations and self.str_value >= 0


def sign_lemma_check(A: RatMatrix, u: Permutation) -> SignReport:
    """Check the three-case sign pattern of (A^-1)_{j,i} * A_{i,j+1} and
    nonnegativity of str(A^-1 nu A) for A arising from a TNN point."""
    n = A.n
    Ainv = A.inverse()
    bad: list[SignViolation] = []
    for i in range(1, n + 1):
        for j in range(1, n):
            prod = Ainv[j, i] * A[i, j + 1]
            chain = u(j) <= u(i) <= u(j + 1)
            if chain and i <= j:
                if prod < 0:
                    bad.append(SignViolation(i, j, prod, ">=0"))
            elif chain:
                if prod > 0:
                    bad.append(SignViolation(i, j, prod, "<=0"))
            elif prod != 0:
                bad.append(SignViolation(i, j, prod, "=0"))
    s = str_of(Ainv @ nu_matrix(n) @ A)
    return SignReport(tuple(bad), s)


# --- numerical integration ---------------------------------------------

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


@dataclass
class FlowState:
    point: np.ndarray
    time: float
    str_value: float
    stratum: Permutation
    step: float


@dataclass
class FiberIntegrator:
    """Adaptive RK45 for xdot = psi(x) on the fiber over a fixed base,
    with periodic re-projection onto the fiber to cancel drift."""

    u: Permutation
    base: np.ndarray
    tol: float = 1e-9
    max_steps: int = 200_000
    reproject_every: int = 10
    max_step: float = 1.0

    def __post_init__(self):
        self._u0, self._uinv0 = kernels.perm_arrays(self.u)
        self._nu = kernels.nu_vector(self.u.n)

    def rhs(self, x: np.ndarray) -> np.ndarray:
        return kernels.psi_tangent(x, self._u0, self._uinv0, self._nu)

    def reproject(self, x: np.ndarray) -> np.ndarray:
        return kernels.rho_move(x, self.base, self._u0, self._uinv0)

    def rk_step(self, x: np.ndarray, h: float) -> tuple[np.ndarray, float]:
        """One embedded step; returns the 5th-order point and error estimate."""
        k = [self.rhs(x)]
        for s in range(1, 7):
            xs = x + h * sum(a * ki for a, ki in zip(_DP_A[s], k))
            k.append(self.rhs(xs))
        x5 = x + h * sum(b * ki for b, ki in zip(_DP_B5, k))
        x4 = x + h * sum(b * ki for b, ki in zip(_DP_B4, k))
        scale = self.tol * (1.0 + np.abs(x5).max())
        err = float(np.abs(x5 - x4).max() / scale)
        return x5, err

    def advance(self, x: np.ndarray, t_span: float) -> np.ndarray:
        """Integrate over a fixed signed time span (no stop rules)."""
        if t_span == 0.0:
            return x
        t = 0.0
        h = math.copysign(min(0.1, abs(t_span)), t_span)
        for _ in range(self.max_steps):
            if abs(t_span - t) <= abs(h):
                h = t_span - t
            xn, err = self.rk_step(x, h)
            if err <= 1.0 or abs(h) < 1e-14:
                x = xn
                t += h
                if abs(t - t_span) < 1e-15 * max(1.0, abs(t_span)):
                    return x
            h *= min(5.0, max(0.2, 0.9 * (1.0 / max(err, 1e-16)) ** 0.2))
            h = math.copysign(min(abs(h), self.max_step), h)
            if abs(h) < 1e-16:
                raise StepUnderflow("step size underflow in fixed-span advance")
        raise MaxStepsExceeded("fixed-span advance did not finish")


def _float_cell_rank(x: np.ndarray, i: int, j: int, tol: float) -> int:
    sub = x[:i, j - 1 :]
    if sub.size == 0:
        return 0
    sv = np.linalg.svd(sub, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 1.0)))


def cell_of_float(x: np.ndarray, tol: float = 1e-8) -> Permutation:
    """Float analogue of the exact cell identification, using SVD ranks."""
    n = x.shape[0]
    r = np.zeros((n + 1, n + 2), dtype=int)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r[i][j] = _float_cell_rank(x, i, j, tol)
    img = [0] * n
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            if r[i][k] - r[i - 1][k] - r[i][k + 1] + r[i - 1][k + 1] == 1:
                img[k - 1] = i
                break
    return Permutation(tuple(img))


def flow(
    x0: np.ndarray,
    u: Permutation,
    direction: str = "backward",
    *,
    base: np.ndarray | None = None,
    tol: float = 1e-9,
    max_steps: int = 200_000,
    snapshot_every: int = 50,
    target_str: float | None = None,
    stationary_tol: float = 1e-10,
    check_stratum: bool = True,
) -> list[FlowState]:
    """Integrate the fiber field from x0.

    Backward runs until the field (or the height above the base) is below
    ``stationary_tol``; forward runs until ``target_str`` is reached.
    The stratum label is frozen at the start and re-checked at snapshots
    (away from the base, where float rank detection is meaningful).
    """
    x0 = np.asarray(x0, dtype=np.float64)
    if base is None:
        u0, uinv0 = kernels.perm_arrays(u)
        base = kernels.fiber_parts(x0, u0, uinv0)[0]
    integ = FiberIntegrator(u, base, tol=tol)
    base_str = str_of(integ.base)
    stratum = cell_of_float(x0) if check_stratum else u
    forward = direction == "forward"
    if forward and target_str is None:
        raise ValueError("forward flow needs target_str")

    traj: list[FlowState] = [
        FlowState(x0.copy(), 0.0, str_of(x0), stratum, 0.0)
    ]
    x, t = x0.copy(), 0.0
    h = 0.01 if forward else -0.01
    accepted = 0
    for _ in range(max_steps):
        p = integ.rhs(x)
        pnorm = float(np.abs(p).max())
        if not forward and (
            pnorm < stationary_tol or str_of(x) - base_str < stationary_tol
        ):
            break
        if forward and str_of(x) >= target_str:
            break
        xn, err = integ.rk_step(x, h)
        if err <= 1.0:
            x, t = xn, t + h
            accepted += 1
            if accepted % integ.reproject_every == 0:
                x = integ.reproject(x)
            if accepted % snapshot_every == 0:
                s = str_of(x)
                if (
                    check_stratum
                    and s - base_str > STRATUM_CHECK_FLOOR
                    and cell_of_float(x) != stratum
                ):
                    raise StratumEscape(
                        f"stratum label changed along trajectory at t={t}"
                    )
                traj.append(FlowState(x.copy(), t, s, stratum, h))
        h *= min(5.0, max(0.2, 0.9 * (1.0 / max(err, 1e-16)) ** 0.2))
        h = math.copysign(min(abs(h), integ.max_step), h)
        if abs(h) < 1e-16:
            raise StepUnderflow("flow step size underflow")
    else:
        raise MaxStepsExceeded(f"flow did not terminate in {max_steps} steps")
    if traj[-1].time != t:
        traj.append(FlowState(x.copy(), t, str_of(x), stratum, h))
    return traj


def link_point(
    x: np.ndarray,
    u: Permutation,
    v: Permutation,
    epsilon: float,
    *,
    base: np.ndarray,
    str_tol: float = 1e-9,
    tol: float = 1e-12,
) -> np.ndarray:
    """The unique point with str = str(base) + epsilon on the trajectory
    through x, located by bisection on integration time."""
    integ = FiberIntegrator(u, base, tol=tol)
    target = str_of(base) + epsilon
    if abs(str_of(x) - target) <= str_tol:
        return x
    forward = str_of(x) < target
    sign = 1.0 if forward else -1.0

    # bracket the crossing with adaptive whole steps
    h = sign * 0.01
    lo = x
    for _ in range(100_000):
        xn, err = integ.rk_step(lo, h)
        if err <= 1.0:
            if (str_of(xn) - target) * sign >= 0.0:
                break
            lo = xn
        h *= min(5.0, max(0.2, 0.9 * (1.0 / max(err, 1e-16)) ** 0.2))
        h = math.copysign(min(abs(h), integ.max_step), h)
        if abs(h) < 1e-16:
            raise StepUnderflow("link_point bracketing underflow")
    else:
        raise MaxStepsExceeded("link_point failed to bracket the level set")

    # bisection on the time offset inside the bracketing step
    dt_lo, dt_hi = 0.0, h
    for _ in range(200):
        dt = 0.5 * (dt_lo + dt_hi)
        xm, _ = integ.rk_step(lo, dt)
        if abs(str_of(xm) - target) <= min(str_tol, 1e-12):
            return xm
        if (str_of(xm) - target) * sign < 0.0:
            dt_lo = dt
        else:
            dt_hi = dt
    xm, _ = integ.rk_step(lo, 0.5 * (dt_lo + dt_hi))
    if abs(str_of(xm) - target) > str_tol:
        raise StepUnderflow("link_point bisection stalled above tolerance")
    return xm


@dataclass(frozen=True)
class LinkSample:
    u: Permutation
    v: Permutation
    epsilon: float
    base: RatMatrix
    points: tuple[tuple[np.ndarray, Permutation], ...]
    dimensions: dict = field(hash=False, default_factory=dict)


def default_base(u: Permutation) -> RatMatrix:
    """Canonical base point of the u-cell: all Lusztig parameters 1."""
    word = reduced_word(u)
    return lusztig_point(word, [Fraction(1)] * len(word.letters)).matrix


def random_cell_point(w: Permutation, rng) -> RatMatrix:
    """Random rational point of the w-cell via its canonical reduced word."""
    word = reduced_word(w)
    params = [
        Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in word.letters
    ]
    return lusztig_point(word, params).matrix


def link_sample(
    u: Permutation,
    v: Permutation,
    epsilon: float,
    count: int,
    seed: int,
    *,
    str_tol: float = 1e-9,
) -> LinkSample:
    """Sample the link of the u-cell inside Y_[u,v]: for each stratum label
    w in (u,v], draw cell points, move them into the fiber over the
    canonical base with rho, and flow to the epsilon level set."""
    import random as _random

    if not bruhat_less(u, v):
        raise NotComparable(f"{u.serialize()} must be strictly below {v.serialize()}")
    rng = _random.Random(seed)
    base = default_base(u)
    base_f = np.array(base.to_floats())
    labels = sorted(
        (w for w in interval(u, v).elements if w != u),
        key=lambda w: (w.length, w.image),
    )
    points: list[tuple[np.ndarray, Permutation]] = []
    dims = {}
    for w in labels:
        dims[w] = w.length - u.length - 1
        for _ in range(count):
            x = rho(random_cell_point(w, rng), base, u)
            pt = link_point(
                np.array(x.to_floats()), u, v, epsilon, base=base_f, str_tol=str_tol
            )
            points.append((pt, w))
    return LinkSample(u, v, epsilon, base, tuple(points), dims)


def conj_d_float(tau: float, x: np.ndarray) -> np.ndarray:
    """Float torus conjugation, extended continuously to tau = 0, where it
    collapses any unipotent upper-triangular x to the identity."""
    n = x.shape[0]
    if tau == 0.0:
        return np.eye(n)
    j = np.arange(n)
    return x * (float(tau) ** (j[None, :] - j[:, None]))


def retraction(
    x: np.ndarray,
    tau: float,
    u: Permutation,
    v: Permutation,
    z: RatMatrix,
    epsilon: float,
    *,
    base: np.ndarray,
    str_tol: float = 1e-9,
) -> np.ndarray:
    """One stage of the deformation retraction of the link to a point:
    scale z up and x down with the torus, project onto the v-cell, move
    into the fiber over the base with rho, and land on the level set."""
    if not (is_tnn(z) and is_in_G0_u(z, v)):
        raise ZNotInYgeqV("z must be totally nonnegative with cell >= v")
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    zf = conj_d_float(tau, np.array(z.to_floats()))
    xf = conj_d_float(1.0 - tau, np.asarray(x, dtype=np.float64))
    y = zf @ xf
    v0, vinv0 = kernels.perm_arrays(v)
    y_v = kernels.fiber_parts(y, v0, vinv0)[0]
    if not np.all(np.isfinite(y_v)):
        raise ZNotInYgeqV(
            "projection onto the v-cell blew up; the input point must lie in "
            "the open v-stratum at the tau endpoints"
        )
    u0, uinv0 = kernels.perm_arrays(u)
    moved = kernels.rho_move(y_v, base, u0, uinv0)
    return link_point(moved, u, v, epsilon, base=base, str_tol=str_tol)
