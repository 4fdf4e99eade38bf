"""Named verification suites.

Each suite replays one family of identities from the library's contract:
exact-arithmetic checks run with Fractions, flow checks with the float
integrator.  A suite returns a VerificationReport; an empty failure list
is the pass condition for both the CLI and the acceptance tests.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cells import cell_of, is_tnn, lusztig_point
from .errors import TnnStrataError
from .fiber import conj_d, factor_u, pi_u, recover_shift, rho
from .flow import (
    default_base,
    flow,
    link_sample,
    nu_matrix,
    pi_n,
    psi,
    random_cell_point,
    retraction,
    sign_lemma_check,
    str_of,
)
from .perms import (
    Permutation,
    all_permutations,
    all_reduced_words,
    bruhat_leq,
    bruhat_leq_subword,
    interval,
    mobius,
    reduced_word,
)
from .ratmat import (
    RatMatrix,
    gauss_decompose,
    gauss_minus,
    gauss_plus,
    in_N_of_w,
    in_Nminus_of_w,
    is_in_G0,
    conj_by_perm,
    mul_perm_right,
    perm_matrix,
)

SUITES: dict = {}


@dataclass(frozen=True)
class RunConfig:
    n: int = 4
    seed: int = 0
    epsilon: float = 1.0
    tol: float = 1e-9
    max_steps: int = 200_000
    samples: int = 0  # 0 means each suite's spec-mandated default


@dataclass(frozen=True)
class Failure:
    case: str
    detail: str
    repro: str


@dataclass
class VerificationReport:
    suite: str
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self, timings: bool = False) -> dict:
        obj = {
            "suite": self.suite,
            "cases": self.cases,
            "ok": self.ok,
            "failures": [
                {"case": f.case, "detail": f.detail, "repro": f.repro}
                for f in sorted(self.failures, key=lambda f: f.case)
            ],
        }
        if timings:
            obj["wall_time"] = self.wall_time
        return obj


def _suite(name):
    def wrap(fn):
        SUITES[name] = fn
        return fn

    return wrap


class _Run:
    """Case counter + failure collector for one suite."""

    def __init__(self, name: str, config: RunConfig):
        self.report = VerificationReport(name)
        self.config = config
        self._t0 = time.perf_counter()

    def check(self, ok: bool, case: str, detail: str = ""):
        self.report.cases += 1
        if not ok:
            repro = (
                f"tnn-strata verify {self.report.suite} --n {self.config.n} "
                f"--seed {self.config.seed}"
            )
            self.report.failures.append(Failure(case, detail, repro))

    def done(self) -> VerificationReport:
        self.report.wall_time = time.perf_counter() - self._t0
        return self.report


def _rng(config: RunConfig) -> random.Random:
    return random.Random(config.seed)


def _rand_rat(rng, lo=-9, hi=9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 9))


def _rand_pos_rat(rng) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def _rand_matrix(rng, n) -> RatMatrix:
    return RatMatrix.from_rows(
        [[_rand_rat(rng) for _ in range(n)] for _ in range(n)]
    )


def _rand_g0(rng, n) -> RatMatrix:
    while True:
        m = _rand_matrix(rng, n)
        if is_in_G0(m):
            return m


def _rand_lower_unipotent(rng, n) -> RatMatrix:
    return RatMatrix.from_rows(
        [
            [_rand_rat(rng) if j < i else int(i == j) for j in range(n)]
            for i in range(n)
        ]
    )


def _rand_upper_unipotent(rng, n) -> RatMatrix:
    return RatMatrix.from_rows(
        [
            [_rand_rat(rng) if j > i else int(i == j) for j in range(n)]
            for i in range(n)
        ]
    )


def _leq_matrix(perms: list[Permutation]) -> np.ndarray:
    ranks = np.array([p.rank_table for p in perms], dtype=np.int16)
    ge = (ranks[:, None, :, :] >= ranks[None, :, :, :]).all(axis=(2, 3))
    return ge  # ge[a, b] True iff perms[a] <= perms[b] in Bruhat order


# ----------------------------------------------------------------------


@_suite("gauss")
def suite_gauss(config: RunConfig) -> VerificationReport:
    run = _Run("gauss", config)
    rng = _rng(config)
    samples = config.samples or 500

    for i in range(samples):
        n = 2 + i % 5  # ranks 2..6
        x = _rand_g0(rng, n)
        f = gauss_decompose(x)
        run.check(
            f.lower @ f.diag @ f.upper == x, f"roundtrip[{i}]", f"n={n}"
        )

    for i in range(100):
        n = 4
        w = rng.choice(all_permutations(n))
        # conjugating N_- by a permutation stays inside G_0 with unit diagonal
        nm = _rand_lower_unipotent(rng, n)
        z = conj_by_perm(w, nm)
        ok = is_in_G0(z) and gauss_decompose(z).diag == RatMatrix.identity(n)
        run.check(ok, f"perm-conj-lower[{i}]", f"w={w.serialize()}")
        # Gaussian factors of w^-1 B_- w land in w^-1 N_- w
        b_minus = _rand_lower_unipotent(rng, n) @ RatMatrix.from_rows(
            [
                [_rand_pos_rat(rng) if i2 == j2 else 0 for j2 in range(n)]
                for i2 in range(n)
            ]
        )
        z2 = conj_by_perm(w, b_minus)
        if is_in_G0(z2):
            f2 = gauss_decompose(z2)
            winv = w.inverse()
            back_l = conj_by_perm(winv, f2.lower)
            back_u = conj_by_perm(winv, f2.upper)
            ok = all(
                back_l.rows[a][b] == (1 if a == b else 0)
                for a in range(n)
                for b in range(a, n)
            ) and all(
                back_u.rows[a][b] == (1 if a == b else 0)
                for a in range(n)
                for b in range(a, n)
            )
            run.check(ok, f"factors-in-conj-lower[{i}]", f"w={w.serialize()}")

    for i in range(100):
        n = rng.randint(2, 5)
        x = _rand_g0(rng, n)
        y = _rand_matrix(rng, n)
        try:
            lhs = gauss_plus(gauss_plus(x) @ y)
            rhs = gauss_plus(x @ y)
        except TnnStrataError:
            continue  # one side undefined; identity only claimed otherwise
        run.check(lhs == rhs, f"plus-absorb[{i}]", f"n={n}")
    return run.done()


@_suite("bruhat")
def suite_bruhat(config: RunConfig) -> VerificationReport:
    run = _Run("bruhat", config)
    perms = all_permutations(4)
    for u in perms:
        run.check(u.length == u.inverse().length, f"len-inv[{u.serialize()}]")
    for u in perms:
        for v in perms:
            lhs = bruhat_leq(u, v)
            run.check(
                lhs == bruhat_leq_subword(u, v),
                f"subword[{u.serialize()};{v.serialize()}]",
            )
            run.check(
                lhs == bruhat_leq(u.inverse(), v.inverse()),
                f"inverse[{u.serialize()};{v.serialize()}]",
            )
    # reduced words: canonical word valid, exhaustive set correct on w_o(S3)
    for w in perms:
        word = reduced_word(w)
        prod = Permutation.identity(4)
        for a in word.letters:
            prod = prod * Permutation.transposition(a, 4)
        run.check(
            prod == w and len(word.letters) == w.length,
            f"word[{w.serialize()}]",
        )
    w0 = Permutation.longest(3)
    run.check(
        all_reduced_words(w0) == {(1, 2, 1), (2, 1, 2)}, "all-words-s3"
    )
    # permutation representatives multiply like the group
    rng = _rng(config)
    for i in range(50):
        u, v = rng.choice(perms), rng.choice(perms)
        run.check(
            perm_matrix(u) @ perm_matrix(v) == perm_matrix(u * v),
            f"perm-matrix[{i}]",
        )
    return run.done()


@_suite("verma")
def suite_verma(config: RunConfig) -> VerificationReport:
    run = _Run("verma", config)
    n = config.n
    perms = all_permutations(n)
    leq = _leq_matrix(perms)
    signs = np.array([(-1) ** p.length for p in perms], dtype=np.int64)
    # alternating sum over [u,v] = row of (leq * sign) @ leq
    sums = (leq * signs[None, :]).astype(np.int64) @ leq.astype(np.int64)
    for a, u in enumerate(perms):
        for b, v in enumerate(perms):
            if leq[a, b] and a != b:
                run.check(
                    sums[a, b] == 0,
                    f"verma[{u.serialize()};{v.serialize()}]",
                    f"sum={sums[a, b]}",
                )
    # Mobius alternates by length on S4
    perms4 = all_permutations(4)
    for u in perms4:
        for v in perms4:
            if bruhat_leq(u, v):
                mu = mobius(u, v)
                run.check(
                    mu == (-1) ** (v.length - u.length),
                    f"mobius[{u.serialize()};{v.serialize()}]",
                    f"mu={mu}",
                )
    return run.done()


@_suite("param-cell")
def suite_param_cell(config: RunConfig) -> VerificationReport:
    run = _Run("param-cell", config)
    rng = _rng(config)
    n = config.n
    reps = config.samples or 3
    for w in all_permutations(n):
        word = reduced_word(w)
        for i in range(reps):
            params = [_rand_pos_rat(rng) for _ in word.letters]
            pt = lusztig_point(word, params)
            run.check(
                cell_of(pt.matrix) == w,
                f"cell[{w.serialize()}#{i}]",
                f"params={params}",
            )
            run.check(
                is_tnn(pt.matrix), f"tnn[{w.serialize()}#{i}]", f"params={params}"
            )
    return run.done()


def _rand_pair_below(rng, perms, leq_cache=None):
    """Random (x in a cell w, u <= w) from S_n."""
    w = rng.choice([p for p in perms if p.length >= 1])
    u = rng.choice([p for p in perms if bruhat_leq(p, w)])
    return w, u


@_suite("factorization")
def suite_factorization(config: RunConfig) -> VerificationReport:
    run = _Run("factorization", config)
    rng = _rng(config)
    perms = all_permutations(4)
    samples = config.samples or 500
    for i in range(samples):
        w, u = _rand_pair_below(rng, perms)
        x = random_cell_point(w, rng)
        fr = factor_u(x, u)
        run.check(fr.x_u @ fr.x_upper_u == x, f"product[{i}]")
        run.check(cell_of(fr.x_u) == u, f"base-cell[{i}]")
        run.check(in_N_of_w(fr.x_upper_u, u), f"complement[{i}]")
        run.check(is_tnn(fr.x_u), f"base-tnn[{i}]")
        run.check(fr.A == fr.y @ fr.x_upper_u, f"A-split[{i}]")
        run.check(in_Nminus_of_w(fr.y, u), f"y-shape[{i}]")
        # uniqueness: re-factoring the product returns the same pair
        fr2 = factor_u(fr.x_u @ fr.x_upper_u, u)
        run.check(
            fr2.x_u == fr.x_u and fr2.x_upper_u == fr.x_upper_u,
            f"unique[{i}]",
        )
        run.check(pi_u(pi_u(x, u), u) == pi_u(x, u), f"idempotent[{i}]")
    return run.done()


@_suite("rho")
def suite_rho(config: RunConfig) -> VerificationReport:
    run = _Run("rho", config)
    rng = _rng(config)
    perms = all_permutations(4)
    samples = config.samples or 500
    for i in range(samples):
        w, u = _rand_pair_below(rng, perms)
        xt = random_cell_point(w, rng)
        base = random_cell_point(u, rng)
        xp = rho(xt, base, u)
        run.check(pi_u(xp, u) == base, f"fiber[{i}]")
        run.check(cell_of(xp) == cell_of(xt), f"cell[{i}]")
        run.check(is_tnn(xp), f"tnn[{i}]")
        # inverse pair back over the original base
        back = rho(xp, pi_u(xt, u), u)
        run.check(back == xt, f"inverse[{i}]")
        # fixed point when already in the fiber
        run.check(rho(xp, base, u) == xp, f"fixed[{i}]")
    # closed forms for rank 3, u = s_1
    u = Permutation((2, 1, 3))
    for i in range(50):
        a = _rand_pos_rat(rng)
        x12, x23 = _rand_pos_rat(rng), _rand_pos_rat(rng)
        x13 = x12 * x23 * Fraction(rng.randint(0, 9), 10)  # keeps the 2x2 minor >= 0
        xt = RatMatrix.from_rows([[1, x12, x13], [0, 1, x23], [0, 0, 1]])
        base = RatMatrix.from_rows([[1, a, 0], [0, 1, 0], [0, 0, 1]])
        expect = RatMatrix.from_rows(
            [
                [1, a, a * x13 / x12],
                [0, 1, (x12 * x23 - x13) / a + x13 / x12],
                [0, 0, 1],
            ]
        )
        run.check(rho(xt, base, u) == expect, f"closed-form[{i}]")
        fr = factor_u(xt, u)
        n1 = recover_shift(base, fr.x_u, u)
        nm = gauss_minus(fr.x_upper_u.inverse() @ n1)
        run.check(
            nm[2, 1] == 1 / a - 1 / x12, f"shift-entry[{i}]", f"got={nm[2, 1]}"
        )
    return run.done()


@_suite("equivariance")
def suite_equivariance(config: RunConfig) -> VerificationReport:
    run = _Run("equivariance", config)
    rng = _rng(config)
    perms = all_permutations(4)
    taus = [Fraction(1, 3), Fraction(2), Fraction(7, 5)]
    samples = config.samples or 200
    for i in range(samples):
        w, u = _rand_pair_below(rng, perms)
        x = random_cell_point(w, rng)
        tau = taus[i % len(taus)]
        fr = factor_u(x, u)
        fr_t = factor_u(conj_d(tau, x), u)
        # torus conjugation commutes with the factorization
        run.check(fr_t.x_u == conj_d(tau, fr.x_u), f"base[{i}]", f"tau={tau}")
        run.check(
            fr_t.x_upper_u == conj_d(tau, fr.x_upper_u),
            f"complement[{i}]",
            f"tau={tau}",
        )
        # the shift from the base to its torus image is d y^-1 d^-1 y
        n1 = recover_shift(fr.x_u, conj_d(tau, fr.x_u), u)
        run.check(
            n1 == conj_d(tau, fr.y.inverse()) @ fr.y, f"shift[{i}]", f"tau={tau}"
        )
        # rho pulls the torus image back through [d A^-1 d^-1 A]_+
        moved = rho(conj_d(tau, x), fr.x_u, u)
        expr = conj_d(tau, fr.A.inverse()) @ fr.A
        run.check(
            moved == x @ gauss_plus(expr).inverse(), f"pullback[{i}]", f"tau={tau}"
        )
    return run.done()


@_suite("signs")
def suite_signs(config: RunConfig) -> VerificationReport:
    run = _Run("signs", config)
    rng = _rng(config)
    samples = config.samples or 1000
    for i in range(samples):
        n = 3 if i % 2 == 0 else 4
        perms = all_permutations(n)
        w, u = _rand_pair_below(rng, perms)
        x = random_cell_point(w, rng)
        rep = sign_lemma_check(factor_u(x, u).A, u)
        run.check(
            rep.ok,
            f"pattern[{i}]",
            f"u={u.serialize()} w={w.serialize()} "
            f"violations={[(v.i, v.j, str(v.value)) for v in rep.violations]} "
            f"str={rep.str_value}",
        )
    return run.done()


@_suite("psi-positivity")
def suite_psi_positivity(config: RunConfig) -> VerificationReport:
    run = _Run("psi-positivity", config)
    rng = _rng(config)
    samples = config.samples or 10_000
    zero = None
    for i in range(samples):
        n = 3 if i % 2 == 0 else 4
        perms = all_permutations(n)
        w, u = _rand_pair_below(rng, perms)
        xt = random_cell_point(w, rng)
        base = pi_u(xt, u)
        x = rho(xt, base, u)
        if zero is None or zero.n != n:
            zero = RatMatrix.from_rows([[0] * n for _ in range(n)])
        if x == base:
            run.check(psi(x, u) == zero, f"stationary[{i}]")
            continue
        s = str_of(psi(x, u))
        run.check(
            s > 0,
            f"strict[{i}]",
            f"u={u.serialize()} w={w.serialize()} str(psi)={s} "
            f"witness={x.to_json()}",
        )
    # the base point is stationary, exactly
    for n in (3, 4):
        for w in all_permutations(n):
            xw = random_cell_point(w, rng)
            zero_n = RatMatrix.from_rows([[0] * n for _ in range(n)])
            run.check(
                psi(xw, w) == zero_n, f"base-stationary[{n}:{w.serialize()}]"
            )
    return run.done()


@_suite("flow")
def suite_flow(config: RunConfig) -> VerificationReport:
    run = _Run("flow", config)
    rng = _rng(config)
    perms = all_permutations(3)
    samples = config.samples or 100
    for i in range(samples):
        w, u = _rand_pair_below(rng, perms)
        xt = random_cell_point(w, rng)
        base = pi_u(xt, u)
        x = rho(xt, base, u)
        base_f = np.array(base.to_floats())
        x_f = np.array(x.to_floats())
        try:
            traj = flow(
                x_f,
                u,
                "backward",
                base=base_f,
                tol=config.tol,
                max_steps=config.max_steps,
            )
        except TnnStrataError as exc:
            run.check(False, f"backward[{i}]", f"{type(exc).__name__}: {exc}")
            continue
        dist = float(np.abs(traj[-1].point - base_f).max())
        run.check(dist < 1e-6, f"backward[{i}]", f"dist={dist}")
        if np.allclose(x_f, base_f):
            continue
        try:
            fwd = flow(
                x_f,
                u,
                "forward",
                base=base_f,
                tol=config.tol,
                max_steps=config.max_steps,
                target_str=str_of(x_f) + 2.0,
                snapshot_every=20,
            )
        except TnnStrataError as exc:
            run.check(False, f"forward[{i}]", f"{type(exc).__name__}: {exc}")
            continue
        strs = [s.str_value for s in fwd]
        run.check(
            all(b > a for a, b in zip(strs, strs[1:])),
            f"monotone[{i}]",
            f"strs={strs[:5]}...",
        )
    return run.done()


@_suite("link-census")
def suite_link_census(config: RunConfig) -> VerificationReport:
    run = _Run("link-census", config)
    n = min(config.n, 4)
    perms = all_permutations(n)
    pairs = [
        (u, v)
        for u in perms
        for v in perms
        if u != v and bruhat_leq(u, v)
    ]
    # combinatorial census: strata biject with (u,v], Euler characteristic 1
    for u, v in pairs:
        open_interval = [w for w in interval(u, v).elements if w != u]
        dims = [w.length - u.length - 1 for w in open_interval]
        run.check(min(dims) >= 0, f"dims[{u.serialize()};{v.serialize()}]")
        chi = sum((-1) ** d for d in dims)
        run.check(
            chi == 1, f"euler[{u.serialize()};{v.serialize()}]", f"chi={chi}"
        )
    # sampled census: link points sit on the level set and keep their label,
    # with per-stratum counts stable across epsilon
    count = config.samples or 1
    for u, v in pairs:
        per_eps = {}
        for eps in (0.5, 1.0, 2.0):
            try:
                ls = link_sample(u, v, eps, count, seed=config.seed)
            except TnnStrataError as exc:
                run.check(
                    False,
                    f"sample[{u.serialize()};{v.serialize()};eps={eps}]",
                    f"{type(exc).__name__}: {exc}",
                )
                continue
            target = float(str_of(ls.base)) + eps
            worst = max(abs(str_of(p) - target) for p, _ in ls.points)
            run.check(
                worst <= 1e-9,
                f"level[{u.serialize()};{v.serialize()};eps={eps}]",
                f"worst={worst}",
            )
            counts = {}
            for _, w in ls.points:
                counts[w] = counts.get(w, 0) + 1
            per_eps[eps] = counts
            run.check(
                set(counts) == set(ls.dimensions),
                f"labels[{u.serialize()};{v.serialize()};eps={eps}]",
            )
        if len(per_eps) == 3:
            vals = list(per_eps.values())
            run.check(
                vals[0] == vals[1] == vals[2],
                f"eps-stable[{u.serialize()};{v.serialize()}]",
            )
    return run.done()


@_suite("retraction")
def suite_retraction(config: RunConfig) -> VerificationReport:
    run = _Run("retraction", config)
    rng = _rng(config)
    u = Permutation.identity(3)
    v = Permutation.longest(3)
    z = default_base(v)
    base = default_base(u)
    base_f = np.array(base.to_floats())
    eps = config.epsilon
    samples = config.samples or 20
    pts = []
    from .flow import link_point

    for _ in range(samples):
        x = rho(random_cell_point(v, rng), base, u)
        pts.append(
            link_point(np.array(x.to_floats()), u, v, eps, base=base_f)
        )
    ends = []
    for i, x in enumerate(pts):
        r0 = retraction(x, 0.0, u, v, z, eps, base=base_f)
        d0 = float(np.abs(r0 - x).max())
        run.check(d0 < 1e-6, f"tau0[{i}]", f"dist={d0}")
        ends.append(retraction(x, 1.0, u, v, z, eps, base=base_f))
    spread = max(
        float(np.abs(a - b).max()) for a in ends for b in ends
    )
    run.check(spread < 1e-6, "tau1-constant", f"spread={spread}")
    # continuity along a tau grid for one point
    x = pts[0]
    prev = None
    for k in range(0, 11):
        tau = k / 10
        r = retraction(x, tau, u, v, z, eps, base=base_f)
        if prev is not None:
            jump = float(np.abs(r - prev).max())
            run.check(jump < 0.5, f"grid[{k}]", f"jump={jump}")
        prev = r
    return run.done()


def run_suite(name: str, config: RunConfig) -> list[VerificationReport]:
    if name == "all":
        return [fn(config) for key, fn in SUITES.items()]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](config)]
