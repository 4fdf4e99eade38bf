"""Acceptance gate: one check per headline criterion, each printed as a
single PASS/FAIL line. Time-bounded criteria assert their wall-clock budget.
"""

import time

import pytest

from tnn_strata.verify import RunConfig, run_suite

_RESULTS = []


def _run(label, suite, config, budget=None):
    t0 = time.perf_counter()
    [rep] = run_suite(suite, config)
    wall = time.perf_counter() - t0
    ok = rep.ok and (budget is None or wall <= budget)
    _RESULTS.append((label, ok, rep.cases, wall))
    status = "PASS" if ok else "FAIL"
    print(f"{status} {label}: {rep.cases} cases, {wall:.1f}s")
    for f in rep.failures[:3]:
        print(f"     {f.case}: {f.detail}  [{f.repro}]")
    assert rep.ok, f"{label}: {len(rep.failures)} failures"
    if budget is not None:
        assert wall <= budget, f"{label}: {wall:.1f}s over {budget}s budget"


def test_01_verma_eulerian_s5():
    _run(
        "verma sums vanish on all S5 intervals; Mobius alternates on S4",
        "verma",
        RunConfig(n=5),
        budget=60,
    )


def test_02_param_cell_roundtrip_s5():
    _run(
        "parametrization/cell round-trip on all of S5, 3 draws each",
        "param-cell",
        RunConfig(n=5),
        budget=120,
    )


def test_03_factorization_500_s4():
    _run(
        "cell factorization x = x_u x^u, 500 random S4 cases, exact",
        "factorization",
        RunConfig(n=4),
    )


def test_04_rho_500_plus_sl3_closed_forms():
    _run(
        "fiber map rho contract, 500 S4 cases + 50 SL(3) closed forms, exact",
        "rho",
        RunConfig(n=4),
    )


def test_05_torus_equivariance_200():
    _run(
        "torus equivariance at tau in {1/3, 2, 7/5}, 200 cases, exact",
        "equivariance",
        RunConfig(n=4),
    )


def test_06_sign_lemmas_1000():
    _run(
        "three-case sign pattern and str(A^-1 nu A) >= 0, 1000 samples",
        "signs",
        RunConfig(n=4),
    )


def test_07_psi_positivity_10000():
    _run(
        "str(psi) > 0 off base, psi(base) = 0, 10^4 fiber points, exact",
        "psi-positivity",
        RunConfig(n=4),
    )


def test_08_flow_convergence_100_s3():
    _run(
        "backward flow reaches base within 1e-6 from 100 S3 points",
        "flow",
        RunConfig(n=3),
        budget=60,
    )


def test_09_link_census_s4_all_intervals():
    _run(
        "link census over all S4 intervals, eps in {1/2, 1, 2}, level 1e-9",
        "link-census",
        RunConfig(n=4),
    )


def test_10_retraction_s3_top_interval():
    _run(
        "retraction endpoints on S3 (e, w0) over 20 link points, 1e-6",
        "retraction",
        RunConfig(n=3),
    )


@pytest.fixture(scope="session", autouse=True)
def summary():
    yield
    if _RESULTS:
        print("\n=== acceptance summary ===")
        for label, ok, cases, wall in _RESULTS:
            print(f"{'PASS' if ok else 'FAIL'} {label} ({cases} cases, {wall:.1f}s)")
