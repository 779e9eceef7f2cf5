"""Acceptance suite: one test per criterion, each printing a pass/fail
line with its measured numbers (run with ``pytest -s`` to see them all).

Budgets are fixed here, not tuned at runtime; every tolerance is stated
inline next to the assertion it guards.
"""

import math
import time

import numpy as np
import pytest

from hypaff.cli import main as cli_main
from hypaff.map_core import gate_corollary, preset_belykh
from hypaff.measure import (
    Observable,
    UnstableCurve,
    correlation_decay,
    entropy_estimate,
    estimate_sbr,
    invariance_gap,
    marginal,
)
from hypaff.partition import A2Cert, check_A2, compute_D_tau, refine_to_depth
from hypaff.symbolic import Word, stable_coordinate
from hypaff.transversality import (
    compute_delta,
    corollary_interval_bound,
    random_series,
    verify_implication,
)

from conftest import brute_force_multiplicity

CURVE = UnstableCurve(0.3, 0.05, 0.95)


def report(num: int, name: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"\n[acceptance {num:02d}] {status}  {name}: {detail}")
    assert passed, f"criterion {num} ({name}): {detail}"


def test_01_transversality_certificates():
    t0 = time.perf_counter()
    deltas = {}
    counterexamples = 0
    rng = np.random.default_rng(2024)
    for n in (3, 2, 4):
        cert = compute_delta(n, 1.0, grid_step=1e-4)
        deltas[n] = cert.delta
        for _ in range(10_000):
            s = random_series(rng, 200, 1.0)
            rep = verify_implication(cert, s, samples=64, tol=1e-9)
            counterexamples += len(rep.counterexamples)
    elapsed = time.perf_counter() - t0
    detail = (f"delta2={deltas[2]:.3e} delta3={deltas[3]:.3e} "
              f"delta4={deltas[4]:.3e} counterexamples={counterexamples} "
              f"({elapsed:.1f}s < 30s)")
    ok = (all(d > 1e-6 for d in deltas.values())
          and counterexamples == 0 and elapsed < 30.0)
    report(1, "transversality certificates", ok, detail)


def test_02_interval_bound_monte_carlo():
    t0 = time.perf_counter()
    cert = compute_delta(3, 1.0, grid_step=1e-4)
    q0, l, r = 0.3, 3, 1e-3
    bound = corollary_interval_bound(cert, q0, l, r)
    step = 1e-5
    qs = np.arange(q0 + step, cert.Q_n, step)
    in_region = 1.0 < (1.0 - qs) / (qs - 2.0 * qs**4)
    ks = np.arange(l + 1, 200)
    powmat = qs[:, None] ** ks
    lead = qs**l
    rng = np.random.default_rng(7)
    worst = 0.0
    sequences = [rng.uniform(-1.0, 1.0, ks.size) for _ in range(100)]
    # one adversarial sequence whose series vanishes at q = 0.5, so the
    # measured set is provably nonempty and the bound is tested with teeth
    sequences.append(np.full(ks.size, -1.0))
    nonzero_seen = False
    for s_k in sequences:
        vals = lead + powmat @ s_k
        measured = float((in_region & (np.abs(vals) < r)).sum()) * step
        nonzero_seen = nonzero_seen or measured > 0
        worst = max(worst, measured)
    elapsed = time.perf_counter() - t0
    ok = worst <= bound and nonzero_seen and elapsed < 60.0
    report(2, "interval bound Monte-Carlo", ok,
           f"worst measured={worst:.3e} <= bound={bound:.3e} "
           f"nonzero_case_seen={nonzero_seen} ({elapsed:.1f}s < 60s)")


def test_03_belykh_parameter_gate():
    t0 = time.perf_counter()
    passing = [(0.55, 2.0), (0.52, 2.0), (0.6, 1.7)]
    failing = [(0.45, 2.0), (0.65, 2.0)]
    results = []
    margins_recorded = True
    for lam, gam in passing + failing:
        rep = gate_corollary(preset_belykh(lam, gam, 0.0))
        results.append(rep.overall)
        for cond in rep.passes:
            if math.isnan(cond.threshold_margin):
                margins_recorded = False
    elapsed = time.perf_counter() - t0
    ok = (results[:3] == [True, True, True]
          and results[3:] == [False, False]
          and margins_recorded and elapsed < 1.0)
    report(3, "parameter gate on the two-piece family", ok,
           f"pass={results[:3]} fail={results[3:]} ({elapsed*1e3:.0f}ms < 1s)")


def test_04_a2_checker():
    t0 = time.perf_counter()
    m = preset_belykh(0.5, 2.0, 0.0)
    cert = check_A2(m, 5)
    oracle_ok = True
    for tau in (1, 2, 3):
        d, _ = compute_D_tau(m, tau)
        z = refine_to_depth(m, tau)
        _, want = brute_force_multiplicity(list(z.boundary))
        oracle_ok = oracle_ok and d == want
    elapsed = time.perf_counter() - t0
    ok = (isinstance(cert, A2Cert) and cert.passed and cert.tau <= 5
          and oracle_ok and elapsed < 60.0)
    detail = (f"tau={getattr(cert, 'tau', None)} "
              f"D_tau={getattr(cert, 'd_tau', None)} oracle_match={oracle_ok} "
              f"({elapsed:.1f}s < 60s)")
    report(4, "expansion vs multiplicity checker", ok, detail)


@pytest.fixture(scope="module")
def sbr_run():
    m = preset_belykh(0.55, 2.0, 0.0)
    t0 = time.perf_counter()
    em = estimate_sbr(m, CURVE, n_points=10_000, n_steps=10_000,
                      burn_in=1_000, grid=(512, 100), seed=0)
    return m, em, time.perf_counter() - t0


def test_05_sbr_marginal_uniform(sbr_run):
    m, em, elapsed = sbr_run
    d = marginal(em, "x2")
    assert d.weights.size == 100
    l1 = float(np.abs(d.weights - 1.0 / 100).sum())
    ok = l1 < 0.02 and elapsed < 120.0
    report(5, "physical-measure expanding marginal", ok,
           f"L1(uniform, 100 bins)={l1:.4f} < 0.02 ({elapsed:.1f}s < 2min)")


def test_06_entropy_sandwich(sbr_run):
    m, _, _ = sbr_run
    t0 = time.perf_counter()
    est = entropy_estimate(m, CURVE, n_points=10_000, n_steps=10_000,
                           burn_in=1_000, max_len=10, seed=0)
    elapsed = time.perf_counter() - t0
    lo, hi = math.log(2) - 0.05, math.log(2) + 0.05
    ok = lo <= est.rate <= hi
    report(6, "entropy rate sandwich", ok,
           f"rate={est.rate:.5f} in [{lo:.3f}, {hi:.3f}] ({elapsed:.1f}s)")


def test_07_stable_coordinate_series():
    t0 = time.perf_counter()
    geometric_ok = True
    for t_lam in (0.3, 0.5, 0.61):
        x1, _ = stable_coordinate([t_lam, t_lam], [0.5, -0.5], 1.0,
                                  Word((1,) * 200, offset=-200), 200)
        geometric_ok &= abs(x1 - 0.5 / (1.0 - t_lam)) < 1e-12
    rng = np.random.default_rng(11)
    lams, us = [0.55, 0.61], [0.45, -0.45]
    bound_ok = True
    for _ in range(1_000):
        past = Word(tuple(rng.integers(1, 3, 500)), offset=-500)
        t = rng.uniform(0.4, 1.0)
        ref, _ = stable_coordinate(lams, us, t, past, 500)
        trunc = int(rng.integers(3, 120))
        approx, bound = stable_coordinate(lams, us, t, past, trunc)
        bound_ok &= abs(ref - approx) <= bound + 1e-15
    elapsed = time.perf_counter() - t0
    ok = geometric_ok and bound_ok
    report(7, "contracting-coordinate series", ok,
           f"geometric={geometric_ok} tail_bound_holds={bound_ok} ({elapsed:.1f}s)")


def test_08_invariance_gap_decreases():
    t0 = time.perf_counter()
    m = preset_belykh(0.55, 2.0, 0.0)
    wins = 0
    for seed in range(10):
        small = estimate_sbr(m, CURVE, n_points=2_000, n_steps=2_000,
                             burn_in=1_000, grid=(129, 129), seed=seed)
        big = estimate_sbr(m, CURVE, n_points=20_000, n_steps=2_000,
                           burn_in=1_000, grid=(129, 129), seed=seed + 1_000)
        wins += invariance_gap(m, big) < invariance_gap(m, small)
    elapsed = time.perf_counter() - t0
    ok = wins >= 9
    report(8, "invariance gap shrinks with budget", ok,
           f"decreased in {wins}/10 seeds ({elapsed:.1f}s)")


def test_09_correlation_decay():
    t0 = time.perf_counter()
    m = preset_belykh(0.55, 2.0, 0.0)
    x2 = Observable("x2")
    a = correlation_decay(m, x2, x2, orbit_length=10**7, max_lag=30, seed=0)
    b = correlation_decay(m, x2, x2, orbit_length=10**7, max_lag=30, seed=1)
    elapsed = time.perf_counter() - t0
    ok = (a.theta_fit < 1.0 and a.fit_quality >= 0.9
          and abs(a.theta_fit - b.theta_fit) <= 0.05 and elapsed < 120.0)
    report(9, "correlation decay fit", ok,
           f"theta={a.theta_fit:.4f} R2={a.fit_quality:.4f} "
           f"|theta0-theta1|={abs(a.theta_fit - b.theta_fit):.4f} "
           f"({elapsed:.1f}s < 2min)")


PIPELINES = {
    "gate": ["gate", "--preset", "belykh", "--lambda", "0.55"],
    "refine": ["refine", "--preset", "belykh", "--depth", "3"],
    "dtau": ["dtau", "--preset", "belykh", "--tau", "2"],
    "a2": ["a2", "--preset", "belykh", "--tau-max", "3"],
    "transversality": ["transversality", "--n", "3", "--C", "1"],
    "words": ["words", "--preset", "belykh", "--length", "5"],
    "sbr": ["sbr", "--preset", "belykh", "--lambda", "0.55", "--points", "500",
            "--steps", "1500", "--burn-in", "500", "--grid-nx", "32",
            "--grid-ny", "32"],
    "density": ["density", "--preset", "belykh", "--lambda", "0.55",
                "--points", "500", "--steps", "1500", "--burn-in", "500",
                "--grid-nx", "32", "--grid-ny", "32", "--axis", "x2"],
    "entropy": ["entropy", "--preset", "belykh", "--lambda", "0.55",
                "--points", "500", "--steps", "2000", "--burn-in", "500",
                "--max-len", "6"],
    "correlations": ["correlations", "--preset", "belykh", "--lambda", "0.55",
                     "--orbit-length", "200000", "--max-lag", "15"],
    "coordinate": ["coordinate", "--preset", "belykh", "--past", "1,2,1,2,2,1",
                   "--truncation", "6"],
}


def test_10_cli_determinism(tmp_path):
    t0 = time.perf_counter()
    mismatches = []
    for name, argv in PIPELINES.items():
        outs = []
        for run in (0, 1):
            out = tmp_path / f"{name}-{run}"
            code = cli_main([*argv, "--seed", "0", "--out", str(out)])
            assert code == 0, f"{name} run {run} exited {code}"
            outs.append(out)
        files0 = sorted(p.name for p in outs[0].iterdir())
        files1 = sorted(p.name for p in outs[1].iterdir())
        if files0 != files1:
            mismatches.append(f"{name}: file sets differ")
            continue
        for fname in files0:
            if fname == "manifest.json":
                continue  # records wall time, the one varying file
            if (outs[0] / fname).read_bytes() != (outs[1] / fname).read_bytes():
                mismatches.append(f"{name}/{fname}")
    elapsed = time.perf_counter() - t0
    ok = not mismatches
    report(10, "pipeline determinism under fixed seed", ok,
           f"pipelines={len(PIPELINES)} mismatches={mismatches or 'none'} "
           f"({elapsed:.1f}s)")
