"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""
from collections import Counter

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from zapmmv import (
    PenaltyParams,
    StopReason,
    ZapConfig,
    approx_penalty,
    build_projector,
    exhaustive_solve,
    f_alpha_scalar,
    generate,
    penalty_gradient,
    project,
    relative_error,
    somp_solve,
    spark,
    uniqueness_check,
    zap_solve,
)
from zapmmv.cli import main
from zapmmv.experiments import ExperimentSpec, run_bench, run_sweep_snr

DEFAULTS = ZapConfig(alpha=1.0, kappa0=0.1, eta=0.1, q=11, kappa_min=1e-6, t_max=500)
# matching to 1e-6 needs the step-size floor below the ~1.4*kappa_min residue left on off-support rows
ORACLE_CFG = ZapConfig(kappa_min=1e-9)

N, M, L = 200, 50, 10
SNRS = (10.0, 20.0, 30.0, 40.0, 50.0)


def record(number, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    return passed


@pytest.fixture(scope="module")
def runs():
    """Every solver run the acceptance criteria rely on, keyed by experiment."""
    out = {"recovery": {}, "oracle": [], "noise": {}}
    for k in (10, 45):
        results = []
        for trial in range(200):
            p = generate(N, M, L, k, seed=trial)
            results.append((p, zap_solve(p.a, p.y, DEFAULTS)))
        out["recovery"][k] = results
    for trial in range(100):
        p = generate(8, 4, 2, 1, seed=trial)
        out["oracle"].append((p, ORACLE_CFG, zap_solve(p.a, p.y, ORACLE_CFG)))
    for snr in SNRS:
        results = []
        for trial in range(100):
            p = generate(N, M, L, 10, snr, seed=trial)
            results.append((p, zap_solve(p.a, p.y, DEFAULTS)))
        out["noise"][snr] = results
    return out


def all_results(runs):
    for k, items in runs["recovery"].items():
        for p, res in items:
            yield DEFAULTS, res
    for p, cfg, res in runs["oracle"]:
        yield cfg, res
    for items in runs["noise"].values():
        for p, res in items:
            yield DEFAULTS, res


def test_1_noiseless_recovery(runs):
    prob = {}
    for k, items in runs["recovery"].items():
        prob[k] = np.mean([relative_error(p.x_true, r.solution) < 1e-3 for p, r in items])
    ok = prob[10] >= 0.98 and prob[45] < prob[10]
    assert record(1, ok, f"P(exact | K=10) = {prob[10]:.3f} (>= 0.98), P(exact | K=45) = {prob[45]:.3f} (< K=10)")


def test_2_oracle_equivalence(runs):
    eligible = zap_hits = somp_hits = 0
    for p, cfg, res in runs["oracle"]:
        if not uniqueness_check(p.a, p.y, 1).unique:
            continue
        eligible += 1
        ref = exhaustive_solve(p.a, p.y, 1)
        zap_hits += relative_error(ref, res.solution) < 1e-6
        ref_support = list(np.flatnonzero(np.linalg.norm(ref, axis=1) > 0))
        somp_hits += sorted(somp_solve(p.a, p.y, 1).support) == ref_support
    ok = eligible == 100 and zap_hits >= 95 and somp_hits >= 90
    detail = f"{eligible} instances within bound; zap matches {zap_hits} (>= 95), somp support {somp_hits} (>= 90)"
    assert record(2, ok, detail)


def test_3_projection_feasibility(runs):
    worst = max(max(res.feasibility_trace) for _, res in all_results(runs))
    assert record(3, worst <= 1e-8, f"max relative residual over all iterations = {worst:.2e} (<= 1e-8)")


def test_4_gradient_correctness():
    gen = np.random.default_rng(2024)
    p = PenaltyParams(1.0)
    h, delta = 1e-6, 1e-3
    worst = 0.0
    for _ in range(50):
        n, l = gen.integers(2, 8), gen.integers(1, 5)
        directions = gen.standard_normal((n, l))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        x = directions * gen.uniform(delta, 1.0 / p.alpha - delta, size=n)[:, None]
        analytic = penalty_gradient(x, p)
        for idx in np.ndindex(*x.shape):
            up, down = x.copy(), x.copy()
            up[idx] += h
            down[idx] -= h
            fd = (approx_penalty(up, p) - approx_penalty(down, p)) / (2 * h)
            worst = max(worst, abs(fd - analytic[idx]) / max(abs(analytic[idx]), 1e-12))
    assert record(4, worst <= 1e-5, f"max per-entry relative deviation from central differences = {worst:.2e} (<= 1e-5)")


def test_5_step_size_discipline(runs):
    violations = 0
    total = 0
    for cfg, res in all_results(runs):
        total += 1
        ks = res.kappa_trace
        bad = any(
            ks[n] != ks[n - 1] and (n % cfg.q != 0 or ks[n] != ks[n - 1] * cfg.eta)
            for n in range(1, len(ks))
        )
        if res.stop_reason is StopReason.STEP_SIZE_FLOOR:
            bad |= not ks[-1] < cfg.kappa_min
        else:
            bad |= res.iterations_run != cfg.t_max
        violations += bad
    assert record(5, violations == 0, f"{violations} of {total} traces violate the step-size rules")


def test_6_noise_trend(runs):
    msd = [np.mean([np.sum((p.x_true - r.solution) ** 2) for p, r in runs["noise"][snr]]) for snr in SNRS]
    harness = run_sweep_snr(ExperimentSpec(n=N, m=M, l=L, k_values=(10,), snr_values=SNRS, trials=100, solvers=("zap",)))
    consistent = np.allclose([row["mean_msd"] for row in harness], msd, rtol=1e-12)
    ok = all(a > b for a, b in zip(msd, msd[1:])) and consistent
    shown = ", ".join(f"{s:g}dB {10 * np.log10(v):.1f}" for s, v in zip(SNRS, msd))
    assert record(6, ok, f"mean MSD (dB) strictly decreasing: {shown}")


def test_7_timing_ordering():
    rows = run_bench(ExperimentSpec(kind="bench", trials=5, rungs=((1000, 250, 50, 10),)))
    t = {row["solver"]: row["mean_time_s"] for row in rows}
    assert record(7, t["somp"] < t["zap"], f"mean time somp {t['somp']:.3f}s < zap {t['zap']:.3f}s at (1000,250,50,10)")


def test_8_determinism(tmp_path):
    commands = {
        "sweep-k": ["--n", "100", "--m", "30", "--l", "5", "--k-min", "2", "--k-max", "20", "--k-step", "6",
                    "--trials", "10", "--seed", "77", "--no-timing"],
        "sweep-snr": ["--n", "100", "--m", "30", "--l", "5", "--k", "5", "--trials", "10", "--seed", "77",
                      "--noiseless-control"],
        "oracle-check": ["--trials", "20", "--seed", "77"],
    }
    identical = []
    for name, args in commands.items():
        outputs = []
        for rep in range(2):
            path = tmp_path / f"{name}-{rep}.csv"
            assert main([name, *args, "--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        identical.append(outputs[0] == outputs[1])
    assert record(8, all(identical), f"byte-identical reruns: {dict(zip(commands, identical))}")


def test_9_property_suite():
    checks = {}
    w = np.linspace(-5, 5, 20001)
    for alpha in (0.3, 1.0, 4.0):
        p = PenaltyParams(alpha)
        f = f_alpha_scalar(w, p)
        sat = np.abs(w) >= 1 / alpha
        checks.setdefault("F bounds", True)
        checks["F bounds"] &= bool(np.all((f >= 0) & (f <= 1)))
        checks.setdefault("F saturation", True)
        checks["F saturation"] &= bool(np.all(f[sat] == 1.0))

    gen = np.random.default_rng(9)
    x = gen.standard_normal((12, 3)) * 0.4
    x[[1, 5, 9]] = 0
    checks["zero-row gradient"] = bool(np.all(penalty_gradient(x, PenaltyParams(1.0))[[1, 5, 9]] == 0))

    a = gen.standard_normal((6, 15))
    proj = build_projector(a)
    y = gen.standard_normal((6, 3))
    once = project(proj, gen.standard_normal((15, 3)), y)
    checks["projection idempotence"] = bool(np.max(np.abs(project(proj, once, y) - once)) <= 1e-10)

    checks["spark <= M+1"] = all(spark(gen.standard_normal((4, 9))) <= 5 for _ in range(5))

    counts = Counter()
    for seed in range(10_000):
        counts.update(generate(10, 2, 1, 2, seed=seed).support_true)
    freqs = np.array([counts[i] for i in range(10)]) / 10_000
    checks["support uniformity"] = bool(np.all(np.abs(freqs - 0.2) <= 0.02))

    failed = [name for name, ok in checks.items() if not ok]
    assert record(9, not failed, f"{len(checks) - len(failed)}/{len(checks)} properties hold" + (f"; failed {failed}" if failed else ""))
