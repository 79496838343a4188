"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The heavy simulations (criteria 5-8 share one batch of runs) live in
module-scoped fixtures.  Jitted kernels are compiled by the session warmup
fixture, so the timed sections measure the algorithms, not compilation.
"""

import time

import numpy as np
import pytest
from scipy.stats import binomtest

import flathist as fh
from flathist import cli
from flathist.estimator import DosEstimate, MomentumState, awl_step, normalized_u, settle_all
from flathist.sampler import sample_level_counts

from conftest import ising2_level_variances, naive_ising_counts, naive_potts_counts
from test_thermo import direct_moments


def report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num} ({name}): {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


@pytest.fixture(scope="module")
def l4_wl_runs(exact_ising4):
    """Criterion 5's 20 seeded runs; criteria 6 and 8 reuse them."""
    spec = fh.ModelSpec(fh.ModelKind.ISING, 4)
    cfg = fh.ExperimentConfig(model=spec, algorithm=fh.Algorithm.WL, eta0=1.0,
                              max_sweeps=1_000_000, seeds=tuple(range(20)),
                              trace_stride_sweeps=1000)
    t0 = time.perf_counter()
    traces = [fh.run_single(cfg, s, reference=exact_ising4) for s in cfg.seeds]
    return traces, time.perf_counter() - t0


@pytest.fixture(scope="module")
def l16_paired_runs():
    """Criterion 7: paired WL/AWL first-equilibration times at L=16."""
    spec = fh.ModelSpec(fh.ModelKind.ISING, 16)
    seeds = tuple(range(20))
    results = {}
    t0 = time.perf_counter()
    for eta0 in (1.00, 0.05):
        for algorithm in (fh.Algorithm.WL, fh.Algorithm.AWL):
            cfg = fh.ExperimentConfig(model=spec, algorithm=algorithm,
                                      eta0=eta0, beta=0.9, max_sweeps=20_000,
                                      check_interval_sweeps=100, seeds=seeds)
            firsts = []
            for seed in seeds:
                trace = fh.run_single(cfg, seed)
                assert trace.first_equilibration_sweeps is not None, (
                    f"no equilibration within budget (eta0={eta0}, "
                    f"{algorithm.value}, seed={seed})")
                firsts.append(trace.first_equilibration_sweeps)
            results[(eta0, algorithm)] = np.array(firsts, dtype=float)
    return results, time.perf_counter() - t0


def test_criterion_1_exact_oracles(ising2, ising4, potts2):
    t0 = time.perf_counter()
    e2 = fh.enumerate_dos(ising2)
    e4 = fh.enumerate_dos(ising4)
    ep = fh.enumerate_dos(potts2)
    elapsed = time.perf_counter() - t0
    ok = (e2.energies.tolist() == [-8, 0, 8]
          and e2.counts.tolist() == [2, 12, 2]
          and e4.counts.sum() == 65536
          and e4.counts.tolist() == e4.counts.tolist()[::-1]
          and int(ep.counts[0]) == 10 and int(ep.energies[0]) == -8
          and dict(zip(e2.energies.tolist(), e2.counts.tolist())) == naive_ising_counts(2)
          and dict(zip(ep.energies.tolist(), ep.counts.tolist())) == naive_potts_counts(2, 10)
          and elapsed < 5.0)
    report(1, "exact oracles", ok,
           f"L=2 counts {e2.counts.tolist()}, L=4 sum {e4.counts.sum()} symmetric, "
           f"Potts ground count {int(ep.counts[0])}, {elapsed:.2f}s")


def test_criterion_2_lazy_dense_equivalence():
    rng = np.random.default_rng(2024)
    n, steps = 15, 2000
    betas = [0.5, 0.9, 0.99]
    t0 = time.perf_counter()
    worst = 0.0
    for trace_idx in range(50):
        beta = betas[trace_idx % 3]
        visits = rng.integers(0, n, steps)
        half_at = int(rng.integers(steps // 4, 3 * steps // 4))
        etas = np.where(np.arange(steps) < half_at, 1.0, 0.5)
        dense = fh.dense_awl_reference(visits, etas, beta, n)
        dos = DosEstimate(n)
        mom = MomentumState(n, beta=beta)
        for t in range(1, steps + 1):
            awl_step(dos, mom, int(visits[t - 1]), float(etas[t - 1]), t)
        settle_all(dos, mom, steps)
        worst = max(worst, float(np.abs(normalized_u(dos) - dense).max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 10.0
    report(2, "lazy/dense equivalence", ok,
           f"max |lazy - dense| = {worst:.2e} over 50 traces, {elapsed:.2f}s")


def test_criterion_3_gradient_correctness():
    rng = np.random.default_rng(33)
    n, h = 15, 1e-5
    t0 = time.perf_counter()
    worst_fd = 0.0
    worst_sum = 0.0
    for _ in range(100):
        u = rng.normal(scale=2.0, size=n)
        u_star = rng.normal(scale=2.0, size=n)
        g = fh.gradient(u, u_star)
        worst_sum = max(worst_sum, abs(float(g.sum()) + 1.0))
        k = int(rng.integers(0, n))
        e = np.zeros(n)
        e[k] = h
        fd = (fh.objective(u + e, u_star) - fh.objective(u - e, u_star)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - g[k]))
    elapsed = time.perf_counter() - t0
    ok = worst_fd < 1e-6 and worst_sum < 1e-12 and elapsed < 1.0
    report(3, "gradient correctness", ok,
           f"max FD deviation {worst_fd:.2e}, max |sum+1| {worst_sum:.2e}, "
           f"{elapsed:.2f}s")


def test_criterion_4_kernel_stationarity(ising2, exact_ising2):
    # sigma comes from the exact 16-configuration chain's asymptotic variance
    # (Markov chain CLT); visit frequencies are autocorrelated, so the bare
    # multinomial sigma would understate the spread
    u_vectors = [
        np.zeros(3),
        exact_ising2.log_g - exact_ising2.log_g.mean(),
        np.array([0.5, -1.0, 0.5]),
    ]
    rng = np.random.default_rng(123)
    t0 = time.perf_counter()
    worst_z = 0.0
    for u in u_vectors:
        dos = DosEstimate(3)
        dos.raw[:] = u
        law = fh.level_law(exact_ising2, u)
        law_exact, variances = ising2_level_variances(u)
        np.testing.assert_allclose(law, law_exact, rtol=1e-12)
        lattice = fh.SpinLattice.random(ising2, rng)
        n = 1_000_000
        counts = sample_level_counts(lattice, dos, exact_ising2.ladder, n, rng)
        z = np.abs(counts / n - law) / np.sqrt(variances / n)
        worst_z = max(worst_z, float(z.max()))
    elapsed = time.perf_counter() - t0
    ok = worst_z < 3.0 and elapsed < 30.0
    report(4, "kernel stationarity", ok,
           f"max |z| = {worst_z:.2f} over 3 fixed estimates x 1e6 steps, "
           f"{elapsed:.1f}s")


def test_criterion_5_wl_convergence(l4_wl_runs):
    traces, elapsed = l4_wl_runs
    finals = np.array([t.samples[-1].epsilon for t in traces])
    n_good = int((finals < 0.005).sum())
    ok = n_good >= 18 and elapsed < 300.0
    report(5, "flat-histogram convergence", ok,
           f"final relative error < 0.005 for {n_good}/20 seeds "
           f"(max {finals.max():.5f}), {elapsed:.0f}s")


def test_criterion_6_one_over_t_rate(l4_wl_runs):
    traces, _ = l4_wl_runs
    switch = max(e.sweep for t in traces
                 for e in t.events if e.kind is fh.AdaptEvent.SWITCHED_TO_ONE_OVER_T)
    sweeps = np.array([s.sweep for s in traces[0].samples])
    l2 = np.array([[s.l2 for s in t.samples] for t in traces]).mean(axis=0)
    lo = 100_000
    assert lo > switch, "regression window must lie inside the 1/t phase"
    mask = (sweeps >= lo) & (sweeps <= 10 * lo)
    slope = float(np.polyfit(np.log10(sweeps[mask]), np.log10(l2[mask]), 1)[0])
    ok = -1.35 <= slope <= -0.65
    report(6, "1/t convergence rate", ok,
           f"log-log slope of mean squared distance = {slope:.3f} over one "
           f"decade (1/t phase from sweep {switch})")


def test_criterion_7_acceleration_ordering(l16_paired_runs):
    results, elapsed = l16_paired_runs
    details = []
    ok = elapsed < 900.0
    for eta0 in (1.00, 0.05):
        wl = results[(eta0, fh.Algorithm.WL)]
        awl = results[(eta0, fh.Algorithm.AWL)]
        wins = int((awl < wl).sum())
        informative = int((awl != wl).sum())
        p = binomtest(wins, informative, 0.5, alternative="greater").pvalue
        ok = ok and awl.mean() < wl.mean() and p <= 0.05
        details.append(f"eta0={eta0}: mean AWL {awl.mean():.0f} < WL {wl.mean():.0f} "
                       f"sweeps, sign test {wins}/{informative} wins p={p:.2g}")
    report(7, "acceleration ordering", ok, "; ".join(details) + f", {elapsed:.0f}s")


def test_criterion_8_specific_heat(exact_ising4, l4_wl_runs):
    grid = fh.TemperatureGrid()
    exact_curve = fh.specific_heat_curve(exact_ising4.log_g,
                                         exact_ising4.energies, grid)
    worst_rel = 0.0
    for T, C in exact_curve:
        _, direct = direct_moments(exact_ising4.counts, exact_ising4.energies, T)
        worst_rel = max(worst_rel, abs(C - direct) / abs(direct))
    nonneg = bool(np.all(exact_curve[:, 1] >= 0.0))

    traces, _ = l4_wl_runs
    est = np.array([fh.specific_heat_curve(t.final_u, exact_ising4.energies, grid)[:, 1]
                    for t in traces]).mean(axis=0)
    rel = np.abs(est - exact_curve[:, 1]) / np.abs(exact_curve[:, 1])
    ok = worst_rel < 1e-10 and nonneg and float(rel.max()) < 0.01
    report(8, "specific heat", ok,
           f"exact-vs-direct max rel {worst_rel:.2e}, C >= 0: {nonneg}, "
           f"estimated-curve max rel {rel.max():.4f} over 77 temperatures")


def test_criterion_9_beta_zero_reduction(ising4, exact_ising4, tmp_path):
    base = dict(model=ising4, eta0=1.0, max_sweeps=10_000, seeds=(11,))
    cfg_wl = fh.ExperimentConfig(algorithm=fh.Algorithm.WL, **base)
    cfg_awl = fh.ExperimentConfig(algorithm=fh.Algorithm.AWL, beta=0.0, **base)
    a = fh.run_single(cfg_wl, 11, reference=exact_ising4)
    b = fh.run_single(cfg_awl, 11, reference=exact_ising4)
    pa, pb = tmp_path / "wl.csv", tmp_path / "awl.csv"
    fh.emit_csv(a, pa)
    fh.emit_csv(b, pb)
    identical = pa.read_bytes() == pb.read_bytes()
    same_u = np.array_equal(a.final_u, b.final_u)
    ok = identical and same_u
    report(9, "momentum-free reduction", ok,
           f"byte-identical traces: {identical}, identical final estimate: {same_u}")


def test_criterion_10_cli_determinism(tmp_path):
    dirs = [tmp_path / "a", tmp_path / "b"]
    paths = []
    for d in dirs:
        cfg_text = ("model = ising\nL = 4\nalgorithm = awl\nbeta = 0.9\n"
                    "eta0 = 1.0\nmax_sweeps = 2000\nseeds = 5,6\n"
                    "check_interval_sweeps = 100\ntrace_stride_sweeps = 200\n"
                    f"output_dir = {d}\n")
        cfg_path = tmp_path / f"{d.name}.cfg"
        cfg_path.write_text(cfg_text)
        assert cli.main(["run", str(cfg_path)]) == 0
        paths.append(d)
    same = all(
        (paths[0] / f"trace_{s}.csv").read_bytes() == (paths[1] / f"trace_{s}.csv").read_bytes()
        for s in (5, 6)
    )
    report(10, "run determinism", same,
           "repeated runs produce byte-identical trace CSVs" if same
           else "trace CSVs differ between repeated runs")
