"""Momentum acceleration of the transient phase.

The accelerated update keeps pushing recently visited levels for a few more
iterations (an exponentially decaying momentum), which drives the walker
into unexplored energies faster.  This script pairs plain and accelerated
runs seed-by-seed on a 16x16 Ising lattice and compares the first
equilibration time: the first moment every energy level has been visited.
"""

import numpy as np

import flathist as fh

spec = fh.ModelSpec(fh.ModelKind.ISING, 16)
seeds = tuple(range(10))

print(f"{len(fh.ising_ladder(16))} energy levels on the 16x16 lattice")
print(f"{'rate':>6} {'algorithm':>10} {'mean sweeps':>12} {'std':>8}   per-seed")

for eta0 in (1.0, 0.05):
    firsts = {}
    for algorithm in (fh.Algorithm.WL, fh.Algorithm.AWL):
        config = fh.ExperimentConfig(
            model=spec,
            algorithm=algorithm,
            eta0=eta0,
            beta=0.9,
            max_sweeps=20_000,
            check_interval_sweeps=100,
            seeds=seeds,
        )
        summary = fh.run_replicates(config)
        firsts[algorithm] = [t.first_equilibration_sweeps for t in summary.traces]
        print(f"{eta0:>6} {algorithm.value:>10} "
              f"{summary.mean_first_equilibration_sweeps:>12.0f} "
              f"{summary.std_first_equilibration_sweeps:>8.0f}   {firsts[algorithm]}")
    wl = np.array(firsts[fh.Algorithm.WL])
    awl = np.array(firsts[fh.Algorithm.AWL])
    print(f"       paired speedup: {np.mean(wl / awl):.2f}x on average, "
          f"accelerated wins {(awl < wl).sum()}/{len(seeds)} pairs\n")
