import itertools

import numpy as np
import pytest

import flathist as fh


def naive_bonds(L):
    """Independent bond list: right and down neighbor of every site, once each."""
    bonds = []
    for i in range(L):
        for j in range(L):
            s = i * L + j
            bonds.append((s, i * L + (j + 1) % L))
            bonds.append((s, ((i + 1) % L) * L + j))
    return bonds


def naive_ising_energy(cfg, bonds):
    return -sum((2 * cfg[a] - 1) * (2 * cfg[b] - 1) for a, b in bonds)


def naive_potts_energy(cfg, bonds):
    return -sum(1 for a, b in bonds if cfg[a] == cfg[b])


def naive_ising_counts(L):
    """Exhaustive per-energy counts via plain product iteration (test oracle)."""
    bonds = naive_bonds(L)
    counts = {}
    for cfg in itertools.product((0, 1), repeat=L * L):
        e = naive_ising_energy(cfg, bonds)
        counts[e] = counts.get(e, 0) + 1
    return counts


def naive_potts_counts(L, q):
    bonds = naive_bonds(L)
    counts = {}
    for cfg in itertools.product(range(q), repeat=L * L):
        e = naive_potts_energy(cfg, bonds)
        counts[e] = counts.get(e, 0) + 1
    return counts


def ising2_level_variances(u, levels=(-8, 0, 8)):
    """Exact asymptotic variances of level-visit frequencies on the 2x2 chain.

    Builds the full 16-configuration Metropolis transition matrix for the
    given log-DOS vector and solves the Poisson equation, giving the Markov
    chain CLT variance for each level indicator.  Visit frequencies are
    autocorrelated, so this, not the bare multinomial variance, is the right
    yardstick for a 3-sigma check.
    """
    configs = list(itertools.product((0, 1), repeat=4))
    bonds = naive_bonds(2)
    index = {c: i for i, c in enumerate(configs)}
    level_of = {e: n for n, e in enumerate(levels)}
    config_level = np.array([level_of[naive_ising_energy(c, bonds)] for c in configs])
    u = np.asarray(u, dtype=float)
    P = np.zeros((16, 16))
    for i, c in enumerate(configs):
        stay = 1.0
        for site in range(4):
            flipped = list(c)
            flipped[site] = 1 - flipped[site]
            j = index[tuple(flipped)]
            acc = min(1.0, np.exp(u[config_level[i]] - u[config_level[j]]))
            P[i, j] = acc / 4.0
            stay -= acc / 4.0
        P[i, i] = stay
    weights = np.exp(-u[config_level])
    pi = weights / weights.sum()
    assert np.abs(pi @ P - pi).max() < 1e-14
    law = np.array([pi[config_level == n].sum() for n in range(len(levels))])
    variances = np.empty(len(levels))
    ones_pi = np.outer(np.ones(16), pi)
    for n in range(len(levels)):
        f = (config_level == n).astype(float)
        f_c = f - law[n]
        y = np.linalg.solve(np.eye(16) - P + ones_pi, f_c)
        variances[n] = float(pi @ (f_c * (2.0 * y - f_c)))
    return law, variances


@pytest.fixture(scope="session")
def ising2():
    return fh.ModelSpec(fh.ModelKind.ISING, 2)


@pytest.fixture(scope="session")
def ising4():
    return fh.ModelSpec(fh.ModelKind.ISING, 4)


@pytest.fixture(scope="session")
def potts2():
    return fh.ModelSpec(fh.ModelKind.POTTS, 2)


@pytest.fixture(scope="session")
def exact_ising2(ising2):
    return fh.enumerate_dos(ising2)


@pytest.fixture(scope="session")
def exact_ising4(ising4):
    return fh.enumerate_dos(ising4)


@pytest.fixture(scope="session")
def exact_potts2(potts2):
    return fh.enumerate_dos(potts2)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(ising2):
    """Compile the jitted kernels once so timed tests measure the algorithms."""
    cfg = fh.ExperimentConfig(model=ising2, algorithm=fh.Algorithm.AWL, eta0=1.0,
                              max_sweeps=5, seeds=(0,))
    fh.run_single(cfg, 0, reference=fh.enumerate_dos(ising2))
    cfg_wl = fh.ExperimentConfig(model=ising2, algorithm=fh.Algorithm.WL, eta0=1.0,
                                 max_sweeps=5, seeds=(0,))
    fh.run_single(cfg_wl, 0)
    lat = fh.SpinLattice.uniform(ising2)
    fh.sample_level_counts(lat, fh.DosEstimate(3), fh.ising_ladder(2), 10,
                           np.random.default_rng(0))
