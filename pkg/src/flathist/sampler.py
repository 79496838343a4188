"""Metropolis kernel targeting the reciprocal of the current DOS estimate.

One iteration is one single-site proposal; one MC sweep is L*L iterations.
With a flat estimate every proposal is accepted and the chain is a plain
random walk over configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .estimator import DosEstimate
from .model import EnergyLadder, LadderError, ModelKind, SpinLattice


@dataclass(frozen=True)
class StepOutcome:
    """Level bookkeeping for one Metropolis step.

    ``visited_level`` is the ladder index of the post-step configuration; on
    rejection it equals the pre-step level.
    """

    visited_level: int
    accepted: bool
    proposed_level: int


def propose(lattice: SpinLattice, rng: np.random.Generator) -> tuple[int, int]:
    """Draw a single-site proposal: uniform site, flipped spin (Ising) or
    uniformly resampled color (Potts, current color allowed)."""
    spec = lattice.spec
    site = int(rng.random() * spec.n_sites)
    if spec.kind is ModelKind.ISING:
        new_value = 1 - int(lattice.sites[site])
    else:
        new_value = int(rng.random() * spec.q)
    return site, new_value


def metropolis_step(lattice: SpinLattice, u: DosEstimate, ladder: EnergyLadder,
                    rng: np.random.Generator) -> StepOutcome:
    """One proposal plus log-space accept/reject; mutates the lattice on acceptance.

    Accepts with probability min(1, exp(u_old - u_new)) where u_old/u_new are
    the estimate's entries at the pre/post-proposal levels.  Raises
    :class:`~flathist.model.LadderError` if the proposed configuration's
    energy is not on the ladder.
    """
    spec = lattice.spec
    if len(ladder) != u.n:
        raise ValueError("estimate dimension does not match the ladder")
    energy, visited, proposed, accepted, ok = _kernels.metropolis_step(
        lattice.sites, spec.L, spec.q, spec.kind.code, lattice.cached_energy,
        u.raw, ladder.lookup, ladder.e_min, rng
    )
    if not ok:
        raise LadderError(
            f"proposed configuration has energy {energy}, which is not on the "
            "ladder; for sampled (non-exhaustive) ladders rerun discovery with "
            "a larger budget"
        )
    lattice.cached_energy = int(energy)
    return StepOutcome(int(visited), bool(accepted), int(proposed))


def sample_level_counts(lattice: SpinLattice, u: DosEstimate, ladder: EnergyLadder,
                        n_steps: int, rng: np.random.Generator) -> np.ndarray:
    """Run ``n_steps`` Metropolis steps at fixed estimate; return per-level visit counts."""
    spec = lattice.spec
    counts, energy, ok = _kernels.sample_level_counts(
        lattice.sites, spec.L, spec.q, spec.kind.code, lattice.cached_energy,
        u.raw, ladder.lookup, ladder.e_min, n_steps, rng
    )
    if not ok:
        raise LadderError(f"reached off-ladder energy {energy} during sampling")
    lattice.cached_energy = int(energy)
    return counts
