"""Exact small-system references: enumerated DOS, level laws, dense updates.

These are the ground truths the estimators are validated against.  They favor
clarity over speed and are independent of the lazy bookkeeping used in
:mod:`flathist.estimator`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax

from . import _kernels
from .model import ENUMERATION_LIMIT, EnergyLadder, ModelSpec


class CapacityError(ValueError):
    """The requested state space exceeds the enumeration budget."""


@dataclass
class ExactDos:
    """Exact density of states: raw counts plus normalized log densities."""

    ladder: EnergyLadder
    counts: np.ndarray
    log_g: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        self.log_g = np.asarray(self.log_g, dtype=np.float64)
        n = len(self.ladder)
        if self.counts.shape != (n,) or self.log_g.shape != (n,):
            raise ValueError("counts and log_g must have one entry per ladder level")
        if np.any(self.counts <= 0):
            raise ValueError("every ladder level must have a positive count")
        total = float(np.exp(logsumexp(self.log_g)))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"log_g must be normalized: sum exp(log_g) = {total}")

    @property
    def energies(self) -> np.ndarray:
        return self.ladder.levels


def enumerate_dos(spec: ModelSpec, budget: int = ENUMERATION_LIMIT) -> ExactDos:
    """Exact per-level configuration counts by exhaustive Gray-code sweep.

    Raises :class:`CapacityError` when q**(L*L) exceeds ``budget``.
    """
    if spec.n_states > budget:
        raise CapacityError(
            f"{spec.kind.value} L={spec.L} q={spec.q} has {spec.n_states} states, "
            f"exceeding the enumeration budget of {budget}"
        )
    buckets = _kernels.enumerate_bucket_counts(spec.L, spec.q, spec.kind.code)
    nonzero = np.nonzero(buckets)[0]
    energies = nonzero - 2 * spec.n_sites
    counts = buckets[nonzero]
    log_g = np.log(counts) - np.log(counts.sum())
    return ExactDos(EnergyLadder(energies), counts, log_g)


def level_law(exact: ExactDos, u) -> np.ndarray:
    """Exact stationary level probabilities of the kernel targeting exp(-u).

    With a perfect estimate (u = log_g up to a constant) this is uniform.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.shape != exact.log_g.shape:
        raise ValueError("u must have one entry per ladder level")
    return softmax(exact.log_g - u)


def dense_awl_reference(visits, schedule, beta: float, n_levels: int) -> np.ndarray:
    """Momentum-accelerated update applied densely to every coordinate.

    Iterates the full O(N)-per-step recursion
    ``m <- beta*m + (1-beta)*onehot; u <- u + eta*sqrt(m); u <- u - mean(u)``
    over the visit/rate sequences and returns the final u.  Test oracle for
    the lazily settled estimator; with beta = 0 it reduces to plain
    flat-histogram bookkeeping.
    """
    visits = np.asarray(visits, dtype=np.int64)
    schedule = np.asarray(schedule, dtype=np.float64)
    if visits.shape != schedule.shape:
        raise ValueError("visits and schedule must have equal length")
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    m = np.zeros(n_levels)
    u = np.zeros(n_levels)
    for n, eta in zip(visits, schedule):
        m *= beta
        m[n] += 1.0 - beta
        u += eta * np.sqrt(m)
        u -= u.mean()
    return u
