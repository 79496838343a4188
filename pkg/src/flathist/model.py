"""Ising and q-state Potts models on the 2D periodic square lattice.

Spins are stored as integers in {0, ..., q-1}; the Ising case maps 0 -> +1
and 1 -> -1 at energy evaluation, so a single lattice type serves both
models.  Couplings are fixed at J = 1 with no external field.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels

# Exhaustive ladder discovery is used whenever q**(L*L) fits this many states.
ENUMERATION_LIMIT = 2**26


class LadderError(RuntimeError):
    """An energy appeared that is not on the model's admissible ladder."""


class ModelKind(enum.Enum):
    ISING = "ising"
    POTTS = "potts"

    @property
    def code(self) -> int:
        return _kernels.ISING if self is ModelKind.ISING else _kernels.POTTS


@dataclass(frozen=True)
class ModelSpec:
    """Model choice plus lattice side L and number of spin states q.

    L must be even: odd periodic lattices frustrate the checkerboard
    maximal-energy state and change the ladder structure.  q is forced to 2
    for Ising and defaults to 10 for Potts.
    """

    kind: ModelKind
    L: int
    q: int = 0

    def __post_init__(self):
        if self.L < 2 or self.L % 2 != 0:
            raise ValueError(f"lattice side L must be even and >= 2, got {self.L}")
        if self.kind is ModelKind.ISING:
            if self.q == 0:
                object.__setattr__(self, "q", 2)
            elif self.q != 2:
                raise ValueError("Ising model requires q = 2")
        else:
            if self.q == 0:
                object.__setattr__(self, "q", 10)
            elif self.q < 3:
                raise ValueError(f"Potts model requires q >= 3, got {self.q}")

    @property
    def n_sites(self) -> int:
        return self.L * self.L

    @property
    def n_states(self) -> int:
        return self.q ** self.n_sites


class SpinLattice:
    """Mutable spin configuration with an always-current cached total energy."""

    __slots__ = ("spec", "sites", "cached_energy")

    def __init__(self, spec: ModelSpec, sites):
        sites = np.ascontiguousarray(sites, dtype=np.int8)
        if sites.shape != (spec.n_sites,):
            raise ValueError(f"expected {spec.n_sites} sites, got shape {sites.shape}")
        if sites.min() < 0 or sites.max() >= spec.q:
            raise ValueError(f"site values must lie in [0, {spec.q})")
        self.spec = spec
        self.sites = sites
        self.cached_energy = int(_kernels.total_energy(sites, spec.L, spec.kind.code))

    @classmethod
    def random(cls, spec: ModelSpec, rng: np.random.Generator) -> "SpinLattice":
        """Uniformly random configuration, consuming L*L uniform doubles."""
        sites = (rng.random(spec.n_sites) * spec.q).astype(np.int8)
        return cls(spec, sites)

    @classmethod
    def uniform(cls, spec: ModelSpec, value: int = 0) -> "SpinLattice":
        if not 0 <= value < spec.q:
            raise ValueError(f"value {value} out of range [0, {spec.q})")
        return cls(spec, np.full(spec.n_sites, value, dtype=np.int8))

    def copy(self) -> "SpinLattice":
        return SpinLattice(self.spec, self.sites.copy())

    def set_site(self, site: int, value: int) -> None:
        """Assign one site, keeping the cached energy current."""
        self.cached_energy += delta_energy(self, site, value)
        self.sites[site] = value


def total_energy(lattice: SpinLattice) -> int:
    """Total energy recomputed from scratch over all 2*L*L bonds."""
    spec = lattice.spec
    return int(_kernels.total_energy(lattice.sites, spec.L, spec.kind.code))


def delta_energy(lattice: SpinLattice, site: int, new_value: int) -> int:
    """Energy change of setting ``site`` to ``new_value``, from 4 neighbors only."""
    spec = lattice.spec
    if not 0 <= site < spec.n_sites:
        raise ValueError(f"site {site} out of range [0, {spec.n_sites})")
    if not 0 <= new_value < spec.q:
        raise ValueError(f"new_value {new_value} out of range [0, {spec.q})")
    return int(_kernels.delta_energy(lattice.sites, spec.L, spec.kind.code, site, new_value))


class EnergyLadder:
    """Sorted admissible energy levels with O(1) energy -> index lookup."""

    __slots__ = ("levels", "e_min", "lookup", "_index")

    def __init__(self, levels):
        levels = np.asarray(sorted(int(e) for e in levels), dtype=np.int64)
        if levels.size < 2:
            raise ValueError("an energy ladder needs at least 2 levels")
        if np.any(np.diff(levels) <= 0):
            raise ValueError("energy levels must be strictly increasing")
        self.levels = levels
        self.e_min = int(levels[0])
        span = int(levels[-1]) - self.e_min + 1
        self.lookup = np.full(span, -1, dtype=np.int64)
        self.lookup[levels - self.e_min] = np.arange(levels.size)
        self._index = {int(e): i for i, e in enumerate(levels)}

    def __len__(self) -> int:
        return int(self.levels.size)

    def __contains__(self, energy: int) -> bool:
        return int(energy) in self._index

    def index_of(self, energy: int) -> int:
        try:
            return self._index[int(energy)]
        except KeyError:
            raise LadderError(f"energy {energy} is not on the ladder") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, EnergyLadder) and np.array_equal(self.levels, other.levels)

    def __repr__(self) -> str:
        return f"EnergyLadder({self.levels.tolist()})"


def ising_ladder(L: int) -> EnergyLadder:
    """Admissible Ising energies: -2L^2 + 4k with the two single-defect gaps removed.

    The levels +-(2L^2 - 4) adjacent to the ground and checkerboard states are
    unreachable on the periodic even-L lattice; the construction is verified
    against exhaustive enumeration at small L in the test suite.
    """
    if L < 2 or L % 2 != 0:
        raise ValueError(f"lattice side L must be even and >= 2, got {L}")
    top = 2 * L * L
    levels = [-top + 4 * k for k in range(L * L + 1)]
    levels.remove(-top + 4)
    levels.remove(top - 4)
    return EnergyLadder(levels)


class LadderDiscovery(NamedTuple):
    ladder: EnergyLadder
    exhaustive: bool


def discover_ladder(spec: ModelSpec, sampler_budget: int,
                    rng: np.random.Generator) -> LadderDiscovery:
    """Find the admissible energy set by enumeration or by exploratory sampling.

    Enumerates exhaustively when q**(L*L) <= 2**26; otherwise runs a
    fixed-rate flat-histogram walk for ``sampler_budget`` sweeps over dense
    integer-energy buckets and returns the energies it visited.  The
    ``exhaustive`` flag is False in the sampled case, where undiscovered
    levels may remain.
    """
    if sampler_budget < 1:
        raise ValueError("sampler_budget must be >= 1")
    kind = spec.kind.code
    e_min = -2 * spec.n_sites
    if spec.n_states <= ENUMERATION_LIMIT:
        counts = _kernels.enumerate_bucket_counts(spec.L, spec.q, kind)
        energies = np.nonzero(counts)[0] + e_min
        return LadderDiscovery(EnergyLadder(energies), True)
    span = 4 * spec.n_sites + 1 if spec.kind is ModelKind.ISING else 2 * spec.n_sites + 1
    visited = np.zeros(span, dtype=np.bool_)
    u_dense = np.zeros(span, dtype=np.float64)
    lattice = SpinLattice.random(spec, rng)
    _kernels.explore_energies(lattice.sites, spec.L, spec.q, kind,
                              sampler_budget * spec.n_sites, 1.0, rng,
                              visited, u_dense)
    energies = np.nonzero(visited)[0] + e_min
    warnings.warn(
        f"energy ladder for {spec.kind.value} L={spec.L} q={spec.q} was sampled, "
        "not enumerated; undiscovered levels may exist",
        stacklevel=2,
    )
    return LadderDiscovery(EnergyLadder(energies), False)
