"""Flat-histogram Monte Carlo estimation of the density of states.

Implements the classic flat-histogram update and a momentum-accelerated
variant for 2D Ising and q-state Potts lattices, with exact small-system
oracles, thermodynamic observables, and a seeded experiment runner.
"""

from .estimator import (AdaptEvent, DosEstimate, MomentumState, SchedulePhase,
                        ScheduleState, awl_step, gradient, maybe_adapt,
                        normalized_u, objective, record_visit, settle,
                        settle_all, wl_step)
from .model import (EnergyLadder, LadderError, ModelKind, ModelSpec,
                    SpinLattice, delta_energy, discover_ladder, ising_ladder,
                    total_energy)
from .oracle import CapacityError, ExactDos, dense_awl_reference, enumerate_dos, level_law
from .runner import (Algorithm, ConfigError, ExperimentConfig, RunTrace,
                     Summary, emit_csv, load_dos_csv, parse_config,
                     run_replicates, run_single, serialize_config,
                     specific_heat_curve, write_dos_csv)
from .sampler import StepOutcome, metropolis_step, propose, sample_level_counts
from .thermo import (AnchorMode, TemperatureGrid, epsilon_error,
                     internal_energy, l2_error, specific_heat)

__version__ = "0.1.0"

__all__ = [
    "AdaptEvent", "Algorithm", "AnchorMode", "CapacityError", "ConfigError",
    "DosEstimate", "EnergyLadder", "ExactDos", "ExperimentConfig",
    "LadderError", "ModelKind", "ModelSpec", "MomentumState", "RunTrace",
    "SchedulePhase", "ScheduleState", "SpinLattice", "StepOutcome", "Summary",
    "TemperatureGrid", "awl_step", "delta_energy", "dense_awl_reference",
    "discover_ladder", "emit_csv", "enumerate_dos", "epsilon_error",
    "gradient", "internal_energy", "ising_ladder", "l2_error", "level_law",
    "load_dos_csv", "maybe_adapt", "metropolis_step", "normalized_u",
    "objective", "parse_config", "propose", "record_visit", "run_replicates",
    "run_single", "sample_level_counts", "serialize_config", "settle",
    "settle_all", "specific_heat", "specific_heat_curve", "total_energy",
    "wl_step", "write_dos_csv",
]
