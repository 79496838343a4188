"""Experiment orchestration: configs, seeded replicates, traces, CSV artifacts.

Single-walker runs execute in one fused jitted loop; multi-walker runs (a
variance-reduction option averaging the walkers' visit indicators) step each
walker round-robin in Python using the same jitted primitives, so both paths
produce identical results where they overlap.  Runs are bit-reproducible for
a fixed config and seed; walker w draws from its own stream seeded
``seed XOR w``.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import logsumexp

from . import _kernels, estimator, sampler
from .estimator import (AdaptEvent, DosEstimate, MomentumState, ScheduleState,
                        SchedulePhase, RECOMPUTE_INTERVAL)
from .model import (EnergyLadder, LadderError, ModelKind, ModelSpec,
                    SpinLattice, discover_ladder, ising_ladder)
from .oracle import ExactDos
from .thermo import AnchorMode, TemperatureGrid, specific_heat


class ConfigError(ValueError):
    """A config file or config value is invalid."""


class Algorithm(enum.Enum):
    WL = "wl"
    AWL = "awl"

    @property
    def code(self) -> int:
        return _kernels.ALG_WL if self is Algorithm.WL else _kernels.ALG_AWL


# Sweep budget for sampled (non-enumerable) ladder discovery.
DISCOVERY_SWEEPS = 50_000


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec
    algorithm: Algorithm
    eta0: float
    max_sweeps: int
    seeds: tuple[int, ...]
    beta: float = 0.9
    check_interval_sweeps: int = 1000
    eta_min: float = 1e-8
    walkers: int = 1
    reference_dos: Optional[str] = None
    anchor: AnchorMode = AnchorMode.SUM_TO_ONE
    temperature_grid: TemperatureGrid = TemperatureGrid()
    trace_stride_sweeps: int = 100
    output_dir: str = "out"

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("seeds must be nonempty")
        if any(s < 0 for s in self.seeds):
            raise ConfigError("seeds must be nonnegative")
        if self.eta0 <= self.eta_min or self.eta_min <= 0.0:
            raise ConfigError("need eta0 > eta_min > 0")
        if self.max_sweeps < 0:
            raise ConfigError("max_sweeps must be >= 0")
        if self.check_interval_sweeps < 1:
            raise ConfigError("check_interval_sweeps must be >= 1")
        if self.trace_stride_sweeps < 1:
            raise ConfigError("trace_stride_sweeps must be >= 1")
        if self.walkers < 1:
            raise ConfigError("walkers must be >= 1")
        if not 0.0 <= self.beta < 1.0:
            raise ConfigError(f"beta must lie in [0, 1), got {self.beta}")


class TraceSample(NamedTuple):
    sweep: int
    eta: float
    epsilon: Optional[float]
    l2: Optional[float]


class TraceEvent(NamedTuple):
    sweep: int
    kind: AdaptEvent
    eta: float


@dataclass(eq=False)
class RunTrace:
    """Per-run record: schedule events, error samples, and the final estimate."""

    seed: int
    samples: list[TraceSample]
    events: list[TraceEvent]
    final_u: np.ndarray
    wall_time_seconds: float
    total_iterations: int
    stopped: bool

    @property
    def equilibration_events(self) -> list[tuple[int, float]]:
        """Rate halvings as (sweep, new eta), in order."""
        return [(e.sweep, e.eta) for e in self.events if e.kind is AdaptEvent.HALVED]

    @property
    def first_equilibration_sweeps(self) -> Optional[int]:
        ev = self.equilibration_events
        return ev[0][0] if ev else None

    @property
    def epsilon_samples(self) -> list[tuple[int, float]]:
        return [(s.sweep, s.epsilon) for s in self.samples if s.epsilon is not None]

    @property
    def l2_samples(self) -> list[tuple[int, float]]:
        return [(s.sweep, s.l2) for s in self.samples if s.l2 is not None]


@dataclass(eq=False)
class Summary:
    """Aggregates over seeded replicates of one configuration."""

    traces: list[RunTrace]
    n_runs: int
    n_equilibrated: int
    mean_first_equilibration_sweeps: Optional[float]
    std_first_equilibration_sweeps: Optional[float]
    mean_wall_time_seconds: float
    std_wall_time_seconds: float
    epsilon_trajectory: list[tuple[int, float]]


class _Reference(NamedTuple):
    u_star: np.ndarray      # zero-mean log-DOS, for squared-distance samples
    eps_ref: np.ndarray     # anchored log-DOS, denominator of the relative metric


# ---------------------------------------------------------------------------
# config file format
# ---------------------------------------------------------------------------

_CONFIG_KEYS = (
    "model", "L", "q", "algorithm", "beta", "eta0", "check_interval_sweeps",
    "max_sweeps", "eta_min", "seeds", "walkers", "reference_dos", "anchor",
    "t_start", "t_stop", "t_step", "trace_stride_sweeps", "output_dir",
)
_REQUIRED_KEYS = ("model", "L", "algorithm", "eta0", "max_sweeps", "seeds")


def parse_config(text: str) -> ExperimentConfig:
    """Parse the line-oriented ``key = value`` format (# starts a comment)."""
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for '{key}'")
        raw[key] = (value, lineno)

    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    def take(key, convert, default=None):
        if key not in raw:
            return default
        value, lineno = raw[key]
        try:
            return convert(value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"line {lineno}: bad value for '{key}': {exc}") from None

    def to_kind(v):
        return ModelKind(v.lower())

    def to_algorithm(v):
        return Algorithm(v.lower())

    def to_anchor(v):
        return AnchorMode(v.lower())

    def to_seeds(v):
        return tuple(int(s.strip()) for s in v.split(","))

    kind = take("model", to_kind)
    L = take("L", int)
    q = take("q", int, 0)
    try:
        spec = ModelSpec(kind, L, q)
    except ValueError as exc:
        lineno = raw["L"][1] if "L" in raw else raw["model"][1]
        raise ConfigError(f"line {lineno}: {exc}") from None

    grid_args = {
        "start": take("t_start", float, 0.4),
        "stop": take("t_stop", float, 8.0),
        "step": take("t_step", float, 0.1),
    }
    try:
        grid = TemperatureGrid(**grid_args)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    return ExperimentConfig(
        model=spec,
        algorithm=take("algorithm", to_algorithm),
        eta0=take("eta0", float),
        max_sweeps=take("max_sweeps", int),
        seeds=take("seeds", to_seeds),
        beta=take("beta", float, 0.9),
        check_interval_sweeps=take("check_interval_sweeps", int, 1000),
        eta_min=take("eta_min", float, 1e-8),
        walkers=take("walkers", int, 1),
        reference_dos=take("reference_dos", str),
        anchor=take("anchor", to_anchor, AnchorMode.SUM_TO_ONE),
        temperature_grid=grid,
        trace_stride_sweeps=take("trace_stride_sweeps", int, 100),
        output_dir=take("output_dir", str, "out"),
    )


def serialize_config(config: ExperimentConfig) -> str:
    """Emit a config file text that parses back to an equal config."""
    lines = [
        f"model = {config.model.kind.value}",
        f"L = {config.model.L}",
        f"q = {config.model.q}",
        f"algorithm = {config.algorithm.value}",
        f"beta = {config.beta!r}",
        f"eta0 = {config.eta0!r}",
        f"check_interval_sweeps = {config.check_interval_sweeps}",
        f"max_sweeps = {config.max_sweeps}",
        f"eta_min = {config.eta_min!r}",
        "seeds = " + ",".join(str(s) for s in config.seeds),
        f"walkers = {config.walkers}",
    ]
    if config.reference_dos is not None:
        lines.append(f"reference_dos = {config.reference_dos}")
    lines += [
        f"anchor = {config.anchor.value}",
        f"t_start = {config.temperature_grid.start!r}",
        f"t_stop = {config.temperature_grid.stop!r}",
        f"t_step = {config.temperature_grid.step!r}",
        f"trace_stride_sweeps = {config.trace_stride_sweeps}",
        f"output_dir = {config.output_dir}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# running experiments
# ---------------------------------------------------------------------------

def build_ladder(config: ExperimentConfig) -> EnergyLadder:
    """Ladder for the configured model: closed form for Ising, discovery for Potts.

    Discovery randomness is seeded from the config's first seed only, so all
    replicates of one config share one ladder.
    """
    spec = config.model
    if spec.kind is ModelKind.ISING:
        return ising_ladder(spec.L)
    rng = np.random.default_rng([config.seeds[0], 0xD15C0])
    return discover_ladder(spec, DISCOVERY_SWEEPS, rng).ladder


def _prepare_reference(config: ExperimentConfig, ladder: EnergyLadder,
                       reference) -> Optional[_Reference]:
    """Align a reference log-DOS with the run ladder and pre-anchor it."""
    if reference is None:
        if config.reference_dos is None:
            return None
        energies, log_g = load_dos_csv(config.reference_dos)
    elif isinstance(reference, ExactDos):
        energies, log_g = reference.energies, reference.log_g
    else:
        energies, log_g = reference
        energies = np.asarray(energies, dtype=np.int64)
        log_g = np.asarray(log_g, dtype=np.float64)
    if not np.array_equal(energies, ladder.levels):
        raise ConfigError(
            "reference DOS energies do not match the run ladder: "
            f"{energies.tolist()} vs {ladder.levels.tolist()}"
        )
    u_star = log_g - log_g.mean()
    if config.anchor is AnchorMode.SUM_TO_ONE:
        eps_ref = log_g - float(logsumexp(log_g))
    else:
        eps_ref = log_g.copy()
    bad = np.nonzero(np.abs(eps_ref) <= 1e-12)[0]
    if bad.size:
        raise ConfigError(
            f"reference log density is zero at level {int(ladder.levels[bad[0]])}; "
            "the relative error metric is undefined there"
        )
    return _Reference(u_star, eps_ref)


_EVENT_BY_CODE = {
    _kernels.EVENT_HALVED: AdaptEvent.HALVED,
    _kernels.EVENT_ONE_OVER_T: AdaptEvent.SWITCHED_TO_ONE_OVER_T,
    _kernels.EVENT_STOP: AdaptEvent.STOP,
}


def run_single(config: ExperimentConfig, seed: int, *, reference=None,
               force_python: bool = False, _ladder: Optional[EnergyLadder] = None,
               _prepared: Optional[_Reference] = None) -> RunTrace:
    """One seeded run: sample, update, histogram, adapt until max_sweeps or stop.

    ``reference`` may be an :class:`~flathist.oracle.ExactDos` or an
    ``(energies, log_g)`` pair; it enables the per-stride error samples.
    Results are bit-reproducible for fixed config and seed.
    """
    ladder = _ladder if _ladder is not None else build_ladder(config)
    ref = _prepared if _prepared is not None else _prepare_reference(config, ladder, reference)
    if config.walkers > 1 or force_python:
        return _run_python(config, seed, ladder, ref)
    return _run_kernel(config, seed, ladder, ref)


def _run_kernel(config: ExperimentConfig, seed: int, ladder: EnergyLadder,
                ref: Optional[_Reference]) -> RunTrace:
    spec = config.model
    n = len(ladder)
    L2 = spec.n_sites
    max_iters = config.max_sweeps * L2
    check_iters = config.check_interval_sweeps * L2
    trace_iters = config.trace_stride_sweeps * L2

    raw = np.zeros(n)
    m = np.zeros(n)
    last_touch = np.zeros(n, dtype=np.int64)
    hist = np.zeros(n, dtype=np.int64)
    cap = int(math.log2(config.eta0 / config.eta_min)) + 8
    seg_starts = np.zeros(cap, dtype=np.int64)
    seg_etas = np.zeros(cap)
    ev_sweep = np.zeros(cap, dtype=np.int64)
    ev_eta = np.zeros(cap)
    ev_kind = np.zeros(cap, dtype=np.int64)
    tr_cap = max_iters // trace_iters + 2
    tr_sweep = np.zeros(tr_cap, dtype=np.int64)
    tr_eta = np.zeros(tr_cap)
    tr_eps = np.zeros(tr_cap)
    tr_l2 = np.zeros(tr_cap)
    u_star = ref.u_star if ref is not None else np.zeros(0)
    eps_ref = ref.eps_ref if ref is not None else np.zeros(0)

    rng = np.random.default_rng(seed)
    sites = (rng.random(L2) * spec.q).astype(np.int8)
    energy = int(_kernels.total_energy(sites, spec.L, spec.kind.code))
    if energy not in ladder:
        raise LadderError(f"initial configuration energy {energy} is not on the ladder")

    t0 = time.perf_counter()
    (status, t, n_ev, n_tr, _eta, _phase, _switch_from, _n_segs, _energy,
     offset, _q_sum, bad_energy) = _kernels.run_experiment(
        sites, spec.L, spec.q, spec.kind.code, ladder.lookup, ladder.e_min,
        energy, config.algorithm.code, config.beta, config.eta0,
        config.eta_min, check_iters, trace_iters, max_iters,
        RECOMPUTE_INTERVAL, raw, m, last_touch, hist, seg_starts, seg_etas,
        u_star, eps_ref, config.anchor.code, rng,
        ev_sweep, ev_eta, ev_kind, tr_sweep, tr_eta, tr_eps, tr_l2,
    )
    wall = time.perf_counter() - t0

    if status == _kernels.STATUS_OFF_LADDER:
        raise LadderError(
            f"seed {seed}: reached off-ladder energy {bad_energy}; for sampled "
            "(non-exhaustive) ladders rerun discovery with a larger budget"
        )
    events = [TraceEvent(int(ev_sweep[i]), _EVENT_BY_CODE[int(ev_kind[i])], float(ev_eta[i]))
              for i in range(n_ev)]
    has_ref = ref is not None
    samples = [
        TraceSample(
            int(tr_sweep[i]), float(tr_eta[i]),
            float(tr_eps[i]) if has_ref else None,
            float(tr_l2[i]) if has_ref else None,
        )
        for i in range(n_tr)
    ]
    u = raw - offset
    u -= u.mean()
    return RunTrace(
        seed=seed, samples=samples, events=events, final_u=u,
        wall_time_seconds=wall, total_iterations=int(t),
        stopped=status == _kernels.STATUS_STOPPED,
    )


def _run_python(config: ExperimentConfig, seed: int, ladder: EnergyLadder,
                ref: Optional[_Reference]) -> RunTrace:
    """Step-wise loop over the public operations; handles any walker count."""
    spec = config.model
    n = len(ladder)
    L2 = spec.n_sites
    max_iters = config.max_sweeps * L2
    trace_iters = config.trace_stride_sweeps * L2
    is_awl = config.algorithm is Algorithm.AWL

    rngs = [np.random.default_rng(seed ^ w) for w in range(config.walkers)]
    lattices = [SpinLattice.random(spec, rngs[w]) for w in range(config.walkers)]
    for lat in lattices:
        if lat.cached_energy not in ladder:
            raise LadderError(
                f"initial configuration energy {lat.cached_energy} is not on the ladder"
            )
    dos = DosEstimate(n)
    mom = MomentumState(n, config.beta) if is_awl else None
    sched = ScheduleState(n, L2, config.eta0, config.check_interval_sweeps,
                          config.eta_min)
    samples: list[TraceSample] = []
    stopped = False
    t = 0

    t0 = time.perf_counter()
    while t < max_iters:
        t += 1
        if sched.phase is SchedulePhase.ONE_OVER_T:
            sched.eta = sched.n / t
            if sched.eta < sched.eta_min:
                t -= 1
                sched.events.append((t // L2, AdaptEvent.STOP, sched.eta))
                stopped = True
                break
        eta = sched.eta
        counts: dict[int, int] = {}
        for w in range(config.walkers):
            outcome = sampler.metropolis_step(lattices[w], dos, ladder, rngs[w])
            counts[outcome.visited_level] = counts.get(outcome.visited_level, 0) + 1
        if is_awl:
            estimator.awl_step_average(dos, mom, counts, config.walkers, eta, t)
        else:
            estimator.wl_step_average(dos, counts, config.walkers, eta)
        for level in sorted(counts):
            for _ in range(counts[level]):
                estimator.record_visit(sched, level)
        event = estimator.maybe_adapt(sched, t)
        if event is AdaptEvent.SWITCHED_TO_ONE_OVER_T and is_awl:
            mom.switch_to_one_over_t(t + 1)
        if event is AdaptEvent.STOP:
            stopped = True
            break
        if is_awl and t % RECOMPUTE_INTERVAL == 0:
            estimator.settle_all(dos, mom, t)
        if t % trace_iters == 0:
            eps = l2 = None
            if ref is not None:
                if is_awl:
                    estimator.settle_all(dos, mom, t)
                eps, l2 = _kernels.dos_errors(dos.raw, dos.offset,
                                              ref.u_star, ref.eps_ref,
                                              config.anchor.code)
                eps, l2 = float(eps), float(l2)
            samples.append(TraceSample(t // L2, sched.eta, eps, l2))
    wall = time.perf_counter() - t0

    if is_awl:
        estimator.settle_all(dos, mom, t)
    events = [TraceEvent(sweep, kind, eta) for sweep, kind, eta in sched.events]
    return RunTrace(
        seed=seed, samples=samples, events=events,
        final_u=estimator.normalized_u(dos), wall_time_seconds=wall,
        total_iterations=t, stopped=stopped,
    )


def _replicate_worker(args) -> RunTrace:
    config, seed, levels, ref = args
    ladder = EnergyLadder(levels)
    prepared = _Reference(*ref) if ref is not None else None
    return run_single(config, seed, _ladder=ladder, _prepared=prepared)


def _welford(values) -> tuple[Optional[float], Optional[float]]:
    n = 0
    mean = 0.0
    m2 = 0.0
    for x in values:
        n += 1
        d = x - mean
        mean += d / n
        m2 += d * (x - mean)
    if n == 0:
        return None, None
    return mean, math.sqrt(m2 / n)


def run_replicates(config: ExperimentConfig, *, jobs: int = 1,
                   reference=None) -> Summary:
    """Run every configured seed (optionally in parallel) and aggregate.

    The ladder and reference are prepared once and shared; aggregation is an
    ordered reduction by seed, so results do not depend on the degree of
    parallelism.
    """
    ladder = build_ladder(config)
    ref = _prepare_reference(config, ladder, reference)
    if jobs > 1:
        ref_tuple = tuple(ref) if ref is not None else None
        work = [(config, s, ladder.levels, ref_tuple) for s in config.seeds]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_replicate_worker, work))
    else:
        traces = [run_single(config, s, _ladder=ladder, _prepared=ref)
                  for s in config.seeds]

    firsts = [t.first_equilibration_sweeps for t in traces]
    equilibrated = [f for f in firsts if f is not None]
    mean_eq, std_eq = _welford(equilibrated)
    mean_wall, std_wall = _welford(t.wall_time_seconds for t in traces)

    by_sweep: dict[int, list[float]] = {}
    for trace in traces:
        for sweep, eps in trace.epsilon_samples:
            by_sweep.setdefault(sweep, []).append(eps)
    trajectory = [(sweep, sum(v) / len(v)) for sweep, v in sorted(by_sweep.items())]

    return Summary(
        traces=traces, n_runs=len(traces), n_equilibrated=len(equilibrated),
        mean_first_equilibration_sweeps=mean_eq,
        std_first_equilibration_sweeps=std_eq,
        mean_wall_time_seconds=mean_wall or 0.0,
        std_wall_time_seconds=std_wall or 0.0,
        epsilon_trajectory=trajectory,
    )


def specific_heat_curve(log_g, energies, grid: TemperatureGrid) -> np.ndarray:
    """Specific heat over the temperature grid; rows are (T, C(T))."""
    log_g = np.asarray(log_g, dtype=np.float64)
    energies = np.asarray(energies, dtype=np.float64)
    temps = grid.values()
    out = np.empty((temps.size, 2))
    for i, T in enumerate(temps):
        out[i, 0] = T
        out[i, 1] = specific_heat(log_g, energies, T)
    return out


# ---------------------------------------------------------------------------
# CSV artifacts
# ---------------------------------------------------------------------------

def _fmt(x: Optional[float]) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def write_trace_csv(trace: RunTrace, path) -> None:
    """Trace rows merged chronologically; events precede samples at equal sweeps."""
    lines = ["sweep,eta,epsilon,l2,event"]
    ei = si = 0
    events, samples = trace.events, trace.samples
    while ei < len(events) or si < len(samples):
        take_event = ei < len(events) and (
            si >= len(samples) or events[ei].sweep <= samples[si].sweep
        )
        if take_event:
            ev = events[ei]
            lines.append(f"{ev.sweep},{_fmt(ev.eta)},,,{ev.kind.value}")
            ei += 1
        else:
            s = samples[si]
            lines.append(f"{s.sweep},{_fmt(s.eta)},{_fmt(s.epsilon)},{_fmt(s.l2)},")
            si += 1
    Path(path).write_text("\n".join(lines) + "\n")


def load_trace_csv(path) -> tuple[list[TraceSample], list[TraceEvent]]:
    text = Path(path).read_text()
    lines = text.strip().splitlines()
    if not lines or lines[0] != "sweep,eta,epsilon,l2,event":
        raise ValueError(f"{path} is not a trace CSV")
    samples: list[TraceSample] = []
    events: list[TraceEvent] = []
    for line in lines[1:]:
        sweep, eta, eps, l2, event = line.split(",")
        if event:
            events.append(TraceEvent(int(sweep), AdaptEvent(event), float(eta)))
        else:
            samples.append(TraceSample(
                int(sweep), float(eta),
                float(eps) if eps else None,
                float(l2) if l2 else None,
            ))
    return samples, events


def write_dos_csv(energies, log_g, path) -> None:
    energies = np.asarray(energies)
    log_g = np.asarray(log_g, dtype=np.float64)
    lines = ["energy,log_g"]
    lines += [f"{int(e)},{_fmt(g)}" for e, g in zip(energies, log_g)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_dos_csv(path) -> tuple[np.ndarray, np.ndarray]:
    text = Path(path).read_text()
    lines = text.strip().splitlines()
    if not lines or lines[0] != "energy,log_g":
        raise ValueError(f"{path} is not a DOS CSV")
    energies = []
    log_g = []
    for line in lines[1:]:
        e, g = line.split(",")
        energies.append(int(e))
        log_g.append(float(g))
    energies = np.asarray(energies, dtype=np.int64)
    if np.any(np.diff(energies) <= 0):
        raise ValueError(f"{path}: energies must be strictly ascending")
    return energies, np.asarray(log_g, dtype=np.float64)


def write_heat_csv(curve, path) -> None:
    curve = np.asarray(curve, dtype=np.float64)
    lines = ["T,C"]
    lines += [f"{_fmt(T)},{_fmt(C)}" for T, C in curve]
    Path(path).write_text("\n".join(lines) + "\n")


def load_heat_csv(path) -> np.ndarray:
    text = Path(path).read_text()
    lines = text.strip().splitlines()
    if not lines or lines[0] != "T,C":
        raise ValueError(f"{path} is not a heat-curve CSV")
    return np.asarray([[float(v) for v in line.split(",")] for line in lines[1:]])


def write_summary_csv(summary: Summary, path) -> None:
    """Aggregate stats as key,value rows; wall-time rows are not deterministic."""
    rows = [
        ("n_runs", str(summary.n_runs)),
        ("n_equilibrated", str(summary.n_equilibrated)),
        ("mean_first_equilibration_sweeps", _fmt(summary.mean_first_equilibration_sweeps)),
        ("std_first_equilibration_sweeps", _fmt(summary.std_first_equilibration_sweeps)),
        ("mean_wall_time_seconds", _fmt(summary.mean_wall_time_seconds)),
        ("std_wall_time_seconds", _fmt(summary.std_wall_time_seconds)),
    ]
    lines = ["stat,value"] + [f"{k},{v}" for k, v in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_epsilon_trajectory_csv(summary: Summary, path) -> None:
    lines = ["sweep,epsilon_mean"]
    lines += [f"{sweep},{_fmt(e)}" for sweep, e in summary.epsilon_trajectory]
    Path(path).write_text("\n".join(lines) + "\n")


def emit_csv(obj, path) -> None:
    """Write the CSV form of a trace, summary, exact DOS, or (T, C) curve."""
    if isinstance(obj, RunTrace):
        write_trace_csv(obj, path)
    elif isinstance(obj, Summary):
        write_summary_csv(obj, path)
    elif isinstance(obj, ExactDos):
        write_dos_csv(obj.energies, obj.log_g, path)
    elif isinstance(obj, tuple) and len(obj) == 2:
        write_dos_csv(obj[0], obj[1], path)
    elif isinstance(obj, (list, np.ndarray)):
        write_heat_csv(obj, path)
    else:
        raise TypeError(f"no CSV format for {type(obj).__name__}")
