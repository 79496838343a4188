"""Log-DOS estimation: plain and momentum-accelerated flat-histogram updates.

The estimate is kept as ``raw - offset``: the visited coordinate gets its
increment added to ``raw`` while ``offset`` absorbs the mean of each
iteration's increments, which realizes the sum-to-zero normalization in O(1)
per step instead of an O(N) subtraction.

The momentum path updates only the visited coordinate eagerly.  Every other
coordinate's pending decayed increments are accumulated lazily: a last-touch
time per coordinate plus a log of learning-rate segments allow the deferred
sum to be applied in closed form (geometric series per constant-rate
segment, term-by-term over the 1/t stretch) whenever the coordinate is next
needed.  ``settle_all`` brings the whole vector current and is exactly
equivalent to having run the dense update at every iteration.

Plain momentum and RMSprop-style scaling are special cases of this square
root-of-momentum update and are not separate code paths.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import logsumexp

from . import _kernels

# Full settle plus sqrt-sum recomputation cadence, bounding float drift.
RECOMPUTE_INTERVAL = 1_000_000


class DosEstimate:
    """Log-scale density estimate with a global normalization offset."""

    __slots__ = ("raw", "offset", "raw_sum")

    def __init__(self, n_levels: int):
        if n_levels < 2:
            raise ValueError("need at least 2 energy levels")
        self.raw = np.zeros(n_levels, dtype=np.float64)
        self.offset = 0.0
        # Tracks sum(raw) as it will be once all lazy increments are settled.
        self.raw_sum = 0.0

    @property
    def n(self) -> int:
        return self.raw.size

    def recompute_sums(self) -> None:
        self.raw_sum = float(self.raw.sum())


class MomentumState:
    """Per-level momentum with last-touch times and the rate-segment log.

    ``m`` holds exponentially weighted averages of visit indicators (always in
    [0, 1]), ``last_touch[n]`` the last iteration coordinate n was brought
    current, and ``sqrt_sum`` the running sum of sqrt(m) used to advance the
    normalization offset each iteration.
    """

    __slots__ = ("m", "last_touch", "beta", "sqrt_sum",
                 "_seg_starts", "_seg_etas", "_n_segs", "_one_over_t_from",
                 "_t_last")

    def __init__(self, n_levels: int, beta: float = 0.9):
        if not 0.0 <= beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {beta}")
        self.m = np.zeros(n_levels, dtype=np.float64)
        self.last_touch = np.zeros(n_levels, dtype=np.int64)
        self.beta = beta
        self.sqrt_sum = 0.0
        self._seg_starts = np.zeros(16, dtype=np.int64)
        self._seg_etas = np.zeros(16, dtype=np.float64)
        self._n_segs = 0
        self._one_over_t_from = 0
        self._t_last = 0

    def note_eta(self, t: int, eta: float) -> None:
        """Record that iteration ``t`` runs at rate ``eta`` (constant-rate phase)."""
        if self._one_over_t_from:
            return
        if self._n_segs and self._seg_etas[self._n_segs - 1] == eta:
            return
        if self._n_segs == self._seg_starts.size:
            self._seg_starts = np.concatenate([self._seg_starts, np.zeros_like(self._seg_starts)])
            self._seg_etas = np.concatenate([self._seg_etas, np.zeros_like(self._seg_etas)])
        self._seg_starts[self._n_segs] = t
        self._seg_etas[self._n_segs] = eta
        self._n_segs += 1

    def switch_to_one_over_t(self, t_from: int) -> None:
        """From iteration ``t_from`` on, the rate is n_levels / iteration."""
        self._one_over_t_from = t_from


class SchedulePhase(enum.Enum):
    FLAT_HISTOGRAM = "flat_histogram"
    ONE_OVER_T = "one_over_t"


class AdaptEvent(enum.Enum):
    NONE = "none"
    HALVED = "halved"
    SWITCHED_TO_ONE_OVER_T = "one_over_t"
    STOP = "stop"


class ScheduleState:
    """Learning-rate schedule: flat-histogram halvings, then the 1/t rule."""

    __slots__ = ("eta", "histogram", "phase", "iteration", "check_interval_sweeps",
                 "eta_min", "n", "iterations_per_sweep", "events")

    def __init__(self, n_levels: int, iterations_per_sweep: int, eta0: float,
                 check_interval_sweeps: int = 1000, eta_min: float = 1e-8):
        if eta0 <= eta_min or eta_min <= 0.0:
            raise ValueError("need eta0 > eta_min > 0")
        self.eta = eta0
        self.histogram = np.zeros(n_levels, dtype=np.int64)
        self.phase = SchedulePhase.FLAT_HISTOGRAM
        self.iteration = 0
        self.check_interval_sweeps = check_interval_sweeps
        self.eta_min = eta_min
        self.n = n_levels
        self.iterations_per_sweep = iterations_per_sweep
        # (sweep, AdaptEvent, eta after the event), in order of occurrence
        self.events: list[tuple[int, AdaptEvent, float]] = []

    def eta_for(self, t: int) -> float:
        """Rate in effect for iteration ``t`` (N/t exactly in the 1/t phase)."""
        if self.phase is SchedulePhase.ONE_OVER_T:
            self.eta = self.n / t
        return self.eta


def wl_step(dos: DosEstimate, n: int, eta: float) -> None:
    """Add ``eta`` to the visited coordinate and renormalize to zero sum."""
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not 0 <= n < dos.n:
        raise ValueError(f"level index {n} out of range [0, {dos.n})")
    dos.raw[n] += eta
    dos.offset += eta / dos.n
    dos.raw_sum += eta


def awl_step(dos: DosEstimate, mom: MomentumState, n: int, eta: float, t: int) -> None:
    """Momentum-accelerated update for the level visited at iteration ``t``.

    Equivalent to decaying every coordinate's momentum, folding the one-hot
    indicator into coordinate ``n``, adding ``eta * sqrt(m)`` to every
    coordinate, and subtracting the mean; only coordinate ``n`` and the
    normalization offset are actually touched.
    """
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not 0 <= n < dos.n:
        raise ValueError(f"level index {n} out of range [0, {dos.n})")
    if t <= mom._t_last:
        raise ValueError(f"iteration {t} is not ahead of the last update at {mom._t_last}")
    mom.note_eta(t, eta)
    w_old, w_new = _kernels.momentum_touch(
        dos.raw, mom.m, mom.last_touch, n, t, eta, mom.beta, 1.0,
        mom._seg_starts, mom._seg_etas, mom._n_segs, mom._one_over_t_from, dos.n
    )
    mom.sqrt_sum = np.sqrt(mom.beta) * (mom.sqrt_sum - w_old) + w_new
    dos.offset += eta * mom.sqrt_sum / dos.n
    dos.raw_sum += eta * mom.sqrt_sum
    mom._t_last = t


def awl_step_average(dos: DosEstimate, mom: MomentumState, level_counts,
                     n_walkers: int, eta: float, t: int) -> None:
    """Momentum update driven by the averaged indicator of several walkers.

    ``level_counts`` maps level index -> number of walkers that visited it at
    iteration ``t``; the indicator mass fed to each touched coordinate is
    count / n_walkers.  Single-walker runs reduce exactly to
    :func:`awl_step`.
    """
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if t <= mom._t_last:
        raise ValueError(f"iteration {t} is not ahead of the last update at {mom._t_last}")
    mom.note_eta(t, eta)
    sum_old = 0.0
    sum_new = 0.0
    for n in sorted(level_counts):
        weight = level_counts[n] / n_walkers
        w_old, w_new = _kernels.momentum_touch(
            dos.raw, mom.m, mom.last_touch, n, t, eta, mom.beta, weight,
            mom._seg_starts, mom._seg_etas, mom._n_segs, mom._one_over_t_from, dos.n
        )
        sum_old += w_old
        sum_new += w_new
    mom.sqrt_sum = np.sqrt(mom.beta) * (mom.sqrt_sum - sum_old) + sum_new
    dos.offset += eta * mom.sqrt_sum / dos.n
    dos.raw_sum += eta * mom.sqrt_sum
    mom._t_last = t


def wl_step_average(dos: DosEstimate, level_counts, n_walkers: int, eta: float) -> None:
    """Plain update driven by the averaged indicator of several walkers."""
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    total = 0.0
    for n in sorted(level_counts):
        inc = eta * (level_counts[n] / n_walkers)
        dos.raw[n] += inc
        total += inc
    dos.offset += total / dos.n
    dos.raw_sum += total


def settle(dos: DosEstimate, mom: MomentumState, n: int, t: int) -> None:
    """Apply coordinate ``n``'s deferred increments through iteration ``t``."""
    if t < mom.last_touch[n]:
        raise ValueError(f"iteration {t} precedes the last touch of level {n}")
    _kernels.settle_coord(dos.raw, mom.m, mom.last_touch, n, t, mom.beta,
                          mom._seg_starts, mom._seg_etas, mom._n_segs,
                          mom._one_over_t_from, dos.n)


def settle_all(dos: DosEstimate, mom: MomentumState, t: int) -> None:
    """Bring every coordinate current through ``t``; recompute running sums."""
    q_sum = _kernels.settle_all(dos.raw, mom.m, mom.last_touch, t, mom.beta,
                                mom._seg_starts, mom._seg_etas, mom._n_segs,
                                mom._one_over_t_from, dos.n)
    mom.sqrt_sum = float(q_sum)
    dos.recompute_sums()
    if t > mom._t_last:
        mom._t_last = t


def record_visit(schedule: ScheduleState, n: int) -> None:
    """Count the visit in the energy histogram (flat-histogram phase only)."""
    if schedule.phase is SchedulePhase.FLAT_HISTOGRAM:
        schedule.histogram[n] += 1


def maybe_adapt(schedule: ScheduleState, t: int) -> AdaptEvent:
    """Rate adaptation at iteration ``t``; call once per iteration, after the update.

    At every check-interval boundary of the flat-histogram phase: halve the
    rate and reset the histogram if every level was visited (the first such
    halving is the first equilibration), then hand over to the 1/t rule once
    the rate has fallen to N/t.  A halving that crosses N/t triggers the
    crossover immediately; both transitions are appended to
    ``schedule.events`` and the last one is returned.
    """
    schedule.iteration = t
    result = AdaptEvent.NONE
    sweep = t // schedule.iterations_per_sweep
    if schedule.phase is SchedulePhase.FLAT_HISTOGRAM:
        check_iters = schedule.check_interval_sweeps * schedule.iterations_per_sweep
        if t % check_iters == 0:
            if schedule.histogram.min() > 0:
                schedule.eta = schedule.eta * 0.5
                schedule.histogram[:] = 0
                schedule.events.append((sweep, AdaptEvent.HALVED, schedule.eta))
                result = AdaptEvent.HALVED
            if schedule.eta <= schedule.n / t:
                schedule.phase = SchedulePhase.ONE_OVER_T
                schedule.eta = schedule.n / t
                schedule.events.append((sweep, AdaptEvent.SWITCHED_TO_ONE_OVER_T, schedule.eta))
                result = AdaptEvent.SWITCHED_TO_ONE_OVER_T
            if schedule.eta < schedule.eta_min:
                schedule.events.append((sweep, AdaptEvent.STOP, schedule.eta))
                result = AdaptEvent.STOP
    else:
        schedule.eta = schedule.n / t
        if schedule.eta < schedule.eta_min:
            schedule.events.append((sweep, AdaptEvent.STOP, schedule.eta))
            result = AdaptEvent.STOP
    return result


def normalized_u(dos: DosEstimate) -> np.ndarray:
    """Effective estimate (raw - offset) re-centered to exact zero sum."""
    u = dos.raw - dos.offset
    return u - u.mean()


def objective(u, u_star) -> float:
    """Log-sum-exp of (u_star - u): convex, minimized at u = u_star with value log N."""
    u = np.asarray(u, dtype=np.float64)
    u_star = np.asarray(u_star, dtype=np.float64)
    if u.shape != u_star.shape:
        raise ValueError("u and u_star must have equal length")
    return float(logsumexp(u_star - u))


def gradient(u, u_star) -> np.ndarray:
    """Gradient of :func:`objective`: minus the softmax of (u_star - u).

    Components always sum to -1; at u = u_star every component is -1/N.
    """
    u = np.asarray(u, dtype=np.float64)
    u_star = np.asarray(u_star, dtype=np.float64)
    if u.shape != u_star.shape:
        raise ValueError("u and u_star must have equal length")
    d = u_star - u
    e = np.exp(d - d.max())
    return -(e / e.sum())
