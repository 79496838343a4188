"""Jitted numerical kernels shared by the public modules.

Everything here operates on plain numpy arrays and scalars so that the exact
same arithmetic serves both the step-wise Python API (one call per operation)
and the fused experiment loop in :mod:`flathist.runner`.  All randomness is
drawn as uniform doubles from a ``numpy.random.Generator``; numba executes
``Generator.random()`` bit-identically to numpy, which keeps the two call
paths on a single reproducible stream.
"""

import numpy as np
from numba import njit

# model kinds
ISING = 0
POTTS = 1

# algorithms
ALG_WL = 0
ALG_AWL = 1

# schedule phases
PHASE_FLAT = 0
PHASE_ONE_OVER_T = 1

# schedule / run events
EVENT_HALVED = 1
EVENT_ONE_OVER_T = 2
EVENT_STOP = 3

# run statuses
STATUS_OK = 0
STATUS_STOPPED = 1
STATUS_OFF_LADDER = 2

# error anchoring modes
ANCHOR_SUM_TO_ONE = 0
ANCHOR_GROUND_STATE = 1
ANCHOR_MEAN_ZERO = 2

# Deferred geometric tails below this size are dropped: they are smaller than
# one ulp of any log-DOS entry the update could ever produce.
_TAIL_CUTOFF = 1e-30


@njit(cache=True)
def total_energy(sites, L, kind):
    """Total energy from scratch, summing each right/down bond once (2*L*L bonds)."""
    e = 0
    for r in range(L):
        for c in range(L):
            s = sites[r * L + c]
            right = sites[r * L + (c + 1) % L]
            down = sites[((r + 1) % L) * L + c]
            if kind == ISING:
                sv = 2 * s - 1
                e -= sv * (2 * right - 1) + sv * (2 * down - 1)
            else:
                if s == right:
                    e -= 1
                if s == down:
                    e -= 1
    return e


@njit(cache=True)
def delta_energy(sites, L, kind, site, new_val):
    """Energy change of setting ``site`` to ``new_val``, from its 4 neighbor slots.

    The four slots carry bond multiplicity automatically (at L=2 opposite
    neighbors coincide, giving the doubled bonds of the 2x2 torus).
    """
    old = sites[site]
    if new_val == old:
        return 0
    r = site // L
    c = site % L
    n0 = sites[((r + 1) % L) * L + c]
    n1 = sites[((r - 1) % L) * L + c]
    n2 = sites[r * L + (c + 1) % L]
    n3 = sites[r * L + (c - 1) % L]
    if kind == ISING:
        nb = (2 * n0 - 1) + (2 * n1 - 1) + (2 * n2 - 1) + (2 * n3 - 1)
        return ((2 * old - 1) - (2 * new_val - 1)) * nb
    matches_old = 0
    matches_new = 0
    if n0 == old:
        matches_old += 1
    if n1 == old:
        matches_old += 1
    if n2 == old:
        matches_old += 1
    if n3 == old:
        matches_old += 1
    if n0 == new_val:
        matches_new += 1
    if n1 == new_val:
        matches_new += 1
    if n2 == new_val:
        matches_new += 1
    if n3 == new_val:
        matches_new += 1
    return matches_old - matches_new


@njit(cache=True)
def metropolis_step(sites, L, q, kind, energy, raw, lookup, e_min, rng):
    """One single-site proposal plus accept/reject against the current log-DOS.

    Acceptance compares raw log-DOS entries directly (the global offset
    cancels): accept with probability min(1, exp(u_old - u_new)), evaluated in
    log space.  Mutates ``sites`` on acceptance.

    Returns ``(energy, visited, proposed, accepted, ok)`` where ``visited`` is
    the level index of the post-step configuration and ``ok`` is False when
    the proposed energy is not on the ladder.
    """
    L2 = L * L
    site = int(rng.random() * L2)
    if kind == ISING:
        new_val = 1 - sites[site]
    else:
        new_val = int(rng.random() * q)
    d_e = delta_energy(sites, L, kind, site, new_val)
    e_new = energy + d_e
    i_old = lookup[energy - e_min]
    pos = e_new - e_min
    if pos < 0 or pos >= lookup.size:
        return e_new, -1, -1, False, False
    i_new = lookup[pos]
    if i_new < 0:
        return e_new, -1, -1, False, False
    log_ratio = raw[i_old] - raw[i_new]
    accepted = True
    if log_ratio < 0.0:
        accepted = np.log(rng.random()) < log_ratio
    if accepted:
        sites[site] = np.int8(new_val)
        return e_new, i_new, i_new, True, True
    return energy, i_old, i_new, False, True


@njit(cache=True)
def sample_level_counts(sites, L, q, kind, energy, raw, lookup, e_min, n_steps, rng):
    """Run ``n_steps`` Metropolis steps at fixed log-DOS; count level visits."""
    counts = np.zeros(raw.size, dtype=np.int64)
    for _ in range(n_steps):
        energy, visited, _proposed, _acc, ok = metropolis_step(
            sites, L, q, kind, energy, raw, lookup, e_min, rng
        )
        if not ok:
            return counts, energy, False
        counts[visited] += 1
    return counts, energy, True


@njit(cache=True)
def enumerate_bucket_counts(L, q, kind):
    """Exact configuration counts per energy, by reflected mixed-radix Gray sweep.

    Visits all q**(L*L) configurations changing one site per step (Knuth's
    loopless Gray-code generation), tracking the energy with O(1) deltas.
    Returns counts over dense integer-energy buckets offset by ``-2*L*L``.
    """
    M = L * L
    e_min = -2 * M
    span = 4 * M + 1 if kind == ISING else 2 * M + 1
    counts = np.zeros(span, dtype=np.int64)
    sites = np.zeros(M, dtype=np.int8)
    focus = np.arange(M + 1, dtype=np.int64)
    direction = np.ones(M, dtype=np.int64)
    energy = total_energy(sites, L, kind)
    counts[energy - e_min] += 1
    while True:
        j = focus[0]
        focus[0] = 0
        if j == M:
            break
        new_val = sites[j] + direction[j]
        energy += delta_energy(sites, L, kind, j, new_val)
        sites[j] = np.int8(new_val)
        if new_val == 0 or new_val == q - 1:
            direction[j] = -direction[j]
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1
        counts[energy - e_min] += 1
    return counts


@njit(cache=True)
def explore_energies(sites, L, q, kind, n_iters, eta, rng, visited, u_dense):
    """Exploratory flat-histogram walk marking every energy it ever touches.

    Runs a fixed-rate update over dense integer-energy buckets (no ladder
    needed), so previously unseen energies are admissible on sight.  Used for
    ladder discovery when exhaustive enumeration is out of reach.
    """
    M = L * L
    e_min = -2 * M
    energy = total_energy(sites, L, kind)
    visited[energy - e_min] = True
    for _ in range(n_iters):
        site = int(rng.random() * M)
        if kind == ISING:
            new_val = 1 - sites[site]
        else:
            new_val = int(rng.random() * q)
        e_new = energy + delta_energy(sites, L, kind, site, new_val)
        log_ratio = u_dense[energy - e_min] - u_dense[e_new - e_min]
        accepted = True
        if log_ratio < 0.0:
            accepted = np.log(rng.random()) < log_ratio
        if accepted:
            sites[site] = np.int8(new_val)
            energy = e_new
        visited[energy - e_min] = True
        u_dense[energy - e_min] += eta
    return energy


@njit(cache=True)
def settle_coord(raw, m, last_touch, n, t, beta, seg_starts, seg_etas, n_segs,
                 one_over_t_from, n_levels):
    """Apply the deferred unvisited-coordinate updates to coordinate ``n``.

    Catches up iterations ``last_touch[n]+1 .. t``, during which the
    coordinate received ``eta_j * sqrt(beta**(j-s) * m_n)`` each iteration j.
    Constant-rate stretches use the closed-form geometric sum; the 1/t stretch
    (from ``one_over_t_from`` on, rate ``n_levels/j``) is summed term by term
    with an underflow cutoff.  Decays the momentum and stamps the touch time.
    """
    s = last_touch[n]
    if s >= t:
        return
    w = np.sqrt(m[n])
    root = np.sqrt(beta)
    if w > 0.0 and root > 0.0:
        total = 0.0
        flat_hi = t
        if one_over_t_from > 0 and one_over_t_from - 1 < flat_hi:
            flat_hi = one_over_t_from - 1
        if flat_hi >= s + 1:
            log_root = np.log(root)
            for k in range(n_segs):
                a = seg_starts[k]
                if k + 1 < n_segs:
                    b = seg_starts[k + 1] - 1
                else:
                    b = flat_hi
                if a < s + 1:
                    a = s + 1
                if b > flat_hi:
                    b = flat_hi
                if b < a:
                    continue
                # sum_{j=a}^{b} root**(j-s) = root**(a-s) * (1-root**(b-a+1)) / (1-root)
                geom = root ** (a - s) * (-np.expm1((b - a + 1) * log_root)) / (1.0 - root)
                total += seg_etas[k] * w * geom
        if one_over_t_from > 0 and t >= one_over_t_from:
            a = s + 1
            if a < one_over_t_from:
                a = one_over_t_from
            power = root ** (a - s)
            for j in range(a, t + 1):
                if w * power < _TAIL_CUTOFF:
                    break
                total += (n_levels / j) * power * w
                power *= root
        raw[n] += total
    m[n] = m[n] * beta ** (t - s)
    last_touch[n] = t


@njit(cache=True)
def settle_all(raw, m, last_touch, t, beta, seg_starts, seg_etas, n_segs,
               one_over_t_from, n_levels):
    """Settle every coordinate through iteration ``t``; return recomputed sqrt-sum."""
    for n in range(n_levels):
        settle_coord(raw, m, last_touch, n, t, beta, seg_starts, seg_etas,
                     n_segs, one_over_t_from, n_levels)
    q_sum = 0.0
    for n in range(n_levels):
        q_sum += np.sqrt(m[n])
    return q_sum


@njit(cache=True)
def momentum_touch(raw, m, last_touch, n, t, eta, beta, weight,
                   seg_starts, seg_etas, n_segs, one_over_t_from, n_levels):
    """Visited-coordinate update at iteration ``t`` with indicator mass ``weight``.

    Settles the coordinate through t-1, folds the indicator into the momentum,
    applies the rate-scaled square-root increment, and returns the coordinate's
    old and new momentum square roots for the caller's running-sum update.
    """
    settle_coord(raw, m, last_touch, n, t - 1, beta, seg_starts, seg_etas,
                 n_segs, one_over_t_from, n_levels)
    w_old = np.sqrt(m[n])
    m[n] = beta * m[n] + (1.0 - beta) * weight
    w_new = np.sqrt(m[n])
    raw[n] += eta * w_new
    last_touch[n] = t
    return w_old, w_new


@njit(cache=True)
def dos_errors(raw, offset, u_star, log_g_ref, anchor):
    """Per-level comparison of the running estimate against a reference log-DOS.

    Returns ``(eps, l2)``: the mean absolute relative log-deviation after
    re-anchoring the estimate per ``anchor``, and the squared distance between
    the zero-mean estimate and the zero-mean reference ``u_star``.
    """
    n = raw.size
    total = 0.0
    for k in range(n):
        total += raw[k]
    mean_eff = total / n - offset
    l2 = 0.0
    for k in range(n):
        d = (raw[k] - offset - mean_eff) - u_star[k]
        l2 += d * d
    if anchor == ANCHOR_SUM_TO_ONE:
        mx = raw[0]
        for k in range(1, n):
            if raw[k] > mx:
                mx = raw[k]
        acc = 0.0
        for k in range(n):
            acc += np.exp(raw[k] - mx)
        shift = (mx - offset) + np.log(acc)
    elif anchor == ANCHOR_GROUND_STATE:
        shift = (raw[0] - offset) - log_g_ref[0]
    else:
        shift = mean_eff
    eps = 0.0
    for k in range(n):
        est = raw[k] - offset - shift
        eps += abs(1.0 - est / log_g_ref[k])
    eps /= n - 1
    return eps, l2


@njit(cache=True)
def run_experiment(sites, L, q, kind, lookup, e_min, energy,
                   algorithm, beta, eta0, eta_min,
                   check_iters, trace_iters, max_iters, recompute_iters,
                   raw, m, last_touch, hist, seg_starts, seg_etas,
                   u_star, log_g_ref, anchor, rng,
                   ev_sweep, ev_eta, ev_kind,
                   tr_sweep, tr_eta, tr_eps, tr_l2):
    """Fused single-walker experiment loop (flat-histogram phase, then 1/t).

    Per iteration: one Metropolis step, one density update (plain or
    momentum-accelerated), a histogram visit, and the rate-adaptation check at
    sweep-interval boundaries.  Event and trace rows are written into the
    preallocated output arrays.  Returns
    ``(status, t, n_ev, n_tr, eta, phase, one_over_t_from, n_segs, energy,
    offset, q_sum, bad_energy)``.
    """
    n_levels = raw.size
    L2 = L * L
    eta = eta0
    offset = 0.0
    q_sum = 0.0
    root = np.sqrt(beta)
    phase = PHASE_FLAT
    one_over_t_from = 0
    n_segs = 1
    seg_starts[0] = 1
    seg_etas[0] = eta0
    n_ev = 0
    n_tr = 0
    status = STATUS_OK
    has_ref = u_star.size > 0
    bad_energy = 0
    t = 0
    while t < max_iters:
        t += 1
        if phase == PHASE_ONE_OVER_T:
            eta = n_levels / t
            if eta < eta_min:
                t -= 1
                status = STATUS_STOPPED
                ev_sweep[n_ev] = t // L2
                ev_eta[n_ev] = eta
                ev_kind[n_ev] = EVENT_STOP
                n_ev += 1
                break
        energy, visited, _proposed, _accepted, ok = metropolis_step(
            sites, L, q, kind, energy, raw, lookup, e_min, rng
        )
        if not ok:
            t -= 1
            status = STATUS_OFF_LADDER
            bad_energy = energy
            break
        if algorithm == ALG_WL:
            raw[visited] += eta
            offset += eta / n_levels
        else:
            w_old, w_new = momentum_touch(
                raw, m, last_touch, visited, t, eta, beta, 1.0,
                seg_starts, seg_etas, n_segs, one_over_t_from, n_levels
            )
            q_sum = root * (q_sum - w_old) + w_new
            offset += eta * q_sum / n_levels
        if phase == PHASE_FLAT:
            hist[visited] += 1
            if t % check_iters == 0:
                flat = True
                for k in range(n_levels):
                    if hist[k] == 0:
                        flat = False
                        break
                if flat:
                    eta = eta * 0.5
                    hist[:] = 0
                    ev_sweep[n_ev] = t // L2
                    ev_eta[n_ev] = eta
                    ev_kind[n_ev] = EVENT_HALVED
                    n_ev += 1
                    if algorithm == ALG_AWL:
                        seg_starts[n_segs] = t + 1
                        seg_etas[n_segs] = eta
                        n_segs += 1
                if eta <= n_levels / t:
                    phase = PHASE_ONE_OVER_T
                    eta = n_levels / t
                    one_over_t_from = t + 1
                    ev_sweep[n_ev] = t // L2
                    ev_eta[n_ev] = eta
                    ev_kind[n_ev] = EVENT_ONE_OVER_T
                    n_ev += 1
                if eta < eta_min:
                    status = STATUS_STOPPED
                    ev_sweep[n_ev] = t // L2
                    ev_eta[n_ev] = eta
                    ev_kind[n_ev] = EVENT_STOP
                    n_ev += 1
                    break
        if algorithm == ALG_AWL and t % recompute_iters == 0:
            q_sum = settle_all(raw, m, last_touch, t, beta, seg_starts,
                               seg_etas, n_segs, one_over_t_from, n_levels)
        if trace_iters > 0 and t % trace_iters == 0:
            eps = np.nan
            l2 = np.nan
            if has_ref:
                if algorithm == ALG_AWL:
                    q_sum = settle_all(raw, m, last_touch, t, beta, seg_starts,
                                       seg_etas, n_segs, one_over_t_from, n_levels)
                eps, l2 = dos_errors(raw, offset, u_star, log_g_ref, anchor)
            tr_sweep[n_tr] = t // L2
            tr_eta[n_tr] = eta
            tr_eps[n_tr] = eps
            tr_l2[n_tr] = l2
            n_tr += 1
    if algorithm == ALG_AWL:
        q_sum = settle_all(raw, m, last_touch, t, beta, seg_starts, seg_etas,
                           n_segs, one_over_t_from, n_levels)
    return (status, t, n_ev, n_tr, eta, phase, one_over_t_from, n_segs,
            energy, offset, q_sum, bad_energy)
