"""Pure-Python Monte Carlo kernels.

Reference implementation of the compiled ``_kernels`` extension, selected
automatically when the extension is unavailable.  Both backends draw from the
same counter-based stream: uniform number ``k`` of trial ``t`` is a SplitMix64
hash of ``(seed, t, k)``, so any split of the trial range reproduces the same
per-trial draws.

Profile packs describe one virtual density for nearest-point inversion:
``breaks`` (n,), ``mass`` (n,) the thinned mean count inside each breakpoint,
and ``rates`` (n+1,) the thinned density of each segment.
"""

import math

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
STEP = 0xD1B54A32D192ED03
UNIT = 2.0 ** -52

NAME = "python"


def mix64(z):
    z = (z + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * MIX1) & MASK
    z = ((z ^ (z >> 27)) * MIX2) & MASK
    return z ^ (z >> 31)


def trial_key(seed, trial):
    return mix64(mix64(seed & MASK) ^ trial)


def uniform(key, k):
    """k-th uniform of a trial stream, strictly inside (0, 1)."""
    z = mix64(key ^ (((k + 1) * STEP) & MASK))
    return ((z >> 12) + 0.5) * UNIT


# vectorised twins of the scalar helpers, on uint64 arrays

_U = np.uint64


def _mix64_np(z):
    z = z + _U(GOLDEN)
    z = (z ^ (z >> _U(30))) * _U(MIX1)
    z = (z ^ (z >> _U(27))) * _U(MIX2)
    return z ^ (z >> _U(31))


def _uniform_np(keys, k):
    z = _mix64_np(keys ^ _U(((k + 1) * STEP) & MASK))
    return ((z >> _U(12)).astype(np.float64) + 0.5) * UNIT


def _trial_keys_np(seed, start, stop):
    trials = np.arange(start, stop, dtype=np.uint64)
    return _mix64_np(_U(mix64(seed & MASK)) ^ trials)


def uniforms(seed, start, stop, k):
    """Uniform number ``k`` of every trial in ``[start, stop)``."""
    with np.errstate(over="ignore"):
        return _uniform_np(_trial_keys_np(seed, start, stop), k)


def _nearest_np(energy, breaks, mass, rates):
    x2 = np.full(energy.shape, np.inf)
    pending = np.ones(energy.shape, dtype=bool)
    lo2 = 0.0
    m = 0.0
    for i in range(len(breaks)):
        hit = pending & (energy <= mass[i])
        if hit.any():
            x2[hit] = lo2 + (energy[hit] - m) / (math.pi * rates[i])
        pending &= ~hit
        lo2 = breaks[i] * breaks[i]
        m = mass[i]
    if rates[-1] > 0.0:
        x2[pending] = lo2 + (energy[pending] - m) / (math.pi * rates[-1])
    return np.sqrt(x2)


def branch_mirror_counts(
    seed, start, stop,
    los_breaks, los_mass, los_rates, los_offsets, cum_weights,
    inner_breaks, inner_mass, inner_rates,
    outer_breaks, outer_mass, outer_rates,
    alpha_los, alpha_nlos, mu, noise, thresholds,
):
    """Per-threshold hit counts for the three branches over a trial range.

    Returns ``(counts, sumsq)``: ``counts[i, b]`` hits of branch ``b`` at
    threshold ``i`` and ``sumsq[i]`` the sum over trials of the squared
    per-trial hit total.
    """
    thresholds = np.asarray(thresholds, dtype=np.float64)
    n = stop - start
    with np.errstate(over="ignore", divide="ignore"):
        keys = _trial_keys_np(seed, start, stop)
        u = [_uniform_np(keys, k) for k in range(7)]
        snr = np.zeros((3, n))

        cw = np.asarray(cum_weights, dtype=np.float64)
        state = np.minimum(np.searchsorted(cw[:3], u[0], side="right"), 3)
        x = np.full(n, np.inf)
        energy = -np.log(u[1])
        for j in range(4):
            sel = state == j
            if not sel.any():
                continue
            b0, b1 = los_offsets[j], los_offsets[j + 1]
            x[sel] = _nearest_np(
                energy[sel], los_breaks[b0:b1], los_mass[b0:b1], los_rates[b0 + j:b1 + j + 1]
            )
        snr[0] = (-np.log(u[2]) / mu) * np.power(x, -alpha_los) / noise

        for b, (br, ms, rt, alpha) in enumerate(
            ((inner_breaks, inner_mass, inner_rates, alpha_nlos),
             (outer_breaks, outer_mass, outer_rates, alpha_nlos)),
            start=1,
        ):
            x = _nearest_np(-np.log(u[2 * b + 1]), br, ms, rt)
            snr[b] = (-np.log(u[2 * b + 2]) / mu) * np.power(x, -alpha) / noise

    hits = snr[:, None, :] > thresholds[None, :, None]
    counts = hits.sum(axis=2).T.astype(np.int64)
    per_trial = hits.sum(axis=0).astype(np.int64)
    sumsq = (per_trial * per_trial).sum(axis=1)
    return np.ascontiguousarray(counts), sumsq


def physical_snr(
    seed, trial,
    powers, densities, main_bs, side_bs, half_bw_bs,
    main_ue, side_ue, half_bw_ue,
    los_fraction, los_radius, alpha_los, alpha_nlos, mu, noise, sigma, window,
):
    """Serving SNR of one physical trial, or ``None`` if no BS is in the window.

    Each tier is generated in order of increasing distance and abandoned as
    soon as no further BS of that tier could beat the best mean power so far.
    """
    key = trial_key(seed, trial)
    k = 0
    best = 0.0
    best_tier = -1
    best_r = 0.0
    best_los = False
    for t in range(len(powers)):
        lam = densities[t]
        if lam <= 0.0:
            continue
        p = powers[t]
        a1 = main_bs[t] * main_ue
        r2 = 0.0
        while True:
            e = -math.log(uniform(key, k))
            k += 1
            r2 += e / (math.pi * lam)
            r = math.sqrt(r2)
            if r > window:
                break
            los_possible = r <= los_radius and los_fraction > 0.0
            bound = p * math.pow(r, -alpha_nlos)
            if los_possible:
                bound = max(bound, p * a1 * math.pow(r, -alpha_los))
            if bound <= best:
                break
            los = False
            if los_possible:
                los = uniform(key, k) < los_fraction
                k += 1
            if los:
                power = p * a1 * math.pow(r, -alpha_los)
            else:
                power = p * math.pow(r, -alpha_nlos)
            if power > best:
                best, best_tier, best_r, best_los = power, t, r, los
    if best_tier < 0:
        return None
    p = powers[best_tier]
    if best_los:
        rad = math.sqrt(-2.0 * math.log(uniform(key, k)))
        theta = 2.0 * math.pi * uniform(key, k + 1)
        k += 2
        g_bs = main_bs[best_tier] if abs(sigma * rad * math.cos(theta)) <= half_bw_bs[best_tier] else side_bs[best_tier]
        g_ue = main_ue if abs(sigma * rad * math.sin(theta)) <= half_bw_ue else side_ue
        h = -math.log(uniform(key, k)) / mu
        return p * (g_bs * g_ue) * h * math.pow(best_r, -alpha_los) / noise
    h = -math.log(uniform(key, k)) / mu
    return p * h * math.pow(best_r, -alpha_nlos) / noise


def physical_counts(
    seed, start, stop,
    powers, densities, main_bs, side_bs, half_bw_bs,
    main_ue, side_ue, half_bw_ue,
    los_fraction, los_radius, alpha_los, alpha_nlos, mu, noise, sigma, window,
    thresholds,
):
    """Returns ``(counts, outages)`` over trials ``[start, stop)``."""
    thresholds = [float(v) for v in thresholds]
    counts = np.zeros(len(thresholds), dtype=np.int64)
    outages = 0
    args = (
        [float(v) for v in powers], [float(v) for v in densities],
        [float(v) for v in main_bs], [float(v) for v in side_bs], [float(v) for v in half_bw_bs],
        main_ue, side_ue, half_bw_ue,
        los_fraction, los_radius, alpha_los, alpha_nlos, mu, noise, sigma, window,
    )
    for trial in range(start, stop):
        value = physical_snr(seed, trial, *args)
        if value is None:
            outages += 1
            continue
        for i, t in enumerate(thresholds):
            if value > t:
                counts[i] += 1
    return counts, outages
