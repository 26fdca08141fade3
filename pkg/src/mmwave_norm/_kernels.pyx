# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Monte Carlo kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np

from libc.math cimport INFINITY, M_PI, cos, fabs, log, pow, sin, sqrt
from libc.stdint cimport int64_t, uint64_t

NAME = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef uint64_t STEP = 0xD1B54A32D192ED03ULL
cdef double UNIT = 2.220446049250313e-16  # 2**-52


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = z + GOLDEN
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t trial_key(uint64_t seed, uint64_t trial) noexcept nogil:
    return mix64(mix64(seed) ^ trial)


cdef inline double uniform(uint64_t key, uint64_t k) noexcept nogil:
    cdef uint64_t z = mix64(key ^ ((k + 1) * STEP))
    return (<double>(z >> 12) + 0.5) * UNIT


def uniforms(uint64_t seed, Py_ssize_t start, Py_ssize_t stop, uint64_t k):
    out = np.empty(stop - start, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t t
    with nogil:
        for t in range(start, stop):
            o[t - start] = uniform(trial_key(seed, <uint64_t>t), k)
    return out


cdef inline double nearest(double energy, const double[::1] breaks, const double[::1] mass,
                           const double[::1] rates, Py_ssize_t b0, Py_ssize_t b1,
                           Py_ssize_t r0) noexcept nogil:
    cdef double lo2 = 0.0
    cdef double m = 0.0
    cdef Py_ssize_t i
    for i in range(b0, b1):
        if energy <= mass[i]:
            return sqrt(lo2 + (energy - m) / (M_PI * rates[r0 + i - b0]))
        lo2 = breaks[i] * breaks[i]
        m = mass[i]
    if rates[r0 + b1 - b0] > 0.0:
        return sqrt(lo2 + (energy - m) / (M_PI * rates[r0 + b1 - b0]))
    return INFINITY


def branch_mirror_counts(
    uint64_t seed, Py_ssize_t start, Py_ssize_t stop,
    const double[::1] los_breaks, const double[::1] los_mass, const double[::1] los_rates,
    const int64_t[::1] los_offsets, const double[::1] cum_weights,
    const double[::1] inner_breaks, const double[::1] inner_mass, const double[::1] inner_rates,
    const double[::1] outer_breaks, const double[::1] outer_mass, const double[::1] outer_rates,
    double alpha_los, double alpha_nlos, double mu, double noise, const double[::1] thresholds,
):
    cdef Py_ssize_t n_thr = thresholds.shape[0]
    counts_arr = np.zeros((n_thr, 3), dtype=np.int64)
    sumsq_arr = np.zeros(n_thr, dtype=np.int64)
    cdef int64_t[:, ::1] counts = counts_arr
    cdef int64_t[::1] sumsq = sumsq_arr
    cdef Py_ssize_t t, i, j, y
    cdef uint64_t key
    cdef double us, x, s0, s1, s2
    cdef Py_ssize_t n_inner = inner_breaks.shape[0]
    cdef Py_ssize_t n_outer = outer_breaks.shape[0]
    with nogil:
        for t in range(start, stop):
            key = trial_key(seed, <uint64_t>t)
            us = uniform(key, 0)
            j = 0
            while j < 3 and us >= cum_weights[j]:
                j += 1
            x = nearest(-log(uniform(key, 1)), los_breaks, los_mass, los_rates,
                        los_offsets[j], los_offsets[j + 1], los_offsets[j] + j)
            s0 = (-log(uniform(key, 2)) / mu) * pow(x, -alpha_los) / noise
            x = nearest(-log(uniform(key, 3)), inner_breaks, inner_mass, inner_rates, 0, n_inner, 0)
            s1 = (-log(uniform(key, 4)) / mu) * pow(x, -alpha_nlos) / noise
            x = nearest(-log(uniform(key, 5)), outer_breaks, outer_mass, outer_rates, 0, n_outer, 0)
            s2 = (-log(uniform(key, 6)) / mu) * pow(x, -alpha_nlos) / noise
            for i in range(n_thr):
                y = 0
                if s0 > thresholds[i]:
                    counts[i, 0] += 1
                    y += 1
                if s1 > thresholds[i]:
                    counts[i, 1] += 1
                    y += 1
                if s2 > thresholds[i]:
                    counts[i, 2] += 1
                    y += 1
                sumsq[i] += y * y
    return counts_arr, sumsq_arr


cdef double physical_trial(
    uint64_t seed, uint64_t trial,
    const double[::1] powers, const double[::1] densities,
    const double[::1] main_bs, const double[::1] side_bs, const double[::1] half_bw_bs,
    double main_ue, double side_ue, double half_bw_ue,
    double los_fraction, double los_radius, double alpha_los, double alpha_nlos,
    double mu, double noise, double sigma, double window,
) noexcept nogil:
    """Serving SNR of one trial; -1 flags an empty window."""
    cdef uint64_t key = trial_key(seed, trial)
    cdef uint64_t k = 0
    cdef double best = 0.0, best_r = 0.0, lam, p, a1, r2, r, e, bound, power, los_bound
    cdef double rad, theta, g_bs, g_ue, h
    cdef Py_ssize_t best_tier = -1, t
    cdef bint best_los = False, los, los_possible
    for t in range(powers.shape[0]):
        lam = densities[t]
        if lam <= 0.0:
            continue
        p = powers[t]
        a1 = main_bs[t] * main_ue
        r2 = 0.0
        while True:
            e = -log(uniform(key, k))
            k += 1
            r2 += e / (M_PI * lam)
            r = sqrt(r2)
            if r > window:
                break
            los_possible = r <= los_radius and los_fraction > 0.0
            bound = p * pow(r, -alpha_nlos)
            if los_possible:
                los_bound = p * a1 * pow(r, -alpha_los)
                if los_bound > bound:
                    bound = los_bound
            if bound <= best:
                break
            los = False
            if los_possible:
                los = uniform(key, k) < los_fraction
                k += 1
            if los:
                power = p * a1 * pow(r, -alpha_los)
            else:
                power = p * pow(r, -alpha_nlos)
            if power > best:
                best = power
                best_tier = t
                best_r = r
                best_los = los
    if best_tier < 0:
        return -1.0
    p = powers[best_tier]
    if best_los:
        rad = sqrt(-2.0 * log(uniform(key, k)))
        theta = 2.0 * M_PI * uniform(key, k + 1)
        k += 2
        g_bs = main_bs[best_tier] if fabs(sigma * rad * cos(theta)) <= half_bw_bs[best_tier] else side_bs[best_tier]
        g_ue = main_ue if fabs(sigma * rad * sin(theta)) <= half_bw_ue else side_ue
        h = -log(uniform(key, k)) / mu
        return p * (g_bs * g_ue) * h * pow(best_r, -alpha_los) / noise
    h = -log(uniform(key, k)) / mu
    return p * h * pow(best_r, -alpha_nlos) / noise


def physical_snr(
    uint64_t seed, uint64_t trial,
    powers, densities, main_bs, side_bs, half_bw_bs,
    double main_ue, double side_ue, double half_bw_ue,
    double los_fraction, double los_radius, double alpha_los, double alpha_nlos,
    double mu, double noise, double sigma, double window,
):
    cdef double value = physical_trial(
        seed, trial,
        np.ascontiguousarray(powers, dtype=np.float64), np.ascontiguousarray(densities, dtype=np.float64),
        np.ascontiguousarray(main_bs, dtype=np.float64), np.ascontiguousarray(side_bs, dtype=np.float64),
        np.ascontiguousarray(half_bw_bs, dtype=np.float64),
        main_ue, side_ue, half_bw_ue, los_fraction, los_radius, alpha_los, alpha_nlos,
        mu, noise, sigma, window,
    )
    return None if value < 0.0 else value


def physical_counts(
    uint64_t seed, Py_ssize_t start, Py_ssize_t stop,
    const double[::1] powers, const double[::1] densities,
    const double[::1] main_bs, const double[::1] side_bs, const double[::1] half_bw_bs,
    double main_ue, double side_ue, double half_bw_ue,
    double los_fraction, double los_radius, double alpha_los, double alpha_nlos,
    double mu, double noise, double sigma, double window,
    const double[::1] thresholds,
):
    cdef Py_ssize_t n_thr = thresholds.shape[0]
    counts_arr = np.zeros(n_thr, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef int64_t outages = 0
    cdef Py_ssize_t t, i
    cdef double value
    with nogil:
        for t in range(start, stop):
            value = physical_trial(
                seed, <uint64_t>t, powers, densities, main_bs, side_bs, half_bw_bs,
                main_ue, side_ue, half_bw_ue, los_fraction, los_radius, alpha_los, alpha_nlos,
                mu, noise, sigma, window,
            )
            if value < 0.0:
                outages += 1
                continue
            for i in range(n_thr):
                if value > thresholds[i]:
                    counts[i] += 1
    return counts_arr, outages
