"""Monte Carlo oracles for the coverage integrals.

Two simulators are provided:

* branch-mirror: each analytic branch (LOS per alignment state, inner NLOS,
  outer NLOS) is simulated on its own thinned virtual process, mirroring the
  branch integrals term by term.
* physical: the original K-tier network with blockage marks, strongest
  mean-power association, steering errors and Rayleigh fading.

Trials draw from counter-based streams keyed by ``(seed, trial)``, and counts
are reduced as integers, so estimates do not depend on chunking or on the
number of worker threads.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._backend import kernels as _default_kernels
from ._backend import load_backend
from .coverage import Alignment, network_alignment
from .errors import DomainError
from .netmodel import BlockageModel, NetworkConfig
from .normalize import PiecewiseDensity, build_los_profile, build_nlos_profiles

VOID_TARGET = 1e-6
DEFAULT_CHUNK = 1 << 16


class SimKind(enum.Enum):
    BRANCH_MIRROR = "branch-mirror"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class SimConfig:
    network: NetworkConfig
    trials: int
    seed: int = 0
    window_radius: Optional[float] = None  # None selects the automatic rule
    kind: SimKind = SimKind.BRANCH_MIRROR
    alignment: Alignment = Alignment.WITH_ERRORS
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if self.window_radius is not None and not self.window_radius > 0.0:
            raise DomainError("window_radius must be positive")
        if self.workers < 1 or self.chunk_size < 1:
            raise DomainError("workers and chunk_size must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    threshold: float
    mean: float
    std_error: float
    trials: int
    branch_means: Optional[Tuple[float, float, float]] = None
    outage_trials: int = 0


def auto_window_radius(densities: Sequence[float]) -> float:
    """Twice the radius at which the sparsest process is empty w.p. 1e-6."""
    positive = [d for d in densities if d > 0.0]
    if not positive:
        raise DomainError("automatic window needs at least one positive density")
    radius = math.sqrt(math.log(1.0 / VOID_TARGET) / (math.pi * min(positive)))
    return 2.0 * radius


def physical_window(sim: SimConfig) -> float:
    if sim.window_radius is not None:
        return sim.window_radius
    net = sim.network
    return max(auto_window_radius([t.density for t in net.tiers]), net.blockage.los_radius)


# ---------------------------------------------------------------- primitives


def sample_ppp(density: float, window_radius: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on the disk of radius ``window_radius``; (n, 2) array."""
    if density < 0.0:
        raise DomainError("density must be non-negative")
    n = rng.poisson(density * math.pi * window_radius ** 2) if density > 0.0 else 0
    r = window_radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def mark_blockage(
    points: np.ndarray, blockage: BlockageModel, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Split points into (LOS, NLOS); only points within the LOS radius can be LOS."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    dist = np.hypot(points[:, 0], points[:, 1])
    coin = rng.random(len(points)) < blockage.los_fraction
    los = (dist <= blockage.los_radius) & coin
    return points[los], points[~los]


def draw_serving_gain(
    beamwidth: float,
    sigma: float,
    levels: Sequence[float],
    rng: np.random.Generator,
    ue_beamwidth: Optional[float] = None,
) -> float:
    err_bs, err_ue = rng.normal(0.0, sigma, size=2) if sigma > 0.0 else (0.0, 0.0)
    ue_bw = beamwidth if ue_beamwidth is None else ue_beamwidth
    bs_main = abs(err_bs) <= beamwidth / 2.0
    ue_main = abs(err_ue) <= ue_bw / 2.0
    index = {(True, True): 0, (True, False): 1, (False, True): 2, (False, False): 3}
    return levels[index[(bs_main, ue_main)]]


# ---------------------------------------------------------------- estimators


def _pack(profile: PiecewiseDensity):
    c = profile.prefactor
    breaks = np.array(profile.breakpoints, dtype=np.float64)
    mass = np.array([c * profile.cumulative_mass(b) for b in profile.breakpoints], dtype=np.float64)
    rates = np.array([c * v for v in profile.values], dtype=np.float64)
    return breaks, mass, rates


def _chunks(trials: int, size: int) -> List[Tuple[int, int]]:
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def _map(fn, chunks, workers):
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def _resolve(backend):
    if backend is None:
        return _default_kernels
    if isinstance(backend, str):
        return load_backend(backend)
    return backend


def _moments(total: int, total_sq: int, n: int) -> Tuple[float, float]:
    mean = total / n
    if n < 2:
        return mean, math.nan
    # exact integer numerator keeps the result independent of reduction order
    var = (n * total_sq - total * total) / (n * (n - 1))
    return mean, math.sqrt(max(var, 0.0) / n)


def branch_mirror_curve(sim: SimConfig, thresholds: Sequence[float], backend=None) -> List[McEstimate]:
    """Branch-mirror estimates at several linear thresholds from one sample set."""
    kern = _resolve(backend)
    net = sim.network
    ch = net.channel
    dist = network_alignment(net, sim.alignment)
    cum = np.cumsum(np.array(dist.weights, dtype=np.float64))
    cum[-1] = 1.0

    packs = [_pack(build_los_profile(net, j)) for j in (1, 2, 3, 4)]
    los_breaks = np.concatenate([p[0] for p in packs])
    los_mass = np.concatenate([p[1] for p in packs])
    los_rates = np.concatenate([p[2] for p in packs])
    los_offsets = np.cumsum([0] + [len(p[0]) for p in packs]).astype(np.int64)
    inner, outer = (_pack(p) for p in build_nlos_profiles(net))
    thr = np.ascontiguousarray(thresholds, dtype=np.float64)

    def run(chunk):
        return kern.branch_mirror_counts(
            sim.seed, chunk[0], chunk[1],
            los_breaks, los_mass, los_rates, los_offsets, cum,
            *inner, *outer,
            ch.alpha_los, ch.alpha_nlos, ch.fading_rate, ch.noise, thr,
        )

    parts = _map(run, _chunks(sim.trials, sim.chunk_size), sim.workers)
    counts = sum((p[0] for p in parts), np.zeros((len(thr), 3), dtype=np.int64))
    sumsq = sum((p[1] for p in parts), np.zeros(len(thr), dtype=np.int64))

    out = []
    n = sim.trials
    for i, t in enumerate(thr):
        branch = tuple(int(c) for c in counts[i])
        mean, se = _moments(sum(branch), int(sumsq[i]), n)
        out.append(McEstimate(float(t), mean, se, n, tuple(b / n for b in branch)))
    return out


def run_branch_mirror(sim: SimConfig, threshold: float, backend=None) -> McEstimate:
    return branch_mirror_curve(sim, [threshold], backend)[0]


def _physical_args(sim: SimConfig):
    net = sim.network
    ch, blk = net.channel, net.blockage
    patterns = [net.tier_bs_pattern(k) for k in range(len(net.tiers))]
    sigma = 0.0 if sim.alignment is Alignment.PERFECT else net.steering_sigma
    return (
        np.array([t.power for t in net.tiers], dtype=np.float64),
        np.array([t.density for t in net.tiers], dtype=np.float64),
        np.array([p.main_gain for p in patterns], dtype=np.float64),
        np.array([p.side_gain for p in patterns], dtype=np.float64),
        np.array([p.beamwidth / 2.0 for p in patterns], dtype=np.float64),
        net.ue_pattern.main_gain, net.ue_pattern.side_gain, net.ue_pattern.beamwidth / 2.0,
        blk.los_fraction, blk.los_radius, ch.alpha_los, ch.alpha_nlos,
        ch.fading_rate, ch.noise, sigma, physical_window(sim),
    )


def physical_curve(sim: SimConfig, thresholds: Sequence[float], backend=None) -> List[McEstimate]:
    """Physical K-tier estimates at several linear thresholds from one sample set.

    Empty windows count as outage (no coverage) and are reported separately.
    """
    kern = _resolve(backend)
    args = _physical_args(sim)
    thr = np.ascontiguousarray(thresholds, dtype=np.float64)

    def run(chunk):
        return kern.physical_counts(sim.seed, chunk[0], chunk[1], *args, thr)

    parts = _map(run, _chunks(sim.trials, sim.chunk_size), sim.workers)
    counts = sum((p[0] for p in parts), np.zeros(len(thr), dtype=np.int64))
    outages = sum(int(p[1]) for p in parts)
    n = sim.trials
    out = []
    for i, t in enumerate(thr):
        hits = int(counts[i])
        mean, se = _moments(hits, hits, n)
        out.append(McEstimate(float(t), mean, se, n, None, outages))
    return out


def run_physical(sim: SimConfig, threshold: float, backend=None) -> McEstimate:
    return physical_curve(sim, [threshold], backend)[0]


def simulate(sim: SimConfig, thresholds: Sequence[float], backend=None) -> List[McEstimate]:
    if sim.kind is SimKind.PHYSICAL:
        return physical_curve(sim, thresholds, backend)
    return branch_mirror_curve(sim, thresholds, backend)
