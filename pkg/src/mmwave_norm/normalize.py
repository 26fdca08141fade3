"""Map a K-tier network onto one virtual unit-power network.

A BS of power ``p`` seen with directivity ``a`` at distance ``x`` delivers the
same received power as a unit-power BS at ``(p*a)**(-1/alpha) * x``.  Scaling
every tier this way turns the K homogeneous processes into a single radial
process whose density is a step function of the virtual distance.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError
from .netmodel import NetworkConfig, TierConfig

# radii closer than this (relative) are treated as one breakpoint
_MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class ScaledTier:
    scaled_density: float
    scaled_radius: float
    source_tier: int = 0
    gain_state: Optional[int] = None  # None marks NLOS scaling

    def __post_init__(self):
        if not (self.scaled_density > 0.0 and self.scaled_radius > 0.0):
            raise DomainError("scaled density and radius must be positive")


@dataclass(frozen=True)
class PiecewiseDensity:
    """Radial step density.

    ``values[i]`` applies on ``(breakpoints[i-1], breakpoints[i]]`` with an
    implicit leading breakpoint at 0; the last value applies beyond the last
    breakpoint.  ``prefactor`` is the thinning weight (C, 1-C or 1) that
    consumers apply; it is not folded into ``values``.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    prefactor: float = 1.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(bps) + 1:
            raise DomainError("need exactly one more value than breakpoints")
        if any(b <= 0.0 for b in bps[:1]) or any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be positive and strictly increasing")
        if any(not v >= 0.0 for v in vals):
            raise DomainError("densities must be non-negative")
        if not 0.0 <= self.prefactor <= 1.0:
            raise DomainError("prefactor must lie in [0, 1]")

    def segments(self) -> Iterator[Tuple[float, float, float]]:
        """Yield ``(start, end, density)``; the last segment ends at infinity."""
        lo = 0.0
        for b, v in zip(self.breakpoints, self.values):
            yield lo, b, v
            lo = b
        yield lo, math.inf, self.values[-1]

    def cumulative_mass(self, x: float) -> float:
        """Unthinned mean count within radius ``x``: integral of 2*pi*t*density."""
        total = 0.0
        for lo, hi, v in self.segments():
            if x <= lo:
                break
            total += math.pi * v * (min(x, hi) ** 2 - lo * lo)
        return total

    def total_mass(self) -> float:
        if self.values[-1] > 0.0:
            return math.inf
        return self.cumulative_mass(self.breakpoints[-1]) if self.breakpoints else 0.0


def density_at(profile: PiecewiseDensity, x: float) -> float:
    if x < 0.0:
        raise DomainError(f"radius must be non-negative, got {x!r}")
    # right-closed segments: x == breakpoint[i] still belongs to segment i
    return profile.values[bisect_left(profile.breakpoints, x)]


def scale_tier_los(
    tier: TierConfig,
    gain: float,
    alpha_los: float,
    los_radius: float,
    source_tier: int = 0,
    gain_state: Optional[int] = None,
) -> ScaledTier:
    if not gain > 0.0:
        raise DomainError(f"directivity gain must be positive, got {gain!r}")
    factor = tier.power * gain
    return ScaledTier(
        scaled_density=factor ** (2.0 / alpha_los) * tier.density,
        scaled_radius=los_radius * factor ** (-1.0 / alpha_los),
        source_tier=source_tier,
        gain_state=gain_state,
    )


def scale_tier_nlos(tier: TierConfig, alpha_nlos: float, los_radius: float, source_tier: int = 0) -> ScaledTier:
    # NLOS links carry no directivity gain, only the transmit power is normalised
    return ScaledTier(
        scaled_density=tier.power ** (2.0 / alpha_nlos) * tier.density,
        scaled_radius=los_radius * tier.power ** (-1.0 / alpha_nlos),
        source_tier=source_tier,
    )


def _merged(scaled: Sequence[ScaledTier]) -> Tuple[List[float], List[List[float]]]:
    """Sorted distinct radii and, per radius, the densities of tiers ending there."""
    radii: List[float] = []
    groups: List[List[float]] = []
    for s in sorted(scaled, key=lambda s: (s.scaled_radius, s.scaled_density)):
        if radii and math.isclose(s.scaled_radius, radii[-1], rel_tol=_MERGE_RTOL):
            groups[-1].append(s.scaled_density)
        else:
            radii.append(s.scaled_radius)
            groups.append([s.scaled_density])
    return radii, groups


def _suffix_profile(scaled: Sequence[ScaledTier], prefactor: float) -> PiecewiseDensity:
    radii, groups = _merged(scaled)
    values = []
    for i in range(len(groups)):
        values.append(math.fsum(d for g in groups[i:] for d in g))
    values.append(0.0)
    return PiecewiseDensity(tuple(radii), tuple(values), prefactor)


def build_los_profile(config: NetworkConfig, j: int) -> PiecewiseDensity:
    """Virtual density of BSs seen in alignment state ``j`` (1..4) inside their LOS circles."""
    if j not in (1, 2, 3, 4):
        raise DomainError(f"alignment state must be 1..4, got {j!r}")
    ch, blk = config.channel, config.blockage
    scaled = [
        scale_tier_los(tier, config.tier_levels(k)[j - 1], ch.alpha_los, blk.los_radius, k, j)
        for k, tier in enumerate(config.tiers)
    ]
    return _suffix_profile(scaled, blk.los_fraction)


def build_nlos_profiles(config: NetworkConfig) -> Tuple[PiecewiseDensity, PiecewiseDensity]:
    """Inner (within scaled LOS circles) and outer NLOS virtual densities."""
    ch, blk = config.channel, config.blockage
    scaled = [
        scale_tier_nlos(tier, ch.alpha_nlos, blk.los_radius, k)
        for k, tier in enumerate(config.tiers)
    ]
    inner = _suffix_profile(scaled, 1.0 - blk.los_fraction)
    radii, groups = _merged(scaled)
    outer_values = [0.0]
    for i in range(1, len(groups) + 1):
        outer_values.append(math.fsum(d for g in groups[:i] for d in g))
    outer = PiecewiseDensity(tuple(radii), tuple(outer_values), 1.0)
    return inner, outer


def homogeneous_profile(density: float, prefactor: float = 1.0) -> PiecewiseDensity:
    """Constant density everywhere (no breakpoints)."""
    return PiecewiseDensity((), (density,), prefactor)
