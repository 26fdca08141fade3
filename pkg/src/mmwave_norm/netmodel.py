"""Physical-layer primitives and domain types for multi-tier mmWave networks.

Sectored antennas, the four beam-alignment directivity levels, the LOS-ball
blockage model, power-law path loss and the noise-limited SNR.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

from .errors import DomainError, SingularityError

TWO_PI = 2.0 * math.pi


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def main_lobe_gain(beamwidth: float, sidelobe_level: float) -> Tuple[float, float]:
    """Main/side lobe gains of a sectored antenna with total radiated power 2*pi.

    Returns ``(M, m)`` with ``m = sidelobe_level`` and M chosen so that
    ``beamwidth * M + (2*pi - beamwidth) * m == 2*pi``.
    """
    if not 0.0 < beamwidth <= TWO_PI:
        raise DomainError(f"beamwidth must lie in (0, 2*pi], got {beamwidth!r}")
    if not 0.0 <= sidelobe_level < 1.0:
        raise DomainError(f"sidelobe level must lie in [0, 1), got {sidelobe_level!r}")
    main = (TWO_PI - (TWO_PI - beamwidth) * sidelobe_level) / beamwidth
    return main, sidelobe_level


class PatternMode(enum.Enum):
    DERIVED = "derived"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class AntennaPattern:
    """Ideal sector antenna.

    Use :meth:`derived` to tie the main-lobe gain to the beamwidth through
    power conservation, or :meth:`explicit` to pin both gains directly.
    """

    mode: PatternMode
    beamwidth: float
    main_gain: float
    side_gain: float
    sidelobe_level: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.beamwidth < TWO_PI:
            raise DomainError(f"beamwidth must lie in (0, 2*pi), got {self.beamwidth!r}")
        if not 0.0 <= self.side_gain < 1.0 < self.main_gain:
            raise DomainError(
                "antenna gains must satisfy 0 <= side_gain < 1 < main_gain, "
                f"got main={self.main_gain!r}, side={self.side_gain!r}"
            )
        if self.mode is PatternMode.DERIVED and self.sidelobe_level is None:
            raise DomainError("derived pattern requires a sidelobe level")

    @classmethod
    def derived(cls, beamwidth: float, sidelobe_level: float) -> "AntennaPattern":
        main, side = main_lobe_gain(beamwidth, sidelobe_level)
        return cls(PatternMode.DERIVED, beamwidth, main, side, sidelobe_level)

    @classmethod
    def explicit(cls, beamwidth: float, main_gain: float, side_gain: float) -> "AntennaPattern":
        return cls(PatternMode.EXPLICIT, beamwidth, main_gain, side_gain)

    def with_beamwidth(self, beamwidth: float) -> "AntennaPattern":
        """Same pattern at another beamwidth; explicit gains are kept as-is."""
        if self.mode is PatternMode.DERIVED:
            return AntennaPattern.derived(beamwidth, self.sidelobe_level)
        return replace(self, beamwidth=beamwidth)


@dataclass(frozen=True)
class TierConfig:
    power: float
    density: float
    beamwidth: Optional[float] = None

    def __post_init__(self):
        if not self.power > 0.0:
            raise DomainError(f"tier power must be positive, got {self.power!r}")
        if not self.density > 0.0:
            raise DomainError(f"tier density must be positive, got {self.density!r}")
        if self.beamwidth is not None and not 0.0 < self.beamwidth < TWO_PI:
            raise DomainError(f"tier beamwidth must lie in (0, 2*pi), got {self.beamwidth!r}")


@dataclass(frozen=True)
class BlockageModel:
    los_fraction: float
    los_radius: float

    def __post_init__(self):
        if not 0.0 <= self.los_fraction <= 1.0:
            raise DomainError(f"los_fraction must lie in [0, 1], got {self.los_fraction!r}")
        if not self.los_radius > 0.0:
            raise DomainError(f"los_radius must be positive, got {self.los_radius!r}")


@dataclass(frozen=True)
class ChannelModel:
    alpha_los: float = 2.0
    alpha_nlos: float = 4.0
    fading_rate: float = 1.0
    noise: float = 1.0

    def __post_init__(self):
        if not self.alpha_los > 0.0:
            raise DomainError("alpha_los must be positive")
        if not self.alpha_los < self.alpha_nlos:
            raise DomainError("alpha_los must be < alpha_nlos")
        if not self.fading_rate > 0.0:
            raise DomainError("fading_rate must be positive")
        if not self.noise > 0.0:
            raise DomainError("noise must be positive")


@dataclass(frozen=True)
class NetworkConfig:
    tiers: Tuple[TierConfig, ...]
    bs_pattern: AntennaPattern
    ue_pattern: AntennaPattern
    blockage: BlockageModel
    channel: ChannelModel = field(default_factory=ChannelModel)
    steering_sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if not self.tiers:
            raise DomainError("network needs at least one tier")
        if not self.steering_sigma >= 0.0:
            raise DomainError("steering_sigma must be non-negative")

    def tier_bs_pattern(self, k: int) -> AntennaPattern:
        """BS antenna of tier ``k``, honouring a per-tier beamwidth override."""
        override = self.tiers[k].beamwidth
        if override is None:
            return self.bs_pattern
        return self.bs_pattern.with_beamwidth(override)

    def tier_levels(self, k: int) -> Tuple[float, float, float, float]:
        return directivity_levels(self.tier_bs_pattern(k), self.ue_pattern)

    def with_beamwidth(self, beamwidth: float) -> "NetworkConfig":
        """Set the shared BS/UE beamwidth and drop per-tier overrides."""
        tiers = tuple(replace(t, beamwidth=None) for t in self.tiers)
        return replace(
            self,
            tiers=tiers,
            bs_pattern=self.bs_pattern.with_beamwidth(beamwidth),
            ue_pattern=self.ue_pattern.with_beamwidth(beamwidth),
        )

    def with_los_fraction(self, los_fraction: float) -> "NetworkConfig":
        return replace(self, blockage=replace(self.blockage, los_fraction=los_fraction))


def directivity_levels(bs: AntennaPattern, ue: AntennaPattern) -> Tuple[float, float, float, float]:
    """Directivity gains ordered main/main, main/side, side/main, side/side."""
    return (
        bs.main_gain * ue.main_gain,
        bs.main_gain * ue.side_gain,
        bs.side_gain * ue.main_gain,
        bs.side_gain * ue.side_gain,
    )


def los_probability(x: float, blockage: BlockageModel) -> float:
    if x < 0.0:
        raise DomainError(f"link length must be non-negative, got {x!r}")
    return blockage.los_fraction if x <= blockage.los_radius else 0.0


def path_loss(x: float, alpha: float) -> float:
    # zero distance is rejected instead of clamped: a PPP never puts a BS at the UE
    if x == 0.0:
        raise SingularityError("path loss is singular at zero distance")
    if x < 0.0:
        raise DomainError(f"link length must be positive, got {x!r}")
    return x ** -alpha


def snr(power: float, gain: float, fading: float, x: float, alpha: float, noise: float) -> float:
    return power * fading * gain * path_loss(x, alpha) / noise


def total_density(tiers: Sequence[TierConfig]) -> float:
    return math.fsum(t.density for t in tiers)
