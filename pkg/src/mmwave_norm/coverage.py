"""Analytical downlink coverage on the normalized network.

Coverage is the sum of three branch terms: the LOS branch, averaged over the
four beam-alignment states, and the inner/outer NLOS branches.  Each term is
``integral exp(-mu*T*N*x**alpha) f(x) dx`` with ``f`` a nearest-point density
of a piecewise-constant profile.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, NumericError
from .netmodel import NetworkConfig, directivity_levels
from .normalize import PiecewiseDensity, build_los_profile, build_nlos_profiles, density_at

QUAD_TOLERANCE = 1e-10
# the integrand is dropped once its exponent falls this far below the segment start
_TRUNCATION_EXPONENT = 40.0


class PdfMode(enum.Enum):
    """How the piecewise density enters the nearest-point law.

    ``PAPER_LITERAL`` plugs the local density into the homogeneous formula,
    with the thinning weight only as a prefactor.  ``RIGOROUS`` uses the void
    probability of the thinned inhomogeneous process.
    """

    PAPER_LITERAL = "paper-literal"
    RIGOROUS = "rigorous"


class Alignment(enum.Enum):
    WITH_ERRORS = "with-errors"
    PERFECT = "perfect"


@dataclass(frozen=True)
class AlignmentDistribution:
    gains: Tuple[float, float, float, float]
    weights: Tuple[float, float, float, float]


@dataclass(frozen=True)
class CoverageQuery:
    threshold: float
    config: NetworkConfig
    mode: PdfMode = PdfMode.PAPER_LITERAL
    alignment: Alignment = Alignment.WITH_ERRORS

    def __post_init__(self):
        if not self.threshold >= 0.0:
            raise DomainError(f"threshold must be non-negative, got {self.threshold!r}")

    @property
    def snr_scale(self) -> float:
        ch = self.config.channel
        return ch.fading_rate * self.threshold * ch.noise


@dataclass(frozen=True)
class CoverageResult:
    p_los: float
    p_nlos_inner: float
    p_nlos_outer: float
    method: str
    ci_halfwidth: Optional[float] = None

    @property
    def p_cov(self) -> float:
        return self.p_los + self.p_nlos_inner + self.p_nlos_outer


def alignment_probability(beamwidth: float, sigma: float) -> float:
    """P(|error| <= beamwidth/2) for a zero-mean Gaussian steering error."""
    if sigma == 0.0:
        return 1.0
    return math.erf(beamwidth / (2.0 * math.sqrt(2.0) * sigma))


def alignment_distribution(
    beamwidth: float,
    sigma: float,
    levels: Sequence[float],
    ue_beamwidth: Optional[float] = None,
) -> AlignmentDistribution:
    if not 0.0 < beamwidth < 2.0 * math.pi:
        raise DomainError(f"beamwidth must lie in (0, 2*pi), got {beamwidth!r}")
    if not sigma >= 0.0:
        raise DomainError(f"sigma must be non-negative, got {sigma!r}")
    q_bs = alignment_probability(beamwidth, sigma)
    q_ue = alignment_probability(beamwidth if ue_beamwidth is None else ue_beamwidth, sigma)
    weights = (q_bs * q_ue, q_bs * (1.0 - q_ue), (1.0 - q_bs) * q_ue, (1.0 - q_bs) * (1.0 - q_ue))
    return AlignmentDistribution(tuple(levels), weights)


def network_alignment(config: NetworkConfig, alignment: Alignment = Alignment.WITH_ERRORS) -> AlignmentDistribution:
    levels = directivity_levels(config.bs_pattern, config.ue_pattern)
    if alignment is Alignment.PERFECT:
        return AlignmentDistribution(levels, (1.0, 0.0, 0.0, 0.0))
    return alignment_distribution(
        config.bs_pattern.beamwidth, config.steering_sigma, levels, config.ue_pattern.beamwidth
    )


def nearest_pdf(profile: PiecewiseDensity, mode: PdfMode, x: float) -> float:
    lam = density_at(profile, x)
    c = profile.prefactor
    if mode is PdfMode.PAPER_LITERAL:
        return c * 2.0 * math.pi * x * lam * math.exp(-math.pi * x * x * lam)
    return c * 2.0 * math.pi * x * lam * math.exp(-c * profile.cumulative_mass(x))


def _excess_power(lo2: float, v: float, half_alpha: float) -> float:
    """(lo2 + v)**half_alpha - lo2**half_alpha without cancellation."""
    if lo2 == 0.0:
        return v ** half_alpha
    return lo2 ** half_alpha * math.expm1(half_alpha * math.log1p(v / lo2))


def branch_coverage(profile: PiecewiseDensity, mode: PdfMode, alpha: float, snr_scale: float) -> float:
    """``integral_0^inf exp(-snr_scale * x**alpha) f(x) dx`` for one branch.

    Integrated segment by segment in ``u = x**2``.  On each segment the
    integrand is divided by its value at the segment start, so the adaptive
    rule works on a function decaying from 1 and keeps relative accuracy for
    tiny contributions.
    """
    c = profile.prefactor
    if c == 0.0:
        return 0.0
    half_alpha = 0.5 * alpha
    total = []
    for lo, hi, lam in profile.segments():
        if lam == 0.0:
            continue
        lo2 = lo * lo
        lam_exp = lam if mode is PdfMode.PAPER_LITERAL else c * lam
        if mode is PdfMode.PAPER_LITERAL:
            log_lead = -math.pi * lam * lo2
        else:
            log_lead = -c * profile.cumulative_mass(lo)
        log_lead -= snr_scale * lo2 ** half_alpha
        lead = c * math.pi * lam * math.exp(log_lead)
        if lead == 0.0:
            continue
        width = hi * hi - lo2 if math.isfinite(hi) else math.inf
        width = min(width, _TRUNCATION_EXPONENT / (math.pi * lam_exp))
        if snr_scale > 0.0 and alpha >= 2.0:
            # superadditivity of t**(alpha/2) bounds the path-loss part of the exponent
            width = min(width, (_TRUNCATION_EXPONENT / snr_scale) ** (1.0 / half_alpha))

        def integrand(v, lam_exp=lam_exp, lo2=lo2):
            return math.exp(-math.pi * lam_exp * v - snr_scale * _excess_power(lo2, v, half_alpha))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            value, err = quad(integrand, 0.0, width, epsabs=0.0, epsrel=1e-12, limit=200)
        # tolerance applies to the segment's contribution, not the normalized integral
        if not lead * err <= QUAD_TOLERANCE:
            raise NumericError(
                f"quadrature did not converge on segment ({lo}, {hi}]", achieved_tolerance=lead * err
            )
        total.append(lead * value)
    return math.fsum(total)


def coverage_los(query: CoverageQuery) -> float:
    cfg = query.config
    if cfg.blockage.los_fraction == 0.0:
        return 0.0
    dist = network_alignment(cfg, query.alignment)
    terms = []
    for j, w in enumerate(dist.weights, start=1):
        if w == 0.0:
            continue
        profile = build_los_profile(cfg, j)
        terms.append(w * branch_coverage(profile, query.mode, cfg.channel.alpha_los, query.snr_scale))
    return math.fsum(terms)


def coverage_nlos(query: CoverageQuery) -> Tuple[float, float]:
    cfg = query.config
    inner, outer = build_nlos_profiles(cfg)
    alpha = cfg.channel.alpha_nlos
    return (
        branch_coverage(inner, query.mode, alpha, query.snr_scale),
        branch_coverage(outer, query.mode, alpha, query.snr_scale),
    )


def method_tag(mode: PdfMode, alignment: Alignment) -> str:
    return f"{mode.value}/{alignment.value}"


def coverage(query: CoverageQuery) -> CoverageResult:
    inner, outer = coverage_nlos(query)
    return CoverageResult(
        p_los=coverage_los(query),
        p_nlos_inner=inner,
        p_nlos_outer=outer,
        method=method_tag(query.mode, query.alignment),
    )


def coverage_curve(
    config: NetworkConfig,
    thresholds: Sequence[float],
    mode: PdfMode = PdfMode.PAPER_LITERAL,
    alignment: Alignment = Alignment.WITH_ERRORS,
):
    """Coverage at each linear threshold."""
    return [coverage(CoverageQuery(t, config, mode, alignment)) for t in thresholds]
