"""Normalization model and coverage analysis for multi-tier mmWave cellular networks."""

from ._backend import BACKEND
from .coverage import (
    Alignment,
    AlignmentDistribution,
    CoverageQuery,
    CoverageResult,
    PdfMode,
    alignment_distribution,
    branch_coverage,
    coverage,
    coverage_curve,
    coverage_los,
    coverage_nlos,
    nearest_pdf,
)
from .errors import ConfigError, DomainError, NumericError, PreconditionError, SingularityError
from .netmodel import (
    AntennaPattern,
    BlockageModel,
    ChannelModel,
    NetworkConfig,
    PatternMode,
    TierConfig,
    db_to_linear,
    directivity_levels,
    linear_to_db,
    los_probability,
    main_lobe_gain,
    path_loss,
)
from .normalize import (
    PiecewiseDensity,
    ScaledTier,
    build_los_profile,
    build_nlos_profiles,
    density_at,
    scale_tier_los,
    scale_tier_nlos,
)

__version__ = "0.1.0"
