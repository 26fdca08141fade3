"""Experiment drivers: threshold, beamwidth and LOS-fraction sweeps, and the
coverage-optimal beamwidth search."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .coverage import Alignment, CoverageQuery, CoverageResult, PdfMode, coverage
from .errors import DomainError, PreconditionError
from .netmodel import NetworkConfig, PatternMode, db_to_linear

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
DEG = math.pi / 180.0


class SweepAxis(enum.Enum):
    THRESHOLD_DB = "threshold_db"
    BEAMWIDTH_DEG = "beamwidth_deg"
    LOS_FRACTION = "los_fraction"


@dataclass(frozen=True)
class SweepSpec:
    base: NetworkConfig
    axis: SweepAxis
    grid: Tuple[float, ...]
    threshold_db: Optional[float] = None  # fixed threshold for non-threshold axes
    alignments: Tuple[Alignment, ...] = (Alignment.WITH_ERRORS,)
    mode: PdfMode = PdfMode.PAPER_LITERAL

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        object.__setattr__(self, "alignments", tuple(self.alignments))
        if not self.grid:
            raise DomainError("sweep grid must not be empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise DomainError("sweep grid must be strictly increasing")
        if not self.alignments:
            raise DomainError("sweep needs at least one alignment variant")
        if self.axis is not SweepAxis.THRESHOLD_DB and self.threshold_db is None:
            raise DomainError(f"axis {self.axis.value} needs a fixed threshold_db")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    threshold_db: float
    result: CoverageResult


def _point(spec: SweepSpec, value: float) -> Tuple[NetworkConfig, float]:
    if spec.axis is SweepAxis.THRESHOLD_DB:
        return spec.base, value
    if spec.axis is SweepAxis.BEAMWIDTH_DEG:
        return spec.base.with_beamwidth(value * DEG), spec.threshold_db
    return spec.base.with_los_fraction(value), spec.threshold_db


def sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRow]:
    """One row per (grid value, alignment), ordered by grid value then alignment."""
    tasks = []
    for value in spec.grid:
        config, thr_db = _point(spec, value)
        for alignment in spec.alignments:
            tasks.append((value, thr_db, CoverageQuery(db_to_linear(thr_db), config, spec.mode, alignment)))

    def evaluate(task):
        value, thr_db, query = task
        return SweepRow(value, thr_db, coverage(query))

    if workers <= 1:
        return [evaluate(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, tasks))


@dataclass(frozen=True)
class BeamwidthOptimum:
    beamwidth: float  # radians
    coverage: float
    boundary: Optional[str] = None  # "lower" / "upper" when the maximum sits on the range edge


def _golden_max(f, lo, hi, tol):
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def optimal_beamwidth(
    base: NetworkConfig,
    threshold: float,
    beamwidth_range: Tuple[float, float],
    mode: PdfMode = PdfMode.PAPER_LITERAL,
    grid_step: float = 1.0 * DEG,
    tol: float = 0.1 * DEG,
) -> BeamwidthOptimum:
    """Beamwidth (radians) maximising coverage at linear ``threshold``.

    A coarse grid picks the best bracket, then golden-section search refines
    it to ``tol``.  Only meaningful when the main-lobe gain follows the
    beamwidth, so explicit antenna patterns are rejected.
    """
    if base.bs_pattern.mode is not PatternMode.DERIVED or base.ue_pattern.mode is not PatternMode.DERIVED:
        raise PreconditionError("beamwidth optimisation needs derived antenna patterns")
    if not base.steering_sigma > 0.0:
        raise PreconditionError("beamwidth optimisation needs steering_sigma > 0")
    lo, hi = beamwidth_range
    if not 0.0 < lo <= hi < 2.0 * math.pi:
        raise DomainError("beamwidth range must satisfy 0 < lo <= hi < 2*pi")

    cache = {}

    def f(w):
        if w not in cache:
            cache[w] = coverage(CoverageQuery(threshold, base.with_beamwidth(w), mode)).p_cov
        return cache[w]

    if hi == lo:
        return BeamwidthOptimum(lo, f(lo))

    n = max(2, int(math.ceil((hi - lo) / grid_step)) + 1)
    grid = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    values = [f(w) for w in grid]
    best = max(range(n), key=lambda i: values[i])
    w_star, p_star = _golden_max(f, grid[max(best - 1, 0)], grid[min(best + 1, n - 1)], tol)

    if values[0] >= p_star:
        return BeamwidthOptimum(lo, values[0], "lower")
    if values[-1] >= p_star:
        return BeamwidthOptimum(hi, values[-1], "upper")
    if grid[best] != w_star and values[best] > p_star:
        w_star, p_star = grid[best], values[best]
    return BeamwidthOptimum(w_star, p_star)
