import numpy as np
import pytest

from mmwave_norm import (
    Alignment,
    CoverageQuery,
    DomainError,
    PdfMode,
    PreconditionError,
    coverage,
    db_to_linear,
)
from mmwave_norm.sweep import SweepAxis, SweepSpec, optimal_beamwidth, sweep

from conftest import DEG, derived_network, manhattan_network

BOTH = (Alignment.PERFECT, Alignment.WITH_ERRORS)


def test_threshold_sweep_ordering(two_tier_network):
    spec = SweepSpec(two_tier_network, SweepAxis.THRESHOLD_DB, (-10, 0, 10), alignments=BOTH)
    rows = sweep(spec)
    assert [(r.axis_value, r.result.method.split("/")[1]) for r in rows] == [
        (v, a.value) for v in (-10.0, 0.0, 10.0) for a in BOTH
    ]
    assert sweep(spec, workers=4) == rows


def test_sweep_perfect_dominates(two_tier_network):
    rows = sweep(SweepSpec(two_tier_network, SweepAxis.THRESHOLD_DB, tuple(range(-10, 31, 5)), alignments=BOTH))
    for perfect, errors in zip(rows[0::2], rows[1::2]):
        assert perfect.result.p_cov >= errors.result.p_cov


def test_los_fraction_sweep_monotone(two_tier_network):
    rows = sweep(SweepSpec(two_tier_network, SweepAxis.LOS_FRACTION, (0.0, 0.117, 1.0), threshold_db=10.0))
    p_los = [r.result.p_los for r in rows]
    assert p_los[0] == 0.0 and p_los[0] <= p_los[1] <= p_los[2]


def test_singleton_grid_matches_direct_call(derived_two_tier):
    row, = sweep(SweepSpec(derived_two_tier, SweepAxis.BEAMWIDTH_DEG, (30.0,), threshold_db=5.0))
    direct = coverage(CoverageQuery(db_to_linear(5.0), derived_two_tier.with_beamwidth(30 * DEG)))
    assert row.result == direct
    assert row.threshold_db == 5.0


def test_sweep_grid_validation(two_tier_network):
    with pytest.raises(DomainError):
        SweepSpec(two_tier_network, SweepAxis.THRESHOLD_DB, (1.0, 1.0))
    with pytest.raises(DomainError):
        SweepSpec(two_tier_network, SweepAxis.THRESHOLD_DB, ())
    with pytest.raises(DomainError):
        SweepSpec(two_tier_network, SweepAxis.BEAMWIDTH_DEG, (10.0, 20.0))


def test_gap_shrinks_with_los_fraction():
    def gap(c):
        net = manhattan_network(los_fraction=c)
        q = lambda a: coverage(CoverageQuery(1.0, net, alignment=a)).p_cov
        return q(Alignment.PERFECT) - q(Alignment.WITH_ERRORS)

    gaps = [gap(c) for c in (1.0, 0.5, 0.117, 0.0)]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert abs(gaps[-1]) <= 1e-12


@pytest.mark.parametrize("mode", list(PdfMode))
@pytest.mark.parametrize("t_db", [0.0, 10.0])
def test_optimum_interior_and_matches_brute_force(derived_two_tier, mode, t_db):
    thr = db_to_linear(t_db)
    best = optimal_beamwidth(derived_two_tier, thr, (5 * DEG, 60 * DEG), mode)
    assert best.boundary is None
    f = lambda w: coverage(CoverageQuery(thr, derived_two_tier.with_beamwidth(w * DEG), mode)).p_cov
    grid = np.arange(5.0, 60.0 + 1e-9, 0.5)
    values = [f(w) for w in grid]
    coarse = grid[int(np.argmax(values))]
    fine = np.arange(coarse - 1.0, coarse + 1.0 + 1e-9, 0.01)
    brute = fine[int(np.argmax([f(w) for w in fine]))]
    # golden-section search stops at 0.1 deg
    assert abs(best.beamwidth / DEG - brute) <= 0.1
    assert best.coverage > max(values[0], values[-1])


def test_optimum_hits_lower_boundary_without_errors():
    net = derived_network(sigma_deg=1e-6)
    best = optimal_beamwidth(net, db_to_linear(10.0), (5 * DEG, 60 * DEG))
    assert best.boundary == "lower" and best.beamwidth == 5 * DEG


def test_optimum_collapsed_range(derived_two_tier):
    best = optimal_beamwidth(derived_two_tier, 1.0, (20 * DEG, 20 * DEG))
    direct = coverage(CoverageQuery(1.0, derived_two_tier.with_beamwidth(20 * DEG))).p_cov
    assert best.beamwidth == 20 * DEG and best.coverage == direct


def test_optimum_preconditions(two_tier_network):
    with pytest.raises(PreconditionError):
        optimal_beamwidth(two_tier_network, 1.0, (5 * DEG, 60 * DEG))
    with pytest.raises(PreconditionError):
        optimal_beamwidth(derived_network(sigma_deg=0.0), 1.0, (5 * DEG, 60 * DEG))
    with pytest.raises(DomainError):
        optimal_beamwidth(derived_network(), 1.0, (60 * DEG, 5 * DEG))
