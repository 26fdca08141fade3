import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from mmwave_norm import (
    AntennaPattern,
    BlockageModel,
    ChannelModel,
    DomainError,
    SingularityError,
    TierConfig,
    db_to_linear,
    directivity_levels,
    los_probability,
    main_lobe_gain,
    path_loss,
)

from conftest import DEG


@pytest.mark.parametrize(
    "beamwidth, eps, expected",
    [
        (math.pi / 3, 0.1, (5.5, 0.1)),
        (2 * math.pi, 0.1, (1.0, 0.1)),
        (20 * DEG, 0.1, (16.3, 0.1)),  # mpmath: 16.3 exactly
    ],
)
def test_main_lobe_gain_examples(beamwidth, eps, expected):
    main, side = main_lobe_gain(beamwidth, eps)
    assert_allclose((main, side), expected, rtol=1e-13)
    assert abs(beamwidth * main + (2 * math.pi - beamwidth) * side - 2 * math.pi) <= 1e-12


@pytest.mark.parametrize("beamwidth, eps", [(0.0, 0.1), (-1.0, 0.1), (7.0, 0.1), (1.0, 1.0), (1.0, 1.5)])
def test_main_lobe_gain_domain(beamwidth, eps):
    with pytest.raises(DomainError):
        main_lobe_gain(beamwidth, eps)


@given(st.floats(1e-6, 2 * math.pi), st.floats(0.0, 0.999999))
def test_power_conservation(beamwidth, eps):
    main, side = main_lobe_gain(beamwidth, eps)
    assert abs(beamwidth * main + (2 * math.pi - beamwidth) * side - 2 * math.pi) <= 1e-12


def test_directivity_levels():
    p = AntennaPattern.explicit(20 * DEG, 10.0, 0.1)
    assert_allclose(directivity_levels(p, p), (100.0, 1.0, 1.0, 0.01), rtol=1e-15)
    bs = AntennaPattern.explicit(20 * DEG, 5.5, 0.1)
    ue = AntennaPattern.explicit(20 * DEG, 2.0, 0.2)
    assert_allclose(directivity_levels(bs, ue), (11.0, 1.1, 0.2, 0.02), rtol=1e-15)


def test_directivity_levels_degenerate_pattern():
    # M == m is outside the AntennaPattern invariant; a duck-typed stand-in suffices
    class Flat:
        main_gain = side_gain = 0.7

    levels = directivity_levels(Flat, Flat)
    assert len(set(levels)) == 1


@given(st.floats(0.05, 6.2), st.floats(0.0, 0.99))
def test_level_ordering(beamwidth, eps):
    p = AntennaPattern.derived(beamwidth, eps)
    a1, a2, a3, a4 = directivity_levels(p, p)
    assert a1 >= a2 == a3 >= a4
    assert a1 > a4


def test_pattern_invariants():
    with pytest.raises(DomainError):
        AntennaPattern.explicit(20 * DEG, 0.9, 0.1)
    with pytest.raises(DomainError):
        AntennaPattern.explicit(20 * DEG, 10.0, 1.0)
    with pytest.raises(DomainError):
        AntennaPattern.derived(2 * math.pi, 0.1)  # M == 1 is not a directional antenna
    d = AntennaPattern.derived(30 * DEG, 0.1)
    assert d.with_beamwidth(10 * DEG).main_gain > d.main_gain
    e = AntennaPattern.explicit(30 * DEG, 10.0, 0.1)
    assert e.with_beamwidth(10 * DEG).main_gain == 10.0


def test_db_conversion():
    assert db_to_linear(10.0) == 10.0
    assert_allclose(db_to_linear(-10.0), 0.1, rtol=1e-15)


@pytest.mark.parametrize(
    "x, c, d, expected",
    [(100.0, 0.117, 200.0, 0.117), (300.0, 0.117, 200.0, 0.0), (200.0, 1.0, 200.0, 1.0)],
)
def test_los_probability(x, c, d, expected):
    assert los_probability(x, BlockageModel(c, d)) == expected


@given(st.floats(0.0, 1e4))
def test_los_probability_two_valued(x):
    assert los_probability(x, BlockageModel(0.117, 200.0)) in (0.0, 0.117)


def test_los_probability_negative():
    with pytest.raises(DomainError):
        los_probability(-1.0, BlockageModel(0.5, 10.0))


@pytest.mark.parametrize("x, alpha, expected", [(1.0, 2.0, 1.0), (10.0, 2.0, 0.01), (10.0, 4.0, 1e-4)])
def test_path_loss(x, alpha, expected):
    assert_allclose(path_loss(x, alpha), expected, rtol=1e-15)


def test_path_loss_singular():
    with pytest.raises(SingularityError):
        path_loss(0.0, 2.0)


@given(st.floats(1.001, 1e4), st.floats(1.0, 5.0))
def test_path_loss_monotone(x, alpha):
    assert path_loss(x * 1.01, alpha) < path_loss(x, alpha)
    assert path_loss(x, alpha + 0.1) < path_loss(x, alpha)


def test_type_invariants():
    with pytest.raises(DomainError):
        TierConfig(0.0, 1.0)
    with pytest.raises(DomainError):
        TierConfig(1.0, -1.0)
    with pytest.raises(DomainError):
        TierConfig(1.0, 1.0, beamwidth=7.0)
    with pytest.raises(DomainError):
        BlockageModel(1.5, 200.0)
    with pytest.raises(DomainError, match="alpha_los must be < alpha_nlos"):
        ChannelModel(alpha_los=4.0, alpha_nlos=2.0)


def test_conservation_vectorised_sample():
    rng = np.random.default_rng(0)
    errors = []
    for w, e in zip(rng.uniform(1e-3, 2 * math.pi, 200), rng.uniform(0, 0.999, 200)):
        m, s = main_lobe_gain(w, e)
        errors.append(abs(w * m + (2 * math.pi - w) * s - 2 * math.pi))
    assert max(errors) <= 1e-12
