import math

import pytest

from mmwave_norm import AntennaPattern, BlockageModel, ChannelModel, NetworkConfig, TierConfig

DEG = math.pi / 180.0

TWO_TIERS = (TierConfig(1.0, 1 / 200), TierConfig(5.0, 1 / 500))


def manhattan_network(los_fraction=0.117, sigma_deg=4.0, channel=None):
    """Two-tier network with M=10 dB, m=-10 dB explicit sector antennas."""
    pattern = AntennaPattern.explicit(20 * DEG, 10.0, 0.1)
    return NetworkConfig(
        tiers=TWO_TIERS,
        bs_pattern=pattern,
        ue_pattern=pattern,
        blockage=BlockageModel(los_fraction, 200.0),
        channel=channel or ChannelModel(),
        steering_sigma=sigma_deg * DEG,
    )


def derived_network(beamwidth_deg=20.0, sigma_deg=4.0, los_fraction=0.117):
    pattern = AntennaPattern.derived(beamwidth_deg * DEG, 0.1)
    return NetworkConfig(
        tiers=TWO_TIERS,
        bs_pattern=pattern,
        ue_pattern=pattern,
        blockage=BlockageModel(los_fraction, 200.0),
        steering_sigma=sigma_deg * DEG,
    )


@pytest.fixture
def two_tier_network():
    return manhattan_network()


@pytest.fixture
def derived_two_tier():
    return derived_network()
