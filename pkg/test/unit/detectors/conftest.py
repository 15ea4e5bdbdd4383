"""
Module for providing common test configuration and test fixtures for the detector tests.
"""

from test.mock_data import SMALL_ECNN_CONFIG

import pytest

from pump_monitor.models.network import ModelConfig
from pump_monitor.nn.network import ConvNet

# Network with a single kernel tap reading the x deviation channel
PROBE_CONFIG = ModelConfig(depth=2, kernel=1, channels=1, enhanced=True)


@pytest.fixture(name="always_normal_network")
def fixture_always_normal_network() -> ConvNet:
    """
    Fixture for an ECNN whose raw output is 0 for every input.

    :return: ECNN with zero parameters.
    """
    return ConvNet(SMALL_ECNN_CONFIG)


@pytest.fixture(name="always_abnormal_network")
def fixture_always_abnormal_network() -> ConvNet:
    """
    Fixture for an ECNN whose raw output is 1 for every input.

    :return: ECNN with zero weights and a last layer bias of 1.
    """
    network = ConvNet(SMALL_ECNN_CONFIG)
    network.parameters["conv1.bias"][...] = 1.0
    return network


@pytest.fixture(name="probe_network")
def fixture_probe_network() -> ConvNet:
    """
    Fixture for an ECNN whose raw output grows linearly with the factor.

    The output is the mean of `relu(F * (x - mu_x))` (up to the batchnorm epsilon), so an x axis alternating with
    amplitude `a` around the normal mean is classified as abnormal when `F * a >= 1`.

    :return: ECNN reading only the x deviation channel.
    """
    network = ConvNet(PROBE_CONFIG)
    network.parameters["conv0.weight"][0, 3, 0] = 1.0
    network.parameters["conv1.weight"][0, 0, 0] = 1.0
    return network
