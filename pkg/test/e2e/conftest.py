"""
Module providing test fixtures for the e2e tests.
"""

from pathlib import Path

import pytest

from pump_monitor.cli import main

# Three pumps with four normal and eight abnormal samples each
GENERATE_ARGS = ["--pumps", "3", "--samples", "12"]

# Small network that trains quickly
NETWORK_ARGS = ["--depth", "2", "--kernel", "3", "--channels", "2", "--epochs", "1", "--batch-size", "8"]


@pytest.fixture(name="dataset_path", scope="module")
def fixture_dataset_path(tmp_path_factory) -> Path:
    """
    Fixture for a small synthetic dataset generated through the command line interface.

    :return: Path of the dataset file.
    """
    path = tmp_path_factory.mktemp("data") / "pumps.ndjson"
    assert main(["generate", "-o", str(path), *GENERATE_ARGS]) == 0
    return path


@pytest.fixture(name="ecnn_model_path", scope="module")
def fixture_ecnn_model_path(tmp_path_factory, dataset_path: Path) -> Path:
    """
    Fixture for a small ECNN trained through the command line interface.

    :param dataset_path: Path of the dataset to train on.
    :return: Path of the model file.
    """
    path = tmp_path_factory.mktemp("models") / "ecnn.json"
    assert main(["train", "-d", str(dataset_path), "-o", str(path), "--algo", "ecnn", *NETWORK_ARGS]) == 0
    return path
