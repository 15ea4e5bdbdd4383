"""
Module for providing common test configuration, test fixtures, and helper functions.
"""

from pathlib import Path

import orjson
import pytest

from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.repositories.model import ModelRepo
from pump_monitor.repositories.profile import ProfileRepo


@pytest.fixture(name="dataset_repository")
def fixture_dataset_repository() -> DatasetRepo:
    """
    Fixture to create a `DatasetRepo` instance.

    :return: `DatasetRepo` instance.
    """
    return DatasetRepo()


@pytest.fixture(name="model_repository")
def fixture_model_repository() -> ModelRepo:
    """
    Fixture to create a `ModelRepo` instance.

    :return: `ModelRepo` instance.
    """
    return ModelRepo()


@pytest.fixture(name="profile_repository")
def fixture_profile_repository() -> ProfileRepo:
    """
    Fixture to create a `ProfileRepo` instance.

    :return: `ProfileRepo` instance.
    """
    return ProfileRepo()


class RepositoryTestHelpers:
    """
    A utility class containing common helper methods for the repository tests.
    """

    @staticmethod
    def write_lines(path: Path, lines: list) -> None:
        """
        Write a file with one line per entry. Strings are written as they are, anything else as JSON.

        :param path: Path of the file to write.
        :param lines: Lines to write.
        """
        with path.open("wb") as file:
            for line in lines:
                file.write(line.encode("utf-8") if isinstance(line, str) else orjson.dumps(line))
                file.write(b"\n")

    @staticmethod
    def sample_document(pump_id: str = "pump-a", label: int = 0, length: int = 800) -> dict:
        """
        Create the document of a sample with constant axes.

        :param pump_id: ID of the pump.
        :param label: Label of the sample.
        :param length: Number of datapoints per axis.
        :return: Created document.
        """
        return {"pump_id": pump_id, "label": label, "x": [0.5] * length, "y": [0.0] * length, "z": [-0.5] * length}
