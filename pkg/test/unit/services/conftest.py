"""
Module for providing common test configuration and test fixtures.
"""

from unittest.mock import Mock

import pytest

from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.repositories.model import ModelRepo
from pump_monitor.repositories.profile import ProfileRepo
from pump_monitor.services.adaptation import AdaptationService
from pump_monitor.services.crossval import CrossValidationService
from pump_monitor.services.dataset import DatasetService
from pump_monitor.services.exploration import ExplorationService
from pump_monitor.services.training import TrainingService
from pump_monitor.stores.results import ResultsStore


@pytest.fixture(name="dataset_repository_mock")
def fixture_dataset_repository_mock() -> Mock:
    """
    Fixture to create a mock of the `DatasetRepo` dependency.

    :return: Mocked `DatasetRepo` instance.
    """
    return Mock(DatasetRepo)


@pytest.fixture(name="model_repository_mock")
def fixture_model_repository_mock() -> Mock:
    """
    Fixture to create a mock of the `ModelRepo` dependency.

    :return: Mocked `ModelRepo` instance.
    """
    return Mock(ModelRepo)


@pytest.fixture(name="profile_repository_mock")
def fixture_profile_repository_mock() -> Mock:
    """
    Fixture to create a mock of the `ProfileRepo` dependency.

    :return: Mocked `ProfileRepo` instance.
    """
    return Mock(ProfileRepo)


@pytest.fixture(name="results_store_mock")
def fixture_results_store_mock() -> Mock:
    """
    Fixture to create a mock of the `ResultsStore` dependency.

    :return: Mocked `ResultsStore` instance.
    """
    return Mock(ResultsStore)


@pytest.fixture(name="dataset_service")
def fixture_dataset_service(dataset_repository_mock: Mock) -> DatasetService:
    """
    Fixture to create a `DatasetService` instance with a mocked `DatasetRepo` dependency.

    :param dataset_repository_mock: Mocked `DatasetRepo` instance.
    :return: `DatasetService` instance with the mocked dependency.
    """
    return DatasetService(dataset_repository_mock)


@pytest.fixture(name="training_service")
def fixture_training_service(dataset_repository_mock: Mock, model_repository_mock: Mock) -> TrainingService:
    """
    Fixture to create a `TrainingService` instance with mocked `DatasetRepo` and `ModelRepo` dependencies.

    :param dataset_repository_mock: Mocked `DatasetRepo` instance.
    :param model_repository_mock: Mocked `ModelRepo` instance.
    :return: `TrainingService` instance with the mocked dependencies.
    """
    return TrainingService(dataset_repository_mock, model_repository_mock)


@pytest.fixture(name="crossval_service")
def fixture_crossval_service(dataset_repository_mock: Mock, results_store_mock: Mock) -> CrossValidationService:
    """
    Fixture to create a `CrossValidationService` instance with mocked `DatasetRepo` and `ResultsStore` dependencies.

    :param dataset_repository_mock: Mocked `DatasetRepo` instance.
    :param results_store_mock: Mocked `ResultsStore` instance.
    :return: `CrossValidationService` instance with the mocked dependencies.
    """
    return CrossValidationService(dataset_repository_mock, results_store_mock)


@pytest.fixture(name="exploration_service")
def fixture_exploration_service(dataset_repository_mock: Mock, results_store_mock: Mock) -> ExplorationService:
    """
    Fixture to create an `ExplorationService` instance with mocked `DatasetRepo` and `ResultsStore` dependencies.

    :param dataset_repository_mock: Mocked `DatasetRepo` instance.
    :param results_store_mock: Mocked `ResultsStore` instance.
    :return: `ExplorationService` instance with the mocked dependencies.
    """
    return ExplorationService(dataset_repository_mock, results_store_mock)


@pytest.fixture(name="adaptation_service")
def fixture_adaptation_service(
    dataset_repository_mock: Mock, model_repository_mock: Mock, profile_repository_mock: Mock
) -> AdaptationService:
    """
    Fixture to create an `AdaptationService` instance with mocked `DatasetRepo`, `ModelRepo` and `ProfileRepo`
    dependencies.

    :param dataset_repository_mock: Mocked `DatasetRepo` instance.
    :param model_repository_mock: Mocked `ModelRepo` instance.
    :param profile_repository_mock: Mocked `ProfileRepo` instance.
    :return: `AdaptationService` instance with the mocked dependencies.
    """
    return AdaptationService(dataset_repository_mock, model_repository_mock, profile_repository_mock)
