"""
Module for providing a service for cross-validating detectors using the `DatasetRepo` repository and `ResultsStore`
store.
"""

import logging
from pathlib import Path
from typing import Optional

from pump_monitor.evaluation.crossval import cross_validate
from pump_monitor.models.evaluation import CrossValidationPlan, CrossValidationResult
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.stores.results import ResultsStore

logger = logging.getLogger()


class CrossValidationService:
    """
    Service for running the leave-one-pump-out cross-validation.
    """

    def __init__(self, dataset_repository: DatasetRepo, results_store: ResultsStore) -> None:
        """
        Initialise the `CrossValidationService` with a `DatasetRepo` repository and a `ResultsStore` store.

        :param dataset_repository: `DatasetRepo` repository to use.
        :param results_store: `ResultsStore` store to use.
        """
        self._dataset_repository = dataset_repository
        self._results_store = results_store

    def run(
        self,
        dataset_path: Path,
        results_path: Path,
        plan: CrossValidationPlan,
        pumps: Optional[list[str]] = None,
        jobs: int = 1,
    ) -> CrossValidationResult:
        """
        Cross-validate a detector and write one row per pump followed by the aggregate row.

        :param dataset_path: Path of the dataset.
        :param results_path: Path of the results CSV file.
        :param plan: Algorithm, selection policy and hyperparameters.
        :param pumps: IDs of the pumps to run folds for (all evaluable pumps when unset).
        :param jobs: Number of worker processes.
        :return: Outcome of the cross-validation.
        """
        dataset = self._dataset_repository.load(dataset_path)
        result = cross_validate(dataset, plan, pumps=pumps, jobs=jobs)
        if result.skipped:
            logger.warning("Skipped the folds of pumps %s", result.skipped)

        self._results_store.write([*result.records, result.aggregate], results_path)
        return result
