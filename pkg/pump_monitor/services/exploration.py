"""
Module for providing a service for exploring network topologies using the `DatasetRepo` repository and
`ResultsStore` store.
"""

import logging
from pathlib import Path

from pump_monitor.evaluation.dse import run_dse
from pump_monitor.evaluation.pareto import pareto_front
from pump_monitor.models.evaluation import DseGrid, ExplorationResult
from pump_monitor.models.network import TrainHyper
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.stores.results import ResultsStore

logger = logging.getLogger()


class ExplorationService:
    """
    Service for the design space exploration.
    """

    def __init__(self, dataset_repository: DatasetRepo, results_store: ResultsStore) -> None:
        """
        Initialise the `ExplorationService` with a `DatasetRepo` repository and a `ResultsStore` store.

        :param dataset_repository: `DatasetRepo` repository to use.
        :param results_store: `ResultsStore` store to use.
        """
        self._dataset_repository = dataset_repository
        self._results_store = results_store

    # pylint:disable=too-many-arguments
    def run(
        self,
        dataset_path: Path,
        results_path: Path,
        pareto_path: Path,
        grid: DseGrid,
        hyper: TrainHyper,
        test_ratio: float = 0.2,
        factor: float = 1.0,
        factor_range: tuple[float, float] = (0.01, 100.0),
        jobs: int = 1,
    ) -> ExplorationResult:
        """
        Explore the grid and write all records and the Pareto optimal ones.

        :param dataset_path: Path of the dataset.
        :param results_path: Path of the CSV file for all records.
        :param pareto_path: Path of the CSV file for the Pareto optimal records.
        :param grid: Depths, kernel sizes and channel counts to explore.
        :param hyper: Training hyperparameters.
        :param test_ratio: Fraction of each pump's samples in the test split.
        :param factor: Factor of the ECNN test inputs.
        :param factor_range: Range of the ECNN training factors.
        :param jobs: Number of worker processes.
        :return: All records and the Pareto front.
        """
        dataset = self._dataset_repository.load(dataset_path)
        records = run_dse(
            dataset, grid, hyper, test_ratio=test_ratio, factor=factor, factor_range=factor_range, jobs=jobs
        )
        front = pareto_front(records)

        self._results_store.write(records, results_path)
        self._results_store.write(front, pareto_path)
        return ExplorationResult(records=records, front=front)
