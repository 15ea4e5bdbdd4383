"""
Module for providing a service for generating synthetic datasets using the `DatasetRepo` repository.
"""

import logging
from pathlib import Path

from pump_monitor.data.synthetic import generate_synthetic
from pump_monitor.models.sample import SyntheticSpec
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.schemas.summaries import DatasetSummarySchema

logger = logging.getLogger()


class DatasetService:
    """
    Service for generating synthetic datasets.
    """

    def __init__(self, dataset_repository: DatasetRepo) -> None:
        """
        Initialise the `DatasetService` with a `DatasetRepo` repository.

        :param dataset_repository: `DatasetRepo` repository to use.
        """
        self._dataset_repository = dataset_repository

    def generate(self, spec: SyntheticSpec, dataset_path: Path) -> DatasetSummarySchema:
        """
        Generate a synthetic dataset and save it.

        :param spec: Parameters of the dataset.
        :param dataset_path: Path to save the dataset to.
        :return: Counts of the generated dataset.
        """
        dataset = generate_synthetic(spec)
        self._dataset_repository.save(dataset, dataset_path)

        normal_count, abnormal_count = dataset.label_counts()
        return DatasetSummarySchema(
            pump_count=len(dataset.pumps),
            sample_count=len(dataset),
            normal_count=normal_count,
            abnormal_count=abnormal_count,
        )
