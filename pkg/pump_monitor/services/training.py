"""
Module for providing a service for training networks using the `DatasetRepo` and `ModelRepo` repositories.
"""

import logging
from pathlib import Path

from pump_monitor.core.prng import Prng
from pump_monitor.detectors.network import build_training_inputs, labels_from_outputs, predict_outputs
from pump_monitor.evaluation.metrics import accuracy
from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.nn.network import count_macs
from pump_monitor.nn.training import TRAINING_FACTOR_STREAM, train
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.repositories.model import ModelRepo
from pump_monitor.schemas.summaries import TrainingSummarySchema

logger = logging.getLogger()


class TrainingService:
    """
    Service for training networks on all pumps of a dataset.
    """

    def __init__(self, dataset_repository: DatasetRepo, model_repository: ModelRepo) -> None:
        """
        Initialise the `TrainingService` with a `DatasetRepo` and a `ModelRepo` repository.

        :param dataset_repository: `DatasetRepo` repository to use.
        :param model_repository: `ModelRepo` repository to use.
        """
        self._dataset_repository = dataset_repository
        self._model_repository = model_repository

    def train(
        self,
        dataset_path: Path,
        model_path: Path,
        config: ModelConfig,
        hyper: TrainHyper,
        factor_range: tuple[float, float] = (0.01, 100.0),
    ) -> TrainingSummarySchema:
        """
        Train a network on every sample of a dataset and save it.

        :param dataset_path: Path of the dataset to train on.
        :param model_path: Path to save the trained network to.
        :param config: Network topology.
        :param hyper: Training hyperparameters.
        :param factor_range: Range the ECNN training factors are drawn from.
        :return: Summary of the training run.
        """
        dataset = self._dataset_repository.load(dataset_path)
        inputs, labels = build_training_inputs(
            dataset, config.enhanced, Prng(hyper.seed).spawn(TRAINING_FACTOR_STREAM), factor_range
        )
        network = train(inputs, labels, config, hyper)
        train_accuracy = accuracy(labels_from_outputs(predict_outputs(network, inputs)), labels)
        logger.info("Trained %s reaches a training accuracy of %.4f", config.algorithm, train_accuracy)

        self._model_repository.save(network, model_path)
        return TrainingSummarySchema(
            algorithm=config.algorithm,
            sample_count=len(inputs),
            train_accuracy=train_accuracy,
            mac_count=count_macs(config),
        )
