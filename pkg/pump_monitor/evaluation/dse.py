"""
Module for the design space exploration over network depth, kernel size and channel count.

Instead of the per pump cross-validation, every grid point is trained once on a fixed stratified split and evaluated
on its test part.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from pump_monitor.core.exceptions import UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.data.splits import split_fixed
from pump_monitor.data.statistics import compute_normal_mean
from pump_monitor.detectors.network import (
    build_ecnn_inputs,
    build_raw_inputs,
    build_training_inputs,
    labels_from_outputs,
    predict_outputs,
)
from pump_monitor.evaluation.metrics import aggregate_records, pump_record
from pump_monitor.evaluation.parallel import map_tasks
from pump_monitor.models.evaluation import DseGrid, EvalRecord
from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.models.sample import NORMAL, PumpDataset
from pump_monitor.nn.network import ConvNet, count_macs
from pump_monitor.nn.training import TRAINING_FACTOR_STREAM, task_seed, train

logger = logging.getLogger()

# Scope of the records of the design space exploration
FIXED_SPLIT_SCOPE = "fixed-split"


class ExplorationSettings(NamedTuple):
    """
    Settings shared by all grid points of one exploration.
    """

    hyper: TrainHyper
    # Factor of the ECNN test inputs
    factor: float = 1.0
    factor_range: tuple[float, float] = (0.01, 100.0)


def grid_configs(grid: DseGrid) -> list[ModelConfig]:
    """
    Enumerate the topologies of a grid, depth-major, then kernel size, then channel count.

    Infeasible depths (below 2) are skipped with a warning.

    :param grid: Grid to enumerate.
    :return: Topologies in exploration order.
    """
    configs = []
    for depth in grid.depths:
        if depth < 2:
            logger.warning("Skipping depth %d as a network needs at least 2 layers", depth)
            continue
        for kernel in grid.kernels:
            for channels in grid.channel_counts:
                configs.append(ModelConfig(depth=depth, kernel=kernel, channels=channels, enhanced=grid.enhanced))
    return configs


def _evaluate_point(
    shared: tuple[PumpDataset, PumpDataset, ExplorationSettings], task: tuple[int, ModelConfig]
) -> EvalRecord:
    train_view, test_view, settings = shared
    index, config = task
    logger.info(
        "Exploring %s with depth %d, kernel %d and channels %d",
        config.algorithm,
        config.depth,
        config.kernel,
        config.channels,
    )
    seed = task_seed(settings.hyper.seed, index)
    inputs, labels = build_training_inputs(
        train_view, config.enhanced, Prng(seed).spawn(TRAINING_FACTOR_STREAM), settings.factor_range
    )
    network = train(inputs, labels, config, settings.hyper.model_copy(update={"seed": seed}))

    mac_count = count_macs(config)
    records = []
    for pump_id, samples in test_view.pumps.items():
        predictions = _predict_pump(network, config, train_view, pump_id, samples, settings.factor)
        if predictions is None:
            continue
        records.append(
            pump_record(
                pump_id,
                predictions,
                [sample.label for sample in samples],
                algorithm=config.algorithm,
                config=config,
                mac_count=mac_count,
            )
        )
    if not records:
        raise UsageError("The test split holds no sample that can be evaluated")
    record = aggregate_records(records, scope=FIXED_SPLIT_SCOPE)
    logger.info("Grid point finished with MAC count %d and accuracy %.4f", mac_count, record.accuracy)
    return record


def _predict_pump(
    network: ConvNet, config: ModelConfig, train_view: PumpDataset, pump_id: str, samples, factor: float
) -> Optional[np.ndarray]:
    if not config.enhanced:
        return labels_from_outputs(predict_outputs(network, build_raw_inputs(samples)))

    # The ECNN test inputs use the normal mean of the pump's training samples
    known = train_view.pumps.get(pump_id, [])
    if not any(sample.label == NORMAL for sample in known):
        logger.warning("Skipping test pump '%s' as it has no normal training sample for its mean", pump_id)
        return None
    normal_mean = compute_normal_mean(known)
    return labels_from_outputs(predict_outputs(network, build_ecnn_inputs(samples, normal_mean, factor)))


def run_dse(
    dataset: PumpDataset,
    grid: DseGrid,
    hyper: TrainHyper,
    test_ratio: float = 0.2,
    factor: float = 1.0,
    factor_range: tuple[float, float] = (0.01, 100.0),
    jobs: int = 1,
) -> list[EvalRecord]:
    """
    Train and evaluate every topology of the grid on a fixed split.

    :param dataset: Dataset to explore on.
    :param grid: Depths, kernel sizes and channel counts to explore.
    :param hyper: Training hyperparameters (its seed also selects the split).
    :param test_ratio: Fraction of each pump's samples in the test split.
    :param factor: Factor of the ECNN test inputs.
    :param factor_range: Range of the ECNN training factors.
    :param jobs: Number of worker processes.
    :return: One record per feasible grid point in exploration order.
    :raises UsageError: If the grid holds no feasible topology or the dataset is empty.
    """
    configs = grid_configs(grid)
    if not configs:
        raise UsageError("The design space grid holds no feasible topology")
    if len(dataset) == 0:
        raise UsageError("Cannot explore the design space on an empty dataset")

    train_view, test_view = split_fixed(dataset, test_ratio, hyper.seed)
    logger.info(
        "Exploring %d topologies on %d training and %d test samples", len(configs), len(train_view), len(test_view)
    )
    settings = ExplorationSettings(hyper=hyper, factor=factor, factor_range=factor_range)
    return map_tasks(_evaluate_point, list(enumerate(configs)), (train_view, test_view, settings), jobs)
