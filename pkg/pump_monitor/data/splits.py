"""
Module for splitting datasets into training, test, adaptation and evaluation parts.
"""

import logging
import math
from typing import Sequence

from pump_monitor.core.exceptions import UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.models.sample import ABNORMAL, NORMAL, PumpDataset, VibrationSample

logger = logging.getLogger()

DEFAULT_ADAPT_FRACTION = 0.5


def split_leave_one_pump_out(dataset: PumpDataset, pump_id: str) -> tuple[PumpDataset, PumpDataset]:
    """
    Hold out all samples of one pump.

    :param dataset: Dataset to split.
    :param pump_id: ID of the pump to hold out.
    :return: Tuple with
             - Training view holding every other pump.
             - Test view holding only the held-out pump.
    :raises UsageError: If the pump does not exist.
    """
    if pump_id not in dataset.pumps:
        raise UsageError(f"Pump '{pump_id}' does not exist in the dataset")
    train_view = dataset.subset([other for other in dataset.pump_ids if other != pump_id])
    test_view = dataset.subset([pump_id])
    return train_view, test_view


def split_fixed(dataset: PumpDataset, test_ratio: float, seed: int) -> tuple[PumpDataset, PumpDataset]:
    """
    Split every pump's samples into training and test samples, stratified by label.

    Each label class of each pump contributes `round(test_ratio * count)` randomly chosen samples (at least one and
    leaving at least one for training) to the test view. Classes with fewer than two samples go wholly to training.
    Both views keep the stored sample order.

    :param dataset: Dataset to split.
    :param test_ratio: Fraction of samples placed in the test view.
    :param seed: Seed of the random selection.
    :return: Tuple with the training view and the test view.
    :raises UsageError: If the ratio is not in (0, 1).
    """
    if not 0.0 < test_ratio < 1.0:
        raise UsageError(f"Test ratio must be in (0, 1), got {test_ratio}")

    prng = Prng(seed)
    train_pumps: dict[str, list[VibrationSample]] = {}
    test_pumps: dict[str, list[VibrationSample]] = {}
    for index, (pump_id, samples) in enumerate(dataset.pumps.items()):
        pump_prng = prng.spawn(index)
        test_positions: set[int] = set()
        for label in (NORMAL, ABNORMAL):
            positions = [position for position, sample in enumerate(samples) if sample.label == label]
            if len(positions) < 2:
                if positions:
                    logger.warning(
                        "Pump '%s' has fewer than 2 samples with label %d, placing them in the training set",
                        pump_id,
                        label,
                    )
                continue
            count = min(max(1, math.floor(test_ratio * len(positions) + 0.5)), len(positions) - 1)
            chosen = pump_prng.permutation(len(positions))[:count]
            test_positions.update(positions[int(choice)] for choice in chosen)

        train_samples = [sample for position, sample in enumerate(samples) if position not in test_positions]
        test_samples = [sample for position, sample in enumerate(samples) if position in test_positions]
        if train_samples:
            train_pumps[pump_id] = train_samples
        if test_samples:
            test_pumps[pump_id] = test_samples

    return (
        PumpDataset(pumps=train_pumps, provenance=dataset.provenance),
        PumpDataset(pumps=test_pumps, provenance=dataset.provenance),
    )


def split_adaptation(
    samples: Sequence[VibrationSample], adapt_fraction: float = DEFAULT_ADAPT_FRACTION
) -> tuple[list[VibrationSample], list[VibrationSample]]:
    """
    Split the samples of a held-out pump into adaptation normals and evaluation samples.

    The first `ceil(adapt_fraction * normals)` normal samples in stored order are used for adaptation, everything else
    is kept for evaluation.

    :param samples: Samples of one pump.
    :param adapt_fraction: Fraction of the normal samples used for adaptation.
    :return: Tuple with the adaptation normals and the evaluation samples.
    :raises UsageError: If the pump has fewer than two normal samples or the fraction is not in (0, 1].
    """
    if not 0.0 < adapt_fraction <= 1.0:
        raise UsageError(f"Adaptation fraction must be in (0, 1], got {adapt_fraction}")
    normal_positions = [position for position, sample in enumerate(samples) if sample.label == NORMAL]
    if len(normal_positions) < 2:
        raise UsageError(f"Adaptation requires at least 2 normal samples, got {len(normal_positions)}")

    adapt_positions = set(normal_positions[: math.ceil(adapt_fraction * len(normal_positions))])
    adapt_normals = [samples[position] for position in sorted(adapt_positions)]
    eval_set = [sample for position, sample in enumerate(samples) if position not in adapt_positions]
    return adapt_normals, eval_set
