"""
Module for selecting the pump specific parameters `T_i` (threshold detector) and `F_i` (ECNN).

Three policies are supported:
- `optimal`: the parameter maximizing accuracy on labelled samples of the pump itself (an oracle, labelled data of a
  new pump is not available in practice).
- `fixed`: a single global parameter maximizing the mean accuracy over the training pumps.
- `fpr`: the parameter is tuned on normal adaptation samples only, tracking the false positive rate.
"""

import logging
import sys
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import UsageError
from pump_monitor.data.statistics import compute_normal_mean
from pump_monitor.detectors.network import build_ecnn_inputs, labels_from_outputs, predict_outputs
from pump_monitor.detectors.threshold import threshold_epsilons
from pump_monitor.models.profile import Detector, SelectionPolicy
from pump_monitor.models.sample import ABNORMAL, NORMAL, NormalMean, PumpDataset, VibrationSample
from pump_monitor.nn.network import ConvNet

logger = logging.getLogger()

# Relative margin of the candidate threshold above the largest deviation
GUARD_MARGIN = 1e-6
# Number of pooled deviation quantiles tried when searching the global threshold
FIXED_THRESHOLD_CANDIDATES = 256


def _guard(max_epsilon: float) -> float:
    if max_epsilon > 0.0:
        return max_epsilon * (1.0 + GUARD_MARGIN)
    return sys.float_info.min


def threshold_candidates(epsilons: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Return the thresholds that can change a classification of the given deviations.

    These are the sorted unique deviations together with a guard just above the largest one, which classifies every
    given deviation as normal.

    :param epsilons: Deviations.
    :return: Ascending candidate thresholds.
    """
    unique = np.unique(np.asarray(epsilons, dtype=np.float64))
    return np.append(unique, _guard(float(unique[-1])))


def select_threshold_fpr(epsilons: Sequence[float] | NDArray[np.float64], target_fpr: float) -> float:
    """
    Select the smallest candidate threshold whose false positive rate on the adaptation deviations is below the
    target.

    :param epsilons: Deviations of the adaptation normals.
    :param target_fpr: Target false positive rate.
    :return: Selected threshold.
    :raises UsageError: If there are no adaptation deviations.
    """
    epsilons = np.asarray(epsilons, dtype=np.float64)
    if epsilons.size == 0:
        raise UsageError("Threshold selection requires at least one adaptation sample")

    for candidate in threshold_candidates(epsilons):
        if candidate <= 0.0:
            continue
        fpr = float(np.mean(epsilons >= candidate))
        if fpr < target_fpr:
            logger.debug("Selected threshold %s with adaptation FPR %s", candidate, fpr)
            return float(candidate)
    # Unreachable, the guard candidate always yields a false positive rate of 0
    raise UsageError("No threshold candidate reaches the target false positive rate")


def _check_normals(samples: Sequence[VibrationSample]) -> None:
    if not samples:
        raise UsageError("Parameter selection requires at least one adaptation sample")
    if any(sample.label != NORMAL for sample in samples):
        raise UsageError("Adaptation samples must all be normal")


def select_factor_fpr(
    network: ConvNet, adapt_normals: Sequence[VibrationSample], normal_mean: NormalMean, policy: SelectionPolicy
) -> Optional[float]:
    """
    Sweep the factor grid from the largest value down and return the first factor whose false positive rate on the
    adaptation normals is below the target.

    :param network: Trained ECNN.
    :param adapt_normals: Normal adaptation samples of the pump.
    :param normal_mean: Normal mean of the pump.
    :param policy: Selection policy holding the grid and the target.
    :return: The selected grid factor or `None` if no grid factor reaches the target.
    :raises UsageError: If the adaptation samples are empty or contain an abnormal sample.
    """
    _check_normals(adapt_normals)
    for factor in policy.grid:
        predictions = labels_from_outputs(
            predict_outputs(network, build_ecnn_inputs(adapt_normals, normal_mean, factor))
        )
        fpr = float(np.mean(predictions))
        logger.debug("Factor %s gives adaptation FPR %s", factor, fpr)
        if fpr < policy.target_fpr:
            return factor
    return None


def _accuracies(predictions: NDArray[np.int64], labels: NDArray[np.int64]) -> NDArray[np.float64]:
    # One row of predictions per candidate
    return np.mean(predictions == labels[np.newaxis, :], axis=1)


def select_param_optimal(
    family: Detector,
    samples: Sequence[VibrationSample],
    grid: Sequence[float],
    normal_mean: NormalMean,
    network: Optional[ConvNet] = None,
) -> float:
    """
    Select the grid parameter maximizing the accuracy on labelled samples of a pump.

    Ties are broken towards the larger parameter value.

    :param family: `threshold` to select `T_i` or `ecnn` to select `F_i`.
    :param samples: Labelled samples of the pump.
    :param grid: Candidate parameters.
    :param normal_mean: Normal mean of the pump.
    :param network: Trained ECNN (required for the `ecnn` family).
    :return: The selected parameter.
    :raises UsageError: If the samples lack a label class, the grid is empty or the family is unsupported.
    """
    labels = np.array([sample.label for sample in samples], dtype=np.int64)
    if set(labels.tolist()) != {NORMAL, ABNORMAL}:
        raise UsageError("Optimal parameter selection requires both normal and abnormal samples")
    candidates = np.asarray(grid, dtype=np.float64)
    if candidates.size == 0:
        raise UsageError("Optimal parameter selection requires a non-empty grid")

    if family == Detector.THRESHOLD:
        epsilons = threshold_epsilons(samples, normal_mean)
        predictions = (epsilons[np.newaxis, :] >= candidates[:, np.newaxis]).astype(np.int64)
    elif family == Detector.ECNN:
        if network is None:
            raise UsageError("Optimal factor selection requires a network")
        predictions = np.stack(
            [
                labels_from_outputs(predict_outputs(network, build_ecnn_inputs(samples, normal_mean, factor)))
                for factor in candidates
            ]
        )
    else:
        raise UsageError(f"No pump specific parameter exists for the '{family}' detector")

    accuracies = _accuracies(predictions, labels)
    best = np.flatnonzero(accuracies == accuracies.max())
    selected = float(candidates[best].max())
    logger.debug("Selected optimal %s parameter %s with accuracy %s", family, selected, accuracies.max())
    return selected


def _pump_views(dataset: PumpDataset) -> list[tuple[list[VibrationSample], NormalMean]]:
    views = []
    for pump_id, samples in dataset.pumps.items():
        if not any(sample.label == NORMAL for sample in samples):
            logger.warning("Ignoring pump '%s' for the fixed parameter as it has no normal sample", pump_id)
            continue
        views.append((samples, compute_normal_mean(samples)))
    if not views:
        raise UsageError("Fixed parameter selection requires a training pump with normal samples")
    return views


def select_fixed_threshold(dataset: PumpDataset) -> float:
    """
    Select the single global threshold maximizing the mean accuracy over the pumps of a training dataset.

    Each pump's deviations are computed from its own normal mean. The candidates are quantiles of the pooled
    deviations together with a guard above the largest one. Ties are broken towards the larger threshold.

    :param dataset: Training dataset.
    :return: The global threshold.
    :raises UsageError: If no pump has a normal sample.
    """
    views = [(threshold_epsilons(samples, mean), samples) for samples, mean in _pump_views(dataset)]
    pooled = np.concatenate([epsilons for epsilons, _ in views])
    candidates = np.unique(np.quantile(pooled, np.linspace(0.0, 1.0, FIXED_THRESHOLD_CANDIDATES)))
    candidates = np.append(candidates[candidates > 0.0], _guard(float(pooled.max())))

    mean_accuracies = np.zeros(len(candidates))
    for epsilons, samples in views:
        labels = np.array([sample.label for sample in samples], dtype=np.int64)
        predictions = (epsilons[np.newaxis, :] >= candidates[:, np.newaxis]).astype(np.int64)
        mean_accuracies += _accuracies(predictions, labels)
    mean_accuracies /= len(views)

    selected = float(candidates[np.flatnonzero(mean_accuracies == mean_accuracies.max()).max()])
    logger.info("Selected global threshold %s with mean training accuracy %.4f", selected, mean_accuracies.max())
    return selected


def _spread(samples: list[VibrationSample], count: int) -> list[VibrationSample]:
    if len(samples) <= count:
        return samples
    positions = np.unique(np.linspace(0, len(samples) - 1, count).round().astype(np.int64))
    return [samples[position] for position in positions]


def select_fixed_factor(
    network: ConvNet, dataset: PumpDataset, grid: Sequence[float], samples_per_pump: int = 20
) -> float:
    """
    Select the single global factor maximizing the mean accuracy over the pumps of a training dataset.

    Up to `samples_per_pump` evenly spread samples of every pump are evaluated with the pump's own normal mean. Ties
    are broken towards the larger factor.

    :param network: Trained ECNN.
    :param dataset: Training dataset.
    :param grid: Candidate factors.
    :param samples_per_pump: Maximum number of samples evaluated per pump.
    :return: The global factor.
    :raises UsageError: If the grid is empty or no pump has a normal sample.
    """
    if not grid:
        raise UsageError("Fixed factor selection requires a non-empty grid")
    candidates = np.asarray(grid, dtype=np.float64)
    mean_accuracies = np.zeros(len(candidates))
    views = _pump_views(dataset)
    for samples, mean in views:
        chosen = _spread(samples, samples_per_pump)
        labels = np.array([sample.label for sample in chosen], dtype=np.int64)
        predictions = np.stack(
            [
                labels_from_outputs(predict_outputs(network, build_ecnn_inputs(chosen, mean, factor)))
                for factor in candidates
            ]
        )
        mean_accuracies += _accuracies(predictions, labels)
    mean_accuracies /= len(views)

    selected = float(candidates[np.flatnonzero(mean_accuracies == mean_accuracies.max())].max())
    logger.info("Selected global factor %s with mean training accuracy %.4f", selected, mean_accuracies.max())
    return selected
