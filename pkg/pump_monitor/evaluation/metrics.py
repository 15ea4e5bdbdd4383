"""
Module for the evaluation metrics: accuracy, false positive rate (FPR) and true positive detection rate (TPDR).
"""

import logging
from typing import Mapping, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from pump_monitor.core.exceptions import StructuralError, UndefinedMetricError, UsageError
from pump_monitor.models.evaluation import AGGREGATE_SCOPE, EvalRecord
from pump_monitor.models.network import ModelConfig

logger = logging.getLogger()


def _as_arrays(predictions: ArrayLike, labels: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.shape != labels.shape:
        raise StructuralError(f"Got {predictions.size} predictions but {labels.size} labels")
    if predictions.size == 0:
        raise UsageError("Metrics require at least one sample")
    return predictions, labels


def accuracy(predictions: ArrayLike, labels: ArrayLike) -> float:
    """
    Compute the fraction of correctly classified samples.

    :param predictions: Predicted labels.
    :param labels: True labels.
    :return: The accuracy.
    :raises UsageError: If there are no samples.
    :raises StructuralError: If the lengths differ.
    """
    predictions, labels = _as_arrays(predictions, labels)
    return float(np.mean(predictions == labels))


def fpr(predictions: ArrayLike, labels: ArrayLike) -> float:
    """
    Compute the fraction of normal samples classified as abnormal.

    :param predictions: Predicted labels.
    :param labels: True labels.
    :return: The false positive rate.
    :raises UsageError: If there are no samples.
    :raises UndefinedMetricError: If there is no normal sample.
    """
    predictions, labels = _as_arrays(predictions, labels)
    negatives = labels == 0
    if not negatives.any():
        raise UndefinedMetricError("The false positive rate is undefined without normal samples")
    return float(np.mean(predictions[negatives] == 1))


def tpdr_flag(predictions: ArrayLike, labels: ArrayLike) -> Optional[bool]:
    """
    Check whether at least one abnormal sample of a pump was detected.

    :param predictions: Predicted labels of the pump's samples.
    :param labels: True labels of the pump's samples.
    :return: Whether an abnormal sample was detected, or `None` if the pump has no abnormal sample.
    """
    predictions, labels = _as_arrays(predictions, labels)
    positives = labels == 1
    if not positives.any():
        return None
    return bool(np.any(predictions[positives] == 1))


def tpdr(per_pump: Mapping[str, tuple[ArrayLike, ArrayLike]]) -> float:
    """
    Compute the fraction of pumps for which at least one abnormal sample was detected.

    Pumps without abnormal samples are excluded.

    :param per_pump: Predictions and labels by pump ID.
    :return: The true positive detection rate.
    :raises UndefinedMetricError: If no pump has an abnormal sample.
    """
    flags = []
    for pump_id, (predictions, labels) in per_pump.items():
        flag = tpdr_flag(predictions, labels)
        if flag is None:
            logger.warning("Excluding pump '%s' from the TPDR as it has no abnormal sample", pump_id)
            continue
        flags.append(flag)
    if not flags:
        raise UndefinedMetricError("The true positive detection rate is undefined without abnormal samples")
    return sum(flags) / len(flags)


def pump_record(
    scope: str,
    predictions: ArrayLike,
    labels: ArrayLike,
    algorithm: str,
    policy: str = "none",
    config: Optional[ModelConfig] = None,
    mac_count: int = 0,
    **extra,
) -> EvalRecord:
    """
    Build the record of a single pump.

    :param scope: ID of the pump.
    :param predictions: Predicted labels of the pump's evaluation samples.
    :param labels: True labels of the pump's evaluation samples.
    :param algorithm: Name of the evaluated algorithm.
    :param policy: Name of the selection policy.
    :param config: Topology of the network, if any.
    :param mac_count: MAC operations per sample.
    :param extra: Further record fields (e.g. the chosen detector and its parameter).
    :return: The record.
    """
    predictions, labels = _as_arrays(predictions, labels)
    return EvalRecord(
        scope=scope,
        algorithm=algorithm,
        policy=policy,
        config=config,
        accuracy=accuracy(predictions, labels),
        fpr=fpr(predictions, labels) if np.any(labels == 0) else None,
        tpdr_flag=tpdr_flag(predictions, labels),
        sample_count=int(labels.size),
        mac_count=mac_count,
        **extra,
    )


def aggregate_records(records: Sequence[EvalRecord], scope: str = AGGREGATE_SCOPE) -> EvalRecord:
    """
    Aggregate per pump records.

    The accuracy is the unweighted mean over pumps, the FPR the mean over the pumps it is defined for and the TPDR the
    fraction of pumps with a detected abnormal sample (over the pumps that have one). The sample weighted accuracy is
    kept alongside.

    :param records: Per pump records of one run.
    :param scope: Scope of the aggregate record.
    :return: The aggregate record.
    :raises UsageError: If there are no records.
    """
    if not records:
        raise UsageError("Cannot aggregate an empty list of records")

    fprs = [record.fpr for record in records if record.fpr is not None]
    flags = [record.tpdr_flag for record in records if record.tpdr_flag is not None]
    sample_count = sum(record.sample_count for record in records)
    first = records[0]
    return EvalRecord(
        scope=scope,
        algorithm=first.algorithm,
        policy=first.policy,
        config=first.config,
        accuracy=float(np.mean([record.accuracy for record in records])),
        fpr=float(np.mean(fprs)) if fprs else None,
        tpdr=sum(flags) / len(flags) if flags else None,
        sample_count=sample_count,
        mac_count=first.mac_count,
        weighted_accuracy=(
            sum(record.accuracy * record.sample_count for record in records) / sample_count if sample_count else None
        ),
    )
