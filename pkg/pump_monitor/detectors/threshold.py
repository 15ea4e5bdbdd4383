"""
Module for the threshold detector.

A sample's deviation `epsilon` is the mean squared deviation of all of its datapoints from the pump's normal mean. The
sample is normal if `epsilon < T` for the pump specific threshold `T` and abnormal otherwise.
"""

from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import UsageError
from pump_monitor.models.sample import NormalMean, VibrationSample


def threshold_epsilon(sample: VibrationSample, normal_mean: NormalMean) -> float:
    """
    Compute the mean squared deviation of a sample from the normal mean.

    `epsilon = 1 / (3 * 800) * sum_{d in x,y,z} sum_k (d_k - mu_d)^2`

    :param sample: Sample to score.
    :param normal_mean: Normal mean of the sample's pump.
    :return: The deviation.
    """
    return float(np.mean((sample.signal - normal_mean.as_array()[:, np.newaxis]) ** 2))


def threshold_epsilons(samples: Sequence[VibrationSample], normal_mean: NormalMean) -> NDArray[np.float64]:
    """
    Compute `threshold_epsilon` for several samples.

    :param samples: Samples to score.
    :param normal_mean: Normal mean of the samples' pump.
    :return: Deviations in sample order.
    """
    if not samples:
        return np.zeros(0)
    signals = np.stack([sample.signal for sample in samples])
    return np.mean((signals - normal_mean.as_array()[np.newaxis, :, np.newaxis]) ** 2, axis=(1, 2))


def threshold_predict(epsilon: float, threshold: Optional[float]) -> int:
    """
    Classify a deviation.

    :param epsilon: Deviation of the sample.
    :param threshold: Pump specific threshold.
    :return: `0` if `epsilon < threshold`, else `1`.
    :raises UsageError: If the threshold is unset.
    """
    if threshold is None:
        raise UsageError("Threshold prediction requires a threshold")
    return 0 if epsilon < threshold else 1


def threshold_predict_all(epsilons: NDArray[np.float64], threshold: Optional[float]) -> NDArray[np.int64]:
    """
    Classify several deviations with `threshold_predict`.

    :param epsilons: Deviations.
    :param threshold: Pump specific threshold.
    :return: Labels.
    :raises UsageError: If the threshold is unset.
    """
    if threshold is None:
        raise UsageError("Threshold prediction requires a threshold")
    return (np.asarray(epsilons) >= threshold).astype(np.int64)
