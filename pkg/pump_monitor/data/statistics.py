"""
Module for computing per pump statistics.
"""

from typing import Iterable

import numpy as np

from pump_monitor.core.exceptions import UsageError
from pump_monitor.models.sample import NORMAL, NormalMean, VibrationSample


def compute_normal_mean(samples: Iterable[VibrationSample]) -> NormalMean:
    """
    Compute the per axis mean over all datapoints of the normal samples.

    Abnormal samples are ignored.

    :param samples: Samples of one pump.
    :return: The normal mean.
    :raises UsageError: If there is no normal sample.
    """
    normals = [sample.signal for sample in samples if sample.label == NORMAL]
    if not normals:
        raise UsageError("Cannot compute the normal mean without any normal sample")
    means = np.stack(normals).mean(axis=(0, 2))
    return NormalMean(mu_x=float(means[0]), mu_y=float(means[1]), mu_z=float(means[2]))
