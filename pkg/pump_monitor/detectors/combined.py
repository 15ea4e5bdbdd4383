"""
Module for the combined approach and for predicting with an adapted pump profile.

For each pump the ECNN is used if a factor reaching the target false positive rate on the adaptation normals exists,
otherwise the pump falls back to the threshold detector.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import UsageError
from pump_monitor.detectors.network import cnn_predict_all, ecnn_predict_all
from pump_monitor.detectors.selection import select_factor_fpr, select_threshold_fpr
from pump_monitor.detectors.threshold import threshold_epsilons, threshold_predict_all
from pump_monitor.models.profile import Detector, PumpProfile, SelectionKind, SelectionPolicy
from pump_monitor.models.sample import NormalMean, VibrationSample
from pump_monitor.nn.network import ConvNet

logger = logging.getLogger()


def build_combined(
    network: ConvNet,
    adapt_normals: Sequence[VibrationSample],
    normal_mean: NormalMean,
    policy: SelectionPolicy,
    pump_id: str,
) -> PumpProfile:
    """
    Build the profile of a pump for the combined approach.

    :param network: Trained ECNN.
    :param adapt_normals: Normal adaptation samples of the pump.
    :param normal_mean: Normal mean of the pump computed from the adaptation normals.
    :param policy: Selection policy (must be of kind `fpr`).
    :param pump_id: ID of the pump.
    :return: Complete profile with either the ECNN and its factor or the threshold detector and its threshold.
    :raises UsageError: If the policy is not FPR based or the adaptation samples are invalid.
    """
    if policy.kind != SelectionKind.FPR:
        raise UsageError(f"The combined approach requires the 'fpr' selection policy, got '{policy.kind}'")

    factor = select_factor_fpr(network, adapt_normals, normal_mean, policy)
    if factor is not None:
        logger.info("Pump '%s' uses the ECNN with factor %s", pump_id, factor)
        return PumpProfile(
            pump_id=pump_id, normal_mean=normal_mean, factor=factor, chosen_detector=Detector.ECNN, policy=policy
        )

    threshold = select_threshold_fpr(threshold_epsilons(adapt_normals, normal_mean), policy.target_fpr)
    logger.info("No factor reaches the target FPR for pump '%s', falling back to threshold %s", pump_id, threshold)
    return PumpProfile(
        pump_id=pump_id,
        normal_mean=normal_mean,
        threshold=threshold,
        chosen_detector=Detector.THRESHOLD,
        policy=policy,
    )


def predict_with_profile(
    profile: PumpProfile, samples: Sequence[VibrationSample], network: Optional[ConvNet] = None
) -> NDArray[np.int64]:
    """
    Predict samples of a pump with the detector chosen in its profile.

    :param profile: Profile of the pump.
    :param samples: Samples to predict.
    :param network: Trained network (required for the CNN and ECNN detectors).
    :return: Labels.
    :raises UsageError: If the profile has no chosen detector or the network is missing.
    """
    if profile.chosen_detector is None:
        raise UsageError(f"Profile of pump '{profile.pump_id}' has no chosen detector")
    if profile.chosen_detector == Detector.THRESHOLD:
        return threshold_predict_all(threshold_epsilons(samples, profile.normal_mean), profile.threshold)

    if network is None:
        raise UsageError(f"The '{profile.chosen_detector}' detector requires a network")
    if profile.chosen_detector == Detector.CNN:
        return cnn_predict_all(network, samples)
    return ecnn_predict_all(network, samples, profile.normal_mean, profile.factor)
