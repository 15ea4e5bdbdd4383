"""
Module for providing a service for adapting detectors to a pump using the `DatasetRepo`, `ModelRepo` and
`ProfileRepo` repositories.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from pump_monitor.core.exceptions import UsageError
from pump_monitor.data.splits import split_adaptation
from pump_monitor.data.statistics import compute_normal_mean
from pump_monitor.detectors.combined import build_combined, predict_with_profile
from pump_monitor.detectors.selection import select_factor_fpr, select_threshold_fpr
from pump_monitor.detectors.threshold import threshold_epsilons
from pump_monitor.models.evaluation import Algorithm
from pump_monitor.models.profile import Detector, PumpProfile, SelectionKind, SelectionPolicy
from pump_monitor.models.sample import NormalMean, VibrationSample
from pump_monitor.nn.network import ConvNet
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.repositories.model import ModelRepo
from pump_monitor.repositories.profile import ProfileRepo
from pump_monitor.schemas.summaries import AdaptationResultSchema

logger = logging.getLogger()


class AdaptationService:
    """
    Service for adapting a detector to a pump using only its normal samples.
    """

    def __init__(
        self, dataset_repository: DatasetRepo, model_repository: ModelRepo, profile_repository: ProfileRepo
    ) -> None:
        """
        Initialise the `AdaptationService` with `DatasetRepo`, `ModelRepo` and `ProfileRepo` repositories.

        :param dataset_repository: `DatasetRepo` repository to use.
        :param model_repository: `ModelRepo` repository to use.
        :param profile_repository: `ProfileRepo` repository to use.
        """
        self._dataset_repository = dataset_repository
        self._model_repository = model_repository
        self._profile_repository = profile_repository

    # pylint:disable=too-many-arguments
    def adapt(
        self,
        dataset_path: Path,
        pump_id: str,
        profile_path: Path,
        policy: SelectionPolicy,
        algorithm: Algorithm = Algorithm.COMBINED,
        model_path: Optional[Path] = None,
        adapt_fraction: float = 0.5,
    ) -> AdaptationResultSchema:
        """
        Build and save the profile of a pump.

        The first `adapt_fraction` of the pump's normal samples are used for adaptation.

        :param dataset_path: Path of the dataset holding the pump's samples.
        :param pump_id: ID of the pump.
        :param profile_path: Path to save the profile to.
        :param policy: Selection policy (must be of kind `fpr`, only normal samples are available).
        :param algorithm: `combined`, `ecnn` or `threshold`.
        :param model_path: Path of the trained ECNN (not needed for the threshold detector).
        :param adapt_fraction: Fraction of the normal samples used for adaptation.
        :return: The profile and the false positive rate of its detector on the adaptation normals.
        :raises UsageError: If the pump does not exist, the policy is not FPR based, the algorithm has no pump specific
                            parameter or the model is missing.
        """
        if policy.kind != SelectionKind.FPR:
            raise UsageError(f"Adaptation only supports the 'fpr' selection policy, got '{policy.kind}'")
        if algorithm == Algorithm.CNN:
            raise UsageError("The default CNN has no pump specific parameter to adapt")
        network = None
        if algorithm != Algorithm.THRESHOLD:
            if model_path is None:
                raise UsageError(f"Adapting the '{algorithm}' detector requires a model")
            network = self._model_repository.load(model_path)

        dataset = self._dataset_repository.load(dataset_path)
        if pump_id not in dataset.pumps:
            raise UsageError(f"Pump '{pump_id}' does not exist in the dataset")
        adapt_normals, _ = split_adaptation(dataset.pumps[pump_id], adapt_fraction)
        normal_mean = compute_normal_mean(adapt_normals)
        logger.info(
            "Adapting the %s detector to pump '%s' with %d normal samples", algorithm, pump_id, len(adapt_normals)
        )

        profile = self._build_profile(algorithm, network, adapt_normals, normal_mean, policy, pump_id)
        adaptation_fpr = float(np.mean(predict_with_profile(profile, adapt_normals, network)))
        self._profile_repository.save(profile, profile_path)
        return AdaptationResultSchema(
            profile=profile, adaptation_fpr=adaptation_fpr, adaptation_count=len(adapt_normals)
        )

    def _build_profile(
        self,
        algorithm: Algorithm,
        network: Optional[ConvNet],
        adapt_normals: list[VibrationSample],
        normal_mean: NormalMean,
        policy: SelectionPolicy,
        pump_id: str,
    ) -> PumpProfile:
        if algorithm == Algorithm.COMBINED:
            return build_combined(network, adapt_normals, normal_mean, policy, pump_id)

        if algorithm == Algorithm.THRESHOLD:
            threshold = select_threshold_fpr(threshold_epsilons(adapt_normals, normal_mean), policy.target_fpr)
            return PumpProfile(
                pump_id=pump_id,
                normal_mean=normal_mean,
                threshold=threshold,
                chosen_detector=Detector.THRESHOLD,
                policy=policy,
            )

        factor = select_factor_fpr(network, adapt_normals, normal_mean, policy)
        if factor is None:
            factor = policy.grid[-1]
            logger.warning("No factor reaches the target FPR, using the smallest grid factor %s", factor)
        return PumpProfile(
            pump_id=pump_id, normal_mean=normal_mean, factor=factor, chosen_detector=Detector.ECNN, policy=policy
        )
