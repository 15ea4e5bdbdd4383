"""
Module for the leave-one-pump-out cross-validation.

Every fold holds out one pump, trains the network (if any) on all other pumps, adapts to the held-out pump with the
first half of its normal samples and evaluates on the remaining samples.
"""

import logging
from typing import NamedTuple, Optional

from pump_monitor.core.exceptions import BasePumpMonitorError, FoldError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.data.splits import split_adaptation, split_leave_one_pump_out
from pump_monitor.data.statistics import compute_normal_mean
from pump_monitor.detectors.combined import build_combined, predict_with_profile
from pump_monitor.detectors.network import build_training_inputs
from pump_monitor.detectors.selection import (
    select_factor_fpr,
    select_fixed_factor,
    select_fixed_threshold,
    select_param_optimal,
    select_threshold_fpr,
    threshold_candidates,
)
from pump_monitor.detectors.threshold import threshold_epsilons
from pump_monitor.evaluation.metrics import aggregate_records, pump_record
from pump_monitor.evaluation.parallel import map_tasks
from pump_monitor.models.evaluation import Algorithm, CrossValidationPlan, CrossValidationResult, EvalRecord
from pump_monitor.models.profile import Detector, PumpProfile, SelectionKind
from pump_monitor.models.sample import NORMAL, NormalMean, PumpDataset, VibrationSample
from pump_monitor.nn.network import ConvNet, count_macs
from pump_monitor.nn.training import TRAINING_FACTOR_STREAM, task_seed, train

logger = logging.getLogger()


class FoldOutcome(NamedTuple):
    """
    Outcome of a single fold (`record` and `profile` are unset if the fold was skipped).
    """

    pump_id: str
    record: Optional[EvalRecord]
    profile: Optional[PumpProfile]


def _train_fold_network(plan: CrossValidationPlan, train_view: PumpDataset, fold_index: int) -> Optional[ConvNet]:
    config = plan.trained_config
    if config is None:
        return None
    seed = task_seed(plan.training.seed, fold_index)
    inputs, labels = build_training_inputs(
        train_view,
        config.enhanced,
        Prng(seed).spawn(TRAINING_FACTOR_STREAM),
        (plan.train_factor_min, plan.train_factor_max),
    )
    return train(inputs, labels, config, plan.training.model_copy(update={"seed": seed}))


def _threshold_profile(
    plan: CrossValidationPlan,
    pump_id: str,
    normal_mean: NormalMean,
    adapt_normals: list[VibrationSample],
    eval_set: list[VibrationSample],
    train_view: PumpDataset,
) -> PumpProfile:
    policy = plan.policy
    match policy.kind:
        case SelectionKind.OPTIMAL:
            candidates = threshold_candidates(threshold_epsilons(eval_set, normal_mean))
            threshold = select_param_optimal(Detector.THRESHOLD, eval_set, candidates, normal_mean)
        case SelectionKind.FIXED:
            if policy.fixed_value is not None:
                threshold = policy.fixed_value
            else:
                threshold = select_fixed_threshold(train_view)
        case _:
            threshold = select_threshold_fpr(threshold_epsilons(adapt_normals, normal_mean), policy.target_fpr)
    return PumpProfile(
        pump_id=pump_id,
        normal_mean=normal_mean,
        threshold=threshold,
        chosen_detector=Detector.THRESHOLD,
        policy=policy,
    )


def _ecnn_profile(
    plan: CrossValidationPlan,
    network: ConvNet,
    pump_id: str,
    normal_mean: NormalMean,
    adapt_normals: list[VibrationSample],
    eval_set: list[VibrationSample],
    train_view: PumpDataset,
) -> PumpProfile:
    policy = plan.policy
    match policy.kind:
        case SelectionKind.OPTIMAL:
            factor = select_param_optimal(Detector.ECNN, eval_set, policy.grid, normal_mean, network)
        case SelectionKind.FIXED:
            if policy.fixed_value is not None:
                factor = policy.fixed_value
            else:
                factor = select_fixed_factor(network, train_view, policy.grid, plan.fixed_samples_per_pump)
        case _:
            factor = select_factor_fpr(network, adapt_normals, normal_mean, policy)
            if factor is None:
                factor = policy.grid[-1]
                logger.warning(
                    "No factor reaches the target FPR for pump '%s', using the smallest grid factor %s",
                    pump_id,
                    factor,
                )
    return PumpProfile(
        pump_id=pump_id, normal_mean=normal_mean, factor=factor, chosen_detector=Detector.ECNN, policy=policy
    )


def run_fold(dataset: PumpDataset, plan: CrossValidationPlan, pump_id: str, fold_index: int) -> FoldOutcome:
    """
    Run the fold holding out one pump.

    The fold is skipped (with a warning) if the pump has fewer than two normal samples to adapt with.

    :param dataset: Evaluable dataset.
    :param plan: Algorithm, selection policy and hyperparameters.
    :param pump_id: ID of the held-out pump.
    :param fold_index: Index of the pump in the dataset, selects the fold's random stream.
    :return: Outcome of the fold.
    :raises FoldError: If the fold fails.
    """
    try:
        train_view, test_view = split_leave_one_pump_out(dataset, pump_id)
        if pump_id in train_view.pumps:
            raise FoldError(f"Training view of the fold of pump '{pump_id}' contains the held-out pump")
        samples = test_view.pumps[pump_id]
        if sum(sample.label == NORMAL for sample in samples) < 2:
            logger.warning("Skipping the fold of pump '%s' as it has fewer than 2 normal samples", pump_id)
            return FoldOutcome(pump_id=pump_id, record=None, profile=None)

        logger.info("Running the fold of pump '%s' (%d/%d)", pump_id, fold_index + 1, len(dataset.pumps))
        adapt_normals, eval_set = split_adaptation(samples, plan.adapt_fraction)
        # In deployment only the adaptation normals of a new pump are known
        normal_mean = compute_normal_mean(adapt_normals)
        network = _train_fold_network(plan, train_view, fold_index)

        match plan.algorithm:
            case Algorithm.THRESHOLD:
                profile = _threshold_profile(plan, pump_id, normal_mean, adapt_normals, eval_set, train_view)
            case Algorithm.CNN:
                profile = PumpProfile(pump_id=pump_id, normal_mean=normal_mean, chosen_detector=Detector.CNN)
            case Algorithm.ECNN:
                profile = _ecnn_profile(plan, network, pump_id, normal_mean, adapt_normals, eval_set, train_view)
            case _:
                profile = build_combined(network, adapt_normals, normal_mean, plan.policy, pump_id)

        predictions = predict_with_profile(profile, eval_set, network)
        config = plan.trained_config
        record = pump_record(
            pump_id,
            predictions,
            [sample.label for sample in eval_set],
            algorithm=str(plan.algorithm),
            policy=plan.policy_name,
            config=config,
            mac_count=count_macs(config) if config is not None else 0,
            detector=str(profile.chosen_detector),
            parameter=profile.factor if profile.chosen_detector == Detector.ECNN else profile.threshold,
        )
        logger.info("Fold of pump '%s' finished with accuracy %.4f", pump_id, record.accuracy)
        return FoldOutcome(pump_id=pump_id, record=record, profile=profile)
    except FoldError:
        raise
    except BasePumpMonitorError as exc:
        raise FoldError(f"Fold of pump '{pump_id}' failed: {exc.detail}") from exc


def _run_indexed_fold(shared: tuple[PumpDataset, CrossValidationPlan], task: tuple[str, int]) -> FoldOutcome:
    dataset, plan = shared
    return run_fold(dataset, plan, *task)


def cross_validate(
    dataset: PumpDataset, plan: CrossValidationPlan, pumps: Optional[list[str]] = None, jobs: int = 1
) -> CrossValidationResult:
    """
    Run the leave-one-pump-out cross-validation.

    Pumps lacking a label class are excluded. Each fold draws its randomness from the stream given by the pump's
    index in the evaluable dataset, so running a subset of folds or running folds in parallel yields identical
    per pump records.

    :param dataset: Dataset to cross-validate on.
    :param plan: Algorithm, selection policy and hyperparameters.
    :param pumps: IDs of the pumps to run folds for (all evaluable pumps when unset).
    :param jobs: Number of worker processes.
    :return: Per pump records, the aggregate record, the skipped pumps and the built profiles.
    :raises UsageError: If no pump is evaluable, a requested pump does not exist or the algorithm and policy do not
                        fit together.
    :raises FoldError: If a fold fails.
    """
    if plan.algorithm == Algorithm.COMBINED and plan.policy.kind != SelectionKind.FPR:
        raise UsageError(f"The combined approach requires the 'fpr' selection policy, got '{plan.policy.kind}'")

    evaluable = dataset.evaluable()
    if not evaluable.pumps:
        raise UsageError("The dataset has no pump with both normal and abnormal samples")
    fold_pumps = pumps if pumps is not None else evaluable.pump_ids
    unknown = [pump_id for pump_id in fold_pumps if pump_id not in evaluable.pumps]
    if unknown:
        raise UsageError(f"Pumps {unknown} do not exist or are not evaluable")

    logger.info(
        "Cross-validating %s with the %s policy over %d folds", plan.algorithm, plan.policy_name, len(fold_pumps)
    )
    tasks = [(pump_id, evaluable.pump_ids.index(pump_id)) for pump_id in fold_pumps]
    outcomes = map_tasks(_run_indexed_fold, tasks, (evaluable, plan), jobs)

    records = [outcome.record for outcome in outcomes if outcome.record is not None]
    if not records:
        raise UsageError("Every fold was skipped")
    aggregate = aggregate_records(records)
    logger.info(
        "Aggregate accuracy %.4f, weighted accuracy %.4f, TPDR %s",
        aggregate.accuracy,
        aggregate.weighted_accuracy,
        aggregate.tpdr,
    )
    return CrossValidationResult(
        records=records,
        aggregate=aggregate,
        skipped=[outcome.pump_id for outcome in outcomes if outcome.record is None],
        profiles=[outcome.profile for outcome in outcomes if outcome.profile is not None],
    )
