"""
Module for the default CNN and the enhanced CNN (ECNN) detectors.

The ECNN receives six channels: the raw x, y and z vectors followed by the deviation from the pump's normal mean
scaled by the pump specific factor, `A = F * (X - mu)`.
"""

import logging
import math
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import StructuralError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.data.statistics import compute_normal_mean
from pump_monitor.models.sample import NORMAL, NormalMean, PumpDataset, VibrationSample
from pump_monitor.nn.network import DECISION_THRESHOLD, ConvNet, classify

logger = logging.getLogger()

# Number of inputs evaluated together when predicting many samples
PREDICTION_CHUNK_SIZE = 256


def build_ecnn_input(sample: VibrationSample, normal_mean: NormalMean, factor: float) -> NDArray[np.float64]:
    """
    Build the six channel ECNN input of a sample.

    :param sample: Sample to build the input for.
    :param normal_mean: Normal mean of the sample's pump.
    :param factor: Pump specific factor `F`.
    :return: Array of shape `(6, 800)`: raw x, y, z followed by `F * (d - mu_d)` for each axis.
    :raises UsageError: If the factor is negative.
    """
    return build_ecnn_inputs([sample], normal_mean, factor)[0]


def build_ecnn_inputs(
    samples: Sequence[VibrationSample], normal_mean: NormalMean, factor: float | NDArray[np.float64]
) -> NDArray[np.float64]:
    """
    Build the six channel ECNN inputs of several samples of the same pump.

    :param samples: Samples to build the inputs for.
    :param normal_mean: Normal mean of the samples' pump.
    :param factor: A single factor or one factor per sample.
    :return: Array of shape `(samples, 6, 800)`.
    :raises UsageError: If any factor is negative.
    """
    factors = np.broadcast_to(np.asarray(factor, dtype=np.float64), (len(samples),))
    if np.any(factors < 0.0):
        raise UsageError("The pump specific factor must not be negative")
    signals = np.stack([sample.signal for sample in samples])
    deviations = (signals - normal_mean.as_array()[np.newaxis, :, np.newaxis]) * factors[:, np.newaxis, np.newaxis]
    return np.concatenate([signals, deviations], axis=1)


def build_raw_inputs(samples: Sequence[VibrationSample]) -> NDArray[np.float64]:
    """
    Stack the three channel default CNN inputs of several samples.

    :param samples: Samples to build the inputs for.
    :return: Array of shape `(samples, 3, 800)`.
    """
    return np.stack([sample.signal for sample in samples])


def draw_training_factors(prng: Prng, count: int, factor_range: tuple[float, float]) -> NDArray[np.float64]:
    """
    Draw factors log-uniformly from a range.

    :param prng: Generator to draw from.
    :param count: Number of factors.
    :param factor_range: Smallest and largest factor.
    :return: Drawn factors.
    """
    low, high = factor_range
    return np.exp(prng.uniform(math.log(low), math.log(high), count))


def build_training_inputs(
    dataset: PumpDataset, enhanced: bool, prng: Prng, factor_range: tuple[float, float] = (0.01, 100.0)
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Build the inputs and labels of all samples of a training dataset.

    For the ECNN each training pump's normal mean is computed from all of its normal samples and every sample gets
    its own factor drawn log-uniformly from `factor_range`, so that the network learns to treat the magnitude of the
    deviation channels as a sensitivity knob. Pumps without normal samples are skipped for the ECNN.

    :param dataset: Training dataset.
    :param enhanced: Whether to build six channel ECNN inputs.
    :param prng: Generator for the training factors.
    :param factor_range: Smallest and largest training factor.
    :return: Tuple with the inputs and the labels.
    """
    inputs = []
    labels = []
    for pump_id, samples in dataset.pumps.items():
        if not samples:
            continue
        if enhanced:
            if not any(sample.label == NORMAL for sample in samples):
                logger.warning("Skipping training pump '%s' as it has no normal sample to compute its mean", pump_id)
                continue
            factors = draw_training_factors(prng, len(samples), factor_range)
            inputs.append(build_ecnn_inputs(samples, compute_normal_mean(samples), factors))
        else:
            inputs.append(build_raw_inputs(samples))
        labels.append(np.array([sample.label for sample in samples], dtype=np.float64))

    if not inputs:
        raise UsageError("Cannot build training inputs from an empty dataset")
    return np.concatenate(inputs), np.concatenate(labels)


def predict_outputs(network: ConvNet, inputs: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Compute the raw outputs of many inputs in inference mode.

    :param network: Trained network.
    :param inputs: Inputs of shape `(samples, in_ch, length)`.
    :return: Raw outputs of shape `(samples,)`.
    """
    network.eval()
    if len(inputs) == 0:
        return np.zeros(0)
    return np.concatenate(
        [
            network.forward_batch(inputs[start : start + PREDICTION_CHUNK_SIZE])
            for start in range(0, len(inputs), PREDICTION_CHUNK_SIZE)
        ]
    )


def labels_from_outputs(outputs: NDArray[np.float64]) -> NDArray[np.int64]:
    """
    Classify raw outputs.

    :param outputs: Raw outputs.
    :return: `0` where the output is below 0.5, else `1`.
    """
    return (np.asarray(outputs) >= DECISION_THRESHOLD).astype(np.int64)


def _check_enhanced(network: ConvNet, enhanced: bool) -> None:
    if network.config.enhanced != enhanced:
        raise StructuralError(
            f"Network expects {network.config.input_channels} input channels but the "
            f"{'ECNN' if enhanced else 'default CNN'} detector provides {6 if enhanced else 3}"
        )


def cnn_predict(network: ConvNet, sample: VibrationSample) -> tuple[float, int]:
    """
    Predict a sample with the default CNN.

    :param network: Trained default CNN.
    :param sample: Sample to predict.
    :return: Tuple with the raw output and the label.
    :raises StructuralError: If the network is an ECNN.
    """
    _check_enhanced(network, enhanced=False)
    output = network.forward(sample.signal)
    return output, classify(output)


def ecnn_predict(
    network: ConvNet, sample: VibrationSample, normal_mean: NormalMean, factor: float
) -> tuple[float, int]:
    """
    Predict a sample with the ECNN.

    :param network: Trained ECNN.
    :param sample: Sample to predict.
    :param normal_mean: Normal mean of the sample's pump.
    :param factor: Pump specific factor.
    :return: Tuple with the raw output and the label.
    :raises StructuralError: If the network is a default CNN.
    """
    _check_enhanced(network, enhanced=True)
    output = network.forward(build_ecnn_input(sample, normal_mean, factor))
    return output, classify(output)


def cnn_predict_all(network: ConvNet, samples: Sequence[VibrationSample]) -> NDArray[np.int64]:
    """
    Predict several samples with the default CNN.

    :param network: Trained default CNN.
    :param samples: Samples to predict.
    :return: Labels.
    """
    _check_enhanced(network, enhanced=False)
    if not samples:
        return np.zeros(0, dtype=np.int64)
    return labels_from_outputs(predict_outputs(network, build_raw_inputs(samples)))


def ecnn_predict_all(
    network: ConvNet, samples: Sequence[VibrationSample], normal_mean: NormalMean, factor: float
) -> NDArray[np.int64]:
    """
    Predict several samples of one pump with the ECNN.

    :param network: Trained ECNN.
    :param samples: Samples to predict.
    :param normal_mean: Normal mean of the samples' pump.
    :param factor: Pump specific factor.
    :return: Labels.
    """
    _check_enhanced(network, enhanced=True)
    if not samples:
        return np.zeros(0, dtype=np.int64)
    return labels_from_outputs(predict_outputs(network, build_ecnn_inputs(samples, normal_mean, factor)))
