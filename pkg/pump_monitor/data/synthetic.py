"""
Module for generating deterministic synthetic pump vibration datasets.

Every pump gets a base frequency, amplitude, per axis phase and per axis DC offset. Normal samples are a noisy
sinusoid. Abnormal samples scale the amplitude by a draw around the severity, and add a second harmonic and a sparse
impulse train, so that faulty pumps vibrate with a higher amplitude than their normal samples.
"""

import logging
import math

import numpy as np

from pump_monitor.core.prng import Prng
from pump_monitor.models.sample import AXES, SAMPLE_LENGTH, PumpDataset, SyntheticSpec, VibrationSample

logger = logging.getLogger()

FREQUENCY_RANGE = (5.0, 50.0)
AMPLITUDE_RANGE = (0.5, 2.0)
OFFSET_RANGE = (-1.0, 1.0)
# Relative spread of the abnormal amplitude multiplier around the severity
SEVERITY_SPREAD = 0.25
HARMONIC_RATIO = 0.3
IMPULSE_DENSITY = 0.01


def pump_id_for(index: int) -> str:
    """
    Return the ID of the synthetic pump with the given index.

    :param index: Index of the pump.
    :return: Pump ID.
    """
    return f"pump-{index:03d}"


def _generate_pump(spec: SyntheticSpec, index: int, prng: Prng) -> list[VibrationSample]:
    pump_id = pump_id_for(index)
    frequency = float(prng.uniform(*FREQUENCY_RANGE))
    amplitude = float(prng.uniform(*AMPLITUDE_RANGE))
    phases = prng.uniform(0.0, 2.0 * math.pi, len(AXES))[:, np.newaxis]
    offsets = prng.uniform(*OFFSET_RANGE, len(AXES))[:, np.newaxis]
    time = np.arange(SAMPLE_LENGTH, dtype=np.float64)[np.newaxis, :]

    n_abnormal = math.floor(spec.abnormal_fraction * spec.samples_per_pump + 0.5)
    n_normal = spec.samples_per_pump - n_abnormal
    shape = (len(AXES), SAMPLE_LENGTH)

    samples = []
    # Normal samples come first, mirroring a pump that operates normally when it is first used
    for position in range(spec.samples_per_pump):
        label = 0 if position < n_normal else 1
        angle = 2.0 * math.pi * frequency * time / SAMPLE_LENGTH + phases + float(prng.uniform(0.0, 2.0 * math.pi))
        noise = spec.noise_level * amplitude * prng.normal(shape)
        if label == 0:
            signal = amplitude * np.sin(angle) + offsets + noise
        else:
            multiplier = float(
                prng.uniform(spec.severity * (1.0 - SEVERITY_SPREAD), spec.severity * (1.0 + SEVERITY_SPREAD))
            )
            scaled = amplitude * multiplier
            impulses = (prng.random(shape) < IMPULSE_DENSITY) * scaled * prng.uniform(1.0, 2.0, shape)
            signal = scaled * np.sin(angle) + HARMONIC_RATIO * scaled * np.sin(2.0 * angle) + impulses + offsets + noise
        samples.append(VibrationSample(pump_id=pump_id, signal=signal, label=label))
    return samples


def generate_synthetic(spec: SyntheticSpec) -> PumpDataset:
    """
    Generate a synthetic dataset.

    Each pump draws from its own stream of a generator seeded with `spec.seed`, so the dataset is fully determined by
    these parameters.

    :param spec: Parameters of the dataset.
    :return: Generated dataset.
    """
    logger.info("Generating %d synthetic pumps with %d samples each", spec.n_pumps, spec.samples_per_pump)
    prng = Prng(spec.seed)
    pumps = {pump_id_for(index): _generate_pump(spec, index, prng.spawn(index)) for index in range(spec.n_pumps)}
    return PumpDataset(pumps=pumps, provenance=f"synthetic:{spec.model_dump_json()}")
