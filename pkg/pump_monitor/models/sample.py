"""
Module for defining the models for representing vibration samples and pump datasets.
"""

import logging
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveInt, model_validator

from pump_monitor.models.custom_array_data_types import FloatArrayField

logger = logging.getLogger()

# Number of datapoints per axis of one vibration window
SAMPLE_LENGTH = 800

AXES = ("x", "y", "z")

NORMAL = 0
ABNORMAL = 1


class VibrationSample(BaseModel):
    """
    Model for one three axis acceleration window of a pump together with its label.
    """

    pump_id: str
    # Rows are the x, y and z axes
    signal: FloatArrayField
    label: Literal[0, 1]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_signal_shape(self) -> "VibrationSample":
        """
        Validator that ensures the signal holds exactly `SAMPLE_LENGTH` datapoints for each of the three axes.
        """
        if self.signal.shape != (len(AXES), SAMPLE_LENGTH):
            raise ValueError(
                f"Signal of pump '{self.pump_id}' must have shape {(len(AXES), SAMPLE_LENGTH)} but has shape "
                f"{self.signal.shape}"
            )
        return self

    @classmethod
    def from_axes(cls, pump_id: str, x, y, z, label: int) -> "VibrationSample":
        """
        Create a sample from its three axis vectors.

        :param pump_id: ID of the pump the sample was recorded on.
        :param x: Acceleration vector of the x axis.
        :param y: Acceleration vector of the y axis.
        :param z: Acceleration vector of the z axis.
        :param label: `0` for normal or `1` for abnormal.
        :return: Created sample.
        """
        return cls(pump_id=pump_id, signal=np.stack([np.asarray(x), np.asarray(y), np.asarray(z)]), label=label)

    def __eq__(self, other: object) -> bool:
        # Default model equality would compare the arrays elementwise
        if not isinstance(other, VibrationSample):
            return NotImplemented
        return (
            self.pump_id == other.pump_id
            and self.label == other.label
            and np.array_equal(self.signal, other.signal)
        )

    __hash__ = None

    @property
    def x(self) -> NDArray[np.float64]:
        """Acceleration vector of the x axis."""
        return self.signal[0]

    @property
    def y(self) -> NDArray[np.float64]:
        """Acceleration vector of the y axis."""
        return self.signal[1]

    @property
    def z(self) -> NDArray[np.float64]:
        """Acceleration vector of the z axis."""
        return self.signal[2]


class NormalMean(BaseModel):
    """
    Model for the per axis mean over all datapoints of the normal samples of one pump.
    """

    mu_x: float = Field(allow_inf_nan=False)
    mu_y: float = Field(allow_inf_nan=False)
    mu_z: float = Field(allow_inf_nan=False)

    def as_array(self) -> NDArray[np.float64]:
        """
        Return the means as an array ordered like the signal axes.

        :return: Array of shape (3,).
        """
        return np.array([self.mu_x, self.mu_y, self.mu_z], dtype=np.float64)


class PumpDataset(BaseModel):
    """
    Model for a collection of pumps, each with an ordered list of samples.
    """

    pumps: dict[str, list[VibrationSample]] = Field(default_factory=dict)
    # Synthetic spec descriptor or file path the samples originate from
    provenance: str = ""

    @property
    def pump_ids(self) -> list[str]:
        """IDs of all pumps in stored order."""
        return list(self.pumps)

    def __len__(self) -> int:
        return sum(len(samples) for samples in self.pumps.values())

    def samples(self) -> list[VibrationSample]:
        """
        Return all samples of all pumps in stored order.

        :return: List of samples.
        """
        return [sample for samples in self.pumps.values() for sample in samples]

    def label_counts(self) -> tuple[int, int]:
        """
        Count the normal and abnormal samples.

        :return: Tuple with the number of normal and the number of abnormal samples.
        """
        labels = [sample.label for sample in self.samples()]
        abnormal = sum(labels)
        return len(labels) - abnormal, abnormal

    def subset(self, pump_ids: list[str]) -> "PumpDataset":
        """
        Return a view containing only the given pumps (samples are shared, not copied).

        :param pump_ids: IDs of the pumps to keep.
        :return: Dataset holding only those pumps, in the order given.
        """
        return PumpDataset(pumps={pump_id: self.pumps[pump_id] for pump_id in pump_ids}, provenance=self.provenance)

    def evaluable(self) -> "PumpDataset":
        """
        Return a view of the pumps that have at least one normal and one abnormal sample.

        :return: Dataset holding only the evaluable pumps.
        """
        kept = []
        for pump_id, samples in self.pumps.items():
            labels = {sample.label for sample in samples}
            if labels == {NORMAL, ABNORMAL}:
                kept.append(pump_id)
            else:
                logger.warning("Excluding pump '%s' as it does not have both normal and abnormal samples", pump_id)
        return self.subset(kept)

    def stack(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """
        Stack the signals and labels of all samples.

        :return: Tuple with
                 - Signals of shape (samples, 3, `SAMPLE_LENGTH`).
                 - Labels of shape (samples,).
        """
        samples = self.samples()
        if not samples:
            return np.zeros((0, len(AXES), SAMPLE_LENGTH)), np.zeros(0)
        signals = np.stack([sample.signal for sample in samples])
        labels = np.array([sample.label for sample in samples], dtype=np.float64)
        return signals, labels


class SyntheticSpec(BaseModel):
    """
    Model for the parameters of the synthetic vibration dataset generator.
    """

    n_pumps: PositiveInt = 20
    samples_per_pump: PositiveInt = 200
    abnormal_fraction: float = Field(default=2 / 3, ge=0.0, le=1.0)
    # Midpoint of the abnormal amplitude multiplier range
    severity: float = Field(default=2.5, gt=1.0)
    noise_level: NonNegativeFloat = 0.1
    seed: int = 0
