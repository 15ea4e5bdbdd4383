"""
Module for defining the schema models for representing lines of a dataset file.
"""

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from pump_monitor.models.sample import AXES, SAMPLE_LENGTH, VibrationSample


class SampleRecordSchema(BaseModel):
    """
    Schema model for a single sample line of an NDJSON dataset file.
    """

    pump_id: str = Field(description="ID of the pump the sample was recorded on")
    label: Literal[0, 1] = Field(description="0 for a normal and 1 for an abnormal sample")
    x: list[float] = Field(description="Acceleration vector of the x axis")
    y: list[float] = Field(description="Acceleration vector of the y axis")
    z: list[float] = Field(description="Acceleration vector of the z axis")

    @model_validator(mode="after")
    def validate_axis_lengths(self) -> "SampleRecordSchema":
        """
        Validator that ensures every axis vector has the sample length.
        """
        for axis in AXES:
            length = len(getattr(self, axis))
            if length != SAMPLE_LENGTH:
                raise ValueError(
                    f"Axis {axis} of pump '{self.pump_id}' has {length} values, expected {SAMPLE_LENGTH}"
                )
        return self

    @classmethod
    def from_sample(cls, sample: VibrationSample) -> "SampleRecordSchema":
        """
        Create the line of a sample.

        :param sample: Sample to create the line for.
        :return: Created line.
        """
        return cls(
            pump_id=sample.pump_id, label=sample.label, x=sample.x.tolist(), y=sample.y.tolist(), z=sample.z.tolist()
        )

    def to_sample(self) -> VibrationSample:
        """
        Convert the line into a sample.

        :return: Converted sample.
        :raises ValidationError: If the axis vectors do not have the sample length.
        """
        return VibrationSample.from_axes(self.pump_id, self.x, self.y, self.z, self.label)
