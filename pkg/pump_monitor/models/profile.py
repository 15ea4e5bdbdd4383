"""
Module for defining the models for representing per pump adaptation state and parameter selection policies.
"""

import math
from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from pump_monitor.models.sample import NormalMean


class Detector(StrEnum):
    """
    Detection algorithm used for a pump.
    """

    THRESHOLD = "threshold"
    CNN = "cnn"
    ECNN = "ecnn"


class SelectionKind(StrEnum):
    """
    How the pump specific parameter is selected.
    """

    OPTIMAL = "optimal"
    FIXED = "fixed"
    FPR = "fpr"


def geometric_grid(start: float = 100.0, stop: float = 1e-3, ratio: float = 0.8) -> list[float]:
    """
    Build a strictly descending geometric grid.

    :param start: First (largest) value.
    :param stop: Smallest value that may still be part of the grid.
    :param ratio: Factor between consecutive values (in (0, 1)).
    :return: Grid values from `start` down to the last value not below `stop`.
    """
    count = math.floor(math.log(stop / start) / math.log(ratio) + 1e-9) + 1
    return [start * ratio**index for index in range(count)]


class SelectionPolicy(BaseModel):
    """
    Model for the policy used to select the pump specific parameter `T_i` or `F_i`.
    """

    kind: SelectionKind = SelectionKind.FPR
    target_fpr: float = Field(default=0.10, gt=0.0, lt=1.0)
    # Candidate factors, tried in order
    grid: list[float] = Field(default_factory=geometric_grid)
    # Global parameter for the fixed policy (searched on the training pumps when unset)
    fixed_value: Optional[float] = Field(default=None, gt=0.0)

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, grid: list[float]) -> list[float]:
        """
        Validator that ensures the grid is non-empty, positive and strictly descending.

        :param grid: Grid to validate.
        :return: The grid.
        :raises ValueError: If the grid is invalid.
        """
        if not grid:
            raise ValueError("Grid must not be empty")
        if any(value <= 0 or not math.isfinite(value) for value in grid):
            raise ValueError("Grid values must be finite and positive")
        if any(later >= earlier for earlier, later in zip(grid, grid[1:])):
            raise ValueError("Grid must be strictly descending")
        return grid


class PumpProfile(BaseModel):
    """
    Model for the adaptation state of a single pump.
    """

    pump_id: str
    normal_mean: NormalMean
    threshold: Optional[float] = Field(default=None, gt=0.0, allow_inf_nan=False)
    factor: Optional[float] = Field(default=None, gt=0.0, allow_inf_nan=False)
    chosen_detector: Optional[Detector] = None
    policy: Optional[SelectionPolicy] = None

    @model_validator(mode="after")
    def validate_detector_parameter(self) -> "PumpProfile":
        """
        Validator that ensures the chosen detector has the parameter it needs.
        """
        if self.chosen_detector == Detector.THRESHOLD and self.threshold is None:
            raise ValueError("The threshold detector requires a threshold")
        if self.chosen_detector == Detector.ECNN and self.factor is None:
            raise ValueError("The ECNN detector requires a factor")
        return self
