"""
Module for defining the models for representing evaluation results and exploration grids.
"""

from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.models.profile import PumpProfile, SelectionPolicy

AGGREGATE_SCOPE = "aggregate"


class Algorithm(StrEnum):
    """
    Detection algorithm evaluated by cross-validation.
    """

    THRESHOLD = "threshold"
    CNN = "cnn"
    ECNN = "ecnn"
    COMBINED = "combined"


class EvalRecord(BaseModel):
    """
    Model for the metrics of a single pump, a fixed split or the aggregate of a run.
    """

    # Pump ID, `aggregate` or the name of the split
    scope: str
    algorithm: str
    # Name of the selection policy or `none` when the algorithm has no pump specific parameter
    policy: str = "none"
    config: Optional[ModelConfig] = None
    accuracy: float = Field(ge=0.0, le=1.0)
    # Undefined when the evaluated samples contain no normal sample
    fpr: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    # Pump scope: whether at least one abnormal sample was detected (`None` if there is none)
    tpdr_flag: Optional[bool] = None
    # Aggregate scope: fraction of pumps with `tpdr_flag` set
    tpdr: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    sample_count: int = Field(ge=0)
    mac_count: int = Field(default=0, ge=0)
    # Aggregate scope: accuracy over all samples instead of the mean over pumps
    weighted_accuracy: Optional[float] = None
    detector: Optional[str] = None
    parameter: Optional[float] = None


class DseGrid(BaseModel):
    """
    Model for the design space spanned by depth, kernel size and channel count.
    """

    depths: list[int] = Field(default_factory=lambda: [2, 4, 6, 8, 10], min_length=1)
    kernels: list[int] = Field(default_factory=lambda: [3, 7, 11, 15, 19, 23], min_length=1)
    channel_counts: list[int] = Field(default_factory=lambda: [5, 10, 20, 30], min_length=1)
    enhanced: bool = False

    @field_validator("kernels")
    @classmethod
    def validate_kernels(cls, kernels: list[int]) -> list[int]:
        """
        Validator that ensures all kernel sizes are odd.

        :param kernels: Kernel sizes to validate.
        :return: The kernel sizes.
        :raises ValueError: If any kernel size is even.
        """
        even = [kernel for kernel in kernels if kernel % 2 == 0]
        if even:
            raise ValueError(f"Kernel sizes must be odd, got {even}")
        return kernels


class CrossValidationResult(BaseModel):
    """
    Model for the outcome of a leave-one-pump-out cross-validation run.
    """

    records: list[EvalRecord]
    aggregate: EvalRecord
    # IDs of the pumps whose fold was skipped
    skipped: list[str] = Field(default_factory=list)
    profiles: list[PumpProfile] = Field(default_factory=list)


class CrossValidationPlan(BaseModel):
    """
    Model for everything a leave-one-pump-out fold needs besides the dataset.
    """

    algorithm: Algorithm
    policy: SelectionPolicy = SelectionPolicy()
    network: ModelConfig = ModelConfig()
    training: TrainHyper = TrainHyper()
    adapt_fraction: float = Field(default=0.5, gt=0.0, le=1.0)
    train_factor_min: float = Field(default=0.01, gt=0.0)
    train_factor_max: float = Field(default=100.0, gt=0.0)
    fixed_samples_per_pump: int = Field(default=20, ge=1)

    @property
    def policy_name(self) -> str:
        """Name of the selection policy written to the results (`none` for the default CNN)."""
        return "none" if self.algorithm == Algorithm.CNN else str(self.policy.kind)

    @property
    def trained_config(self) -> Optional[ModelConfig]:
        """Topology of the trained network (`None` for the threshold detector)."""
        if self.algorithm == Algorithm.THRESHOLD:
            return None
        return self.network.model_copy(update={"enhanced": self.algorithm != Algorithm.CNN})


class ExplorationResult(BaseModel):
    """
    Model for the outcome of a design space exploration.
    """

    records: list[EvalRecord]
    # Pareto optimal records sorted by MAC count
    front: list[EvalRecord]
