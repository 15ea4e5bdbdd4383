"""
Module for defining the schema models for representing the outcomes reported by the commands.
"""

from pydantic import BaseModel, Field

from pump_monitor.models.profile import PumpProfile


class DatasetSummarySchema(BaseModel):
    """
    Schema model for the counts of a generated dataset.
    """

    pump_count: int = Field(description="Number of pumps")
    sample_count: int = Field(description="Number of samples")
    normal_count: int = Field(description="Number of normal samples")
    abnormal_count: int = Field(description="Number of abnormal samples")


class TrainingSummarySchema(BaseModel):
    """
    Schema model for the outcome of a training run.
    """

    algorithm: str = Field(description="`cnn` or `ecnn`")
    sample_count: int = Field(description="Number of training samples")
    train_accuracy: float = Field(description="Accuracy of the trained network on its training inputs")
    mac_count: int = Field(description="MAC operations needed to process one sample")


class AdaptationResultSchema(BaseModel):
    """
    Schema model for the outcome of adapting to a pump.
    """

    profile: PumpProfile = Field(description="Profile built for the pump")
    adaptation_fpr: float = Field(description="False positive rate of the chosen detector on the adaptation normals")
    adaptation_count: int = Field(description="Number of normal samples used for adaptation")
