"""
Module for defining the schema models for representing rows of a results CSV file.
"""

from typing import Optional

from pydantic import BaseModel, Field

from pump_monitor.models.evaluation import EvalRecord

RESULT_COLUMNS = ["scope", "algorithm", "policy", "depth", "kernel", "channels", "mac_count", "accuracy", "fpr", "tpdr"]


class ResultRowSchema(BaseModel):
    """
    Schema model for a single row of a results CSV file.
    """

    scope: str = Field(description="Pump ID, `aggregate` or the name of the split")
    algorithm: str
    policy: str
    depth: Optional[int] = Field(default=None, description="Network depth (empty without a network)")
    kernel: Optional[int] = None
    channels: Optional[int] = None
    mac_count: int
    accuracy: float
    fpr: Optional[float] = Field(default=None, description="Empty when undefined")
    tpdr: Optional[float] = Field(
        default=None, description="1 or 0 for a pump (whether an abnormal sample was detected), a fraction otherwise"
    )

    @classmethod
    def from_record(cls, record: EvalRecord) -> "ResultRowSchema":
        """
        Create the row of a record.

        :param record: Record to create the row for.
        :return: Created row.
        """
        tpdr = record.tpdr
        if tpdr is None and record.tpdr_flag is not None:
            tpdr = 1.0 if record.tpdr_flag else 0.0
        config = record.config
        return cls(
            scope=record.scope,
            algorithm=record.algorithm,
            policy=record.policy,
            depth=config.depth if config else None,
            kernel=config.kernel if config else None,
            channels=config.channels if config else None,
            mac_count=record.mac_count,
            accuracy=record.accuracy,
            fpr=record.fpr,
            tpdr=tpdr,
        )
