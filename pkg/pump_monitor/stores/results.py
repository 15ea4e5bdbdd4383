"""
Module for providing a store for writing evaluation results to CSV files.
"""

import logging
from pathlib import Path
from typing import Sequence

import pandas as pd

from pump_monitor.models.evaluation import EvalRecord
from pump_monitor.schemas.results import RESULT_COLUMNS, ResultRowSchema

logger = logging.getLogger()

# Columns that are empty for records without a network
OPTIONAL_INTEGER_COLUMNS = {"depth": "Int64", "kernel": "Int64", "channels": "Int64"}


class ResultsStore:
    """
    Store for writing evaluation results to CSV files.
    """

    def write(self, records: Sequence[EvalRecord], path: Path) -> None:
        """
        Write records to a CSV file, one row per record in the given order.

        :param records: Records to write.
        :param path: Path of the CSV file (replaced if it exists).
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows = [ResultRowSchema.from_record(record).model_dump() for record in records]
        frame = pd.DataFrame(rows, columns=RESULT_COLUMNS).astype(OPTIONAL_INTEGER_COLUMNS)

        logger.info("Writing %d result rows to '%s'", len(frame), path)
        frame.to_csv(path, index=False, lineterminator="\n")
