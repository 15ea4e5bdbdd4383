"""
Module for extracting the Pareto optimal records of a design space exploration (fewer MACs, higher accuracy).
"""

import logging
from typing import Sequence

from pump_monitor.models.evaluation import EvalRecord

logger = logging.getLogger()


def dominates(record: EvalRecord, other: EvalRecord) -> bool:
    """
    Check whether a record dominates another one.

    :param record: Potentially dominating record.
    :param other: Potentially dominated record.
    :return: Whether `record` needs at most as many MACs and is at least as accurate as `other`, and is strictly
             better in at least one of the two.
    """
    return (
        record.mac_count <= other.mac_count
        and record.accuracy >= other.accuracy
        and (record.mac_count < other.mac_count or record.accuracy > other.accuracy)
    )


def pareto_front(records: Sequence[EvalRecord]) -> list[EvalRecord]:
    """
    Extract the records not dominated by any other record.

    Of several records with the same MAC count and accuracy only the first one is kept.

    :param records: Records to extract the front from.
    :return: Front sorted by ascending MAC count.
    """
    front = []
    seen = set()
    for record in records:
        point = (record.mac_count, record.accuracy)
        if point in seen:
            continue
        if any(dominates(other, record) for other in records):
            continue
        seen.add(point)
        front.append(record)

    logger.info("Pareto front contains %d of %d records", len(front), len(records))
    return sorted(front, key=lambda record: record.mac_count)
