"""
Module for running independent evaluation tasks (folds, grid points) serially or on a process pool.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any, Callable, Iterable, TypeVar

logger = logging.getLogger()

T = TypeVar("T")
R = TypeVar("R")

# State shared with every task of a worker process (e.g. the dataset), set once per process
_shared_state: dict[str, Any] = {}


def _set_shared_state(shared: Any) -> None:
    _shared_state["shared"] = shared


def _call_with_shared_state(function: Callable[[Any, T], R], item: T) -> R:
    return function(_shared_state["shared"], item)


def map_tasks(function: Callable[[Any, T], R], items: Iterable[T], shared: Any, jobs: int = 1) -> list[R]:
    """
    Apply a function to every item and return the results in item order.

    With more than one job the items are distributed over a process pool. The shared state is sent to every worker
    process once rather than with every item. Results do not depend on the number of jobs because every task derives
    its randomness from its own item.

    :param function: Module level function called as `function(shared, item)`.
    :param items: Items to process.
    :param shared: State passed to every call.
    :param jobs: Number of worker processes.
    :return: Results in item order.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [function(shared, item) for item in items]

    logger.info("Running %d tasks on %d worker processes", len(items), jobs)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_set_shared_state, initargs=(shared,)) as executor:
        return list(executor.map(_call_with_shared_state, repeat(function), items))
