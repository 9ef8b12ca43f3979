"""
Ordered worker pool.

Runs independent work items on a thread pool and returns results in
submission order, so reductions downstream see the same sequence for any
worker count.
"""

import concurrent.futures
import logging
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply ``fn`` to every item; results keep the order of ``items``.

    If several items fail, the exception of the earliest item is raised.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(fn, item) for item in items]
        return [future.result() for future in futures]
