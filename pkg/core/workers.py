"""
Worker pool helper.
Sequential for workers <= 1, otherwise a process pool; results keep input order.
Counter increments made inside workers are carried back and added to the parent's metrics.
"""
from functools import partial
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Tuple, TypeVar

from .observability import metrics

T = TypeVar("T")
R = TypeVar("R")


def _counted(func: Callable[[T], R], item: T) -> Tuple[R, Dict]:
    before = metrics.counter_values()
    result = func(item)
    return result, metrics.counter_delta(before)


def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply a picklable `func` to every item; the output order matches the input order."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    processes = min(workers, len(items))
    chunk_size = max(1, len(items) // (4 * processes))
    with Pool(processes=processes) as pool:
        outcomes = pool.map(partial(_counted, func), items, chunksize=chunk_size)
    for _, counts in outcomes:
        metrics.add_counts(counts)
    return [result for result, _ in outcomes]
