"""Order-preserving fan-out over worker processes.

Results are always merged in task order, so output never depends on the
number of workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence


def ordered_map(fn: Callable, tasks: Sequence, workers: int = 1) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def first_hit(fn: Callable, tasks: Sequence, workers: int = 1):
    """First non-None result in task order (later tasks may still be computed)."""
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            r = fn(t)
            if r is not None:
                return r
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for r in pool.map(fn, tasks):
            if r is not None:
                pool.shutdown(wait=True, cancel_futures=True)
                return r
    return None


def chunk_ranges(total: int, nchunks: int) -> Iterable[tuple[int, int]]:
    step = max(1, -(-total // max(1, nchunks)))
    for start in range(0, total, step):
        yield start, min(total, start + step)
