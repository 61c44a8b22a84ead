"""Slice-level worker pool, capped by the TENSCOMP_THREADS environment variable."""

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["thread_count", "map_indices"]


def thread_count():
    """Worker cap from ``TENSCOMP_THREADS``; defaults to 1 (serial)."""
    raw = os.environ.get("TENSCOMP_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def map_indices(fn, n):
    """Run ``fn(i)`` for i in range(n), possibly on a thread pool.

    Each call must write to disjoint output slots; results are then bitwise
    independent of the schedule.
    """
    workers = min(thread_count(), n)
    if workers <= 1:
        for i in range(n):
            fn(i)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fn, range(n)))
