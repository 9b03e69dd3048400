"""Order-preserving map over fixed points, sized by EQUILOC_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "EQUILOC_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return os.cpu_count() or 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer")
    return n


def ordered_map(fn, items) -> list:
    """``[fn(x) for x in items]``, possibly on a thread pool.

    Results come back in input order, so any later reduction is independent
    of the schedule.
    """
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
