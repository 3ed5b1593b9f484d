"""Ordered thread-pool map used for deterministic parallel reductions."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_default_threads = None


def default_threads() -> int:
    if _default_threads is not None:
        return _default_threads
    return max(1, os.cpu_count() or 1)


def set_default_threads(n: int | None):
    global _default_threads
    _default_threads = None if n is None else max(1, int(n))


def ordered_map(fn, items, threads: int | None = None) -> list:
    """Apply fn to each item; results come back in input order.

    Callers combine the returned list left to right, so the floating-point
    reduction order never depends on the number of workers.
    """
    items = list(items)
    n = default_threads() if threads is None else max(1, int(threads))
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
