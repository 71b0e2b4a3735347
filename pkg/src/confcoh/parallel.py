"""Deterministic parallel mapping over independent slice jobs.

CONFCOH_THREADS (a positive integer) caps the worker count; the default is
sequential execution.  Results are always assembled in submission order, so
output is byte-identical across thread counts.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("CONFCOH_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CONFCOH_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"CONFCOH_THREADS must be a positive integer, got {raw!r}")
    return n


def map_jobs(fn, jobs):
    """Apply fn to each job; yields results in job order regardless of the
    worker count."""
    jobs = list(jobs)
    n = thread_count()
    if n == 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, jobs))
