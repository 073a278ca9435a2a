"""Work pool for independent study cells.

Pool width is capped by the BESOV_INVERT_THREADS environment variable.
Results are returned in submission order, so assembly is deterministic
regardless of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(n_jobs: int) -> int:
    cap = os.environ.get("BESOV_INVERT_THREADS")
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError as exc:
            raise ValueError(
                f"BESOV_INVERT_THREADS must be an integer, got {cap!r}"
            ) from exc
        if cap < 1:
            raise ValueError("BESOV_INVERT_THREADS must be >= 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def run_jobs(fn, items):
    items = list(items)
    width = worker_count(len(items))
    if width <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, items))
