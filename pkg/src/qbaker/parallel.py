"""Worker-count resolution and an order-preserving thread map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import InvalidInputError

THREADS_ENV = "QBAKER_THREADS"


def resolve_threads(threads=None):
    """Explicit ``threads`` wins, then ``$QBAKER_THREADS``, then 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise InvalidInputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if isinstance(threads, bool) or int(threads) != threads or threads < 1:
        raise InvalidInputError(f"thread count must be a positive integer, got {threads!r}")
    return int(threads)


def parallel_map(fn, items, threads=None):
    """``[fn(x) for x in items]`` evaluated on a thread pool; output order follows input order."""
    items = list(items)
    n = min(resolve_threads(threads), max(len(items), 1))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
