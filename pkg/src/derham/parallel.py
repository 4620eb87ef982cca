"""Deterministic chunked parallelism.

Work is split into fixed-size chunks that do not depend on the worker
count, results are reassembled in chunk order, and reductions run
sequentially over the ordered parts.  Output is therefore byte-identical
for any DERHAM_THREADS setting.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK_ROWS = 16384


def thread_count() -> int:
    """Worker cap from DERHAM_THREADS, defaulting to the machine's cores."""
    raw = os.environ.get("DERHAM_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"DERHAM_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise ValueError("DERHAM_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def run_chunked(fn, n_rows: int, chunk: int = CHUNK_ROWS) -> list:
    """Apply fn(start, stop) over [0, n_rows) in fixed chunks, ordered.

    The chunk boundaries depend only on n_rows, never on the thread
    count, so per-chunk float results are reproducible.
    """
    spans = [(s, min(s + chunk, n_rows)) for s in range(0, n_rows, chunk)]
    workers = min(thread_count(), max(len(spans), 1))
    if workers <= 1 or len(spans) <= 1:
        return [fn(s, e) for s, e in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: fn(*span), spans))


def chunked_sum(values: np.ndarray, chunk: int = CHUNK_ROWS) -> float:
    """Sum with a fixed reduction order regardless of parallel schedule."""
    parts = run_chunked(lambda s, e: float(np.sum(values[s:e])), len(values), chunk)
    total = 0.0
    for p in parts:
        total += p
    return total
