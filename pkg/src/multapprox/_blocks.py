"""Range partitioning with a fixed block size and ordered merging.

Block boundaries depend only on the checkpoints and BLOCK, never on the
number of threads, so every reduction happens in the same order.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 1 << 18
THREADS_ENV = "MULTAPPROX_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def segments(checkpoints, block: int = BLOCK) -> list[tuple[int, int]]:
    """Half-open segments [lo, hi) covering [1, max(checkpoints)].

    Every checkpoint N is a segment end (hi == N + 1).
    """
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps or cps[0] < 1:
        raise ValueError("checkpoints must be positive integers")
    cuts = set(range(1, cps[-1] + 1, block)) | {c + 1 for c in cps}
    edges = sorted(cuts)
    return list(zip(edges[:-1], edges[1:]))


def run(fn, segs, threads: int | None = None) -> list:
    """``[fn(lo, hi) for lo, hi in segs]``, possibly on a thread pool, in order."""
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(segs) <= 1:
        return [fn(lo, hi) for lo, hi in segs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: fn(*s), segs))


def at_checkpoints(per_segment, segs, checkpoints, reduce=sum) -> list:
    """Cumulative reductions of per-segment values, read off at each checkpoint."""
    out, acc = [], []
    ends = {hi - 1: i for i, (_, hi) in enumerate(segs)}
    want = sorted(set(int(c) for c in checkpoints))
    vals = {}
    j = 0
    for cp in want:
        stop = ends[cp]
        while j <= stop:
            acc.append(per_segment[j])
            j += 1
        vals[cp] = reduce(acc)
    for cp in checkpoints:
        out.append(vals[int(cp)])
    return out


def fsum(values) -> float:
    """Correctly rounded sum (Shewchuk/Neumaier via math.fsum)."""
    if isinstance(values, np.ndarray):
        values = values.tolist()
    return math.fsum(values)


def arange(lo: int, hi: int, dtype=np.uint64) -> np.ndarray:
    return np.arange(lo, hi, dtype=dtype)
