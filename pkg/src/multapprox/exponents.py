"""Finite-range estimates of the multiplicative exponent and Littlewood records."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _blocks
from .fixedpoint import dist_raw_array, frac_mul_array, to_float

N_MIN = 100


class Metric(enum.Enum):
    LITTLEWOOD_PRODUCT = "littlewood"
    EXPONENT_RATIO = "exponent"


@dataclass
class RecordTrail:
    """Strict records (n increasing, value strictly decreasing)."""

    metric: Metric
    records: list = field(default_factory=list)

    @property
    def final(self) -> float:
        return self.records[-1][1] if self.records else math.nan

    def merge(self, other: RecordTrail) -> RecordTrail:
        """Concatenate a later block's trail, keeping only global strict records."""
        out = list(self.records)
        best = out[-1][1] if out else math.inf
        for n, v in other.records:
            if v < best:
                out.append((n, v))
                best = v
        return RecordTrail(self.metric, out)


def _log_product(alpha, n: np.ndarray) -> np.ndarray:
    """Natural log of prod_i ||n alpha_i||; -inf where some factor is 0."""
    total = np.zeros(len(n))
    with np.errstate(divide="ignore"):
        for a in alpha:
            total += np.log(to_float(dist_raw_array(frac_mul_array(n, a.raw))))
    return total


def estimate_mult_exponent(alpha, N: int, n_min: int = N_MIN,
                           threads: int | None = None) -> float:
    """max over n in [n_min, N] of -log(prod ||n alpha_i||) / log n.

    A lower-bound heuristic for the exponent. Returns +inf when some product is
    exactly zero (a rational representative).
    """
    if not N > n_min >= 2:
        raise ValueError("need N > n_min >= 2")
    alpha = tuple(alpha)
    segs = _blocks.segments([N])
    segs = [(max(lo, n_min), hi) for lo, hi in segs if hi > n_min]

    def work(lo, hi):
        n = _blocks.arange(lo, hi)
        lp = _log_product(alpha, n)
        if np.isneginf(lp).any():
            return math.inf
        return float(np.max(-lp / np.log(n.astype(np.float64))))

    return max(_blocks.run(work, segs, threads))


def exponent_trail(alpha, N: int, n_min: int = N_MIN) -> RecordTrail:
    """Records of log(prod ||n alpha_i||)/log n, i.e. of minus the exponent ratio."""
    alpha = tuple(alpha)
    trail = RecordTrail(Metric.EXPONENT_RATIO)
    for lo, hi in _blocks.segments([N]):
        lo = max(lo, n_min)
        if lo >= hi:
            continue
        n = _blocks.arange(lo, hi)
        vals = _log_product(alpha, n) / np.log(n.astype(np.float64))
        trail = trail.merge(_records(n, vals, Metric.EXPONENT_RATIO))
    return trail


def _records(n: np.ndarray, vals: np.ndarray, metric: Metric) -> RecordTrail:
    prev = np.minimum.accumulate(vals)
    is_rec = np.empty(len(vals), dtype=bool)
    is_rec[0] = True
    is_rec[1:] = vals[1:] < prev[:-1]
    idx = np.flatnonzero(is_rec)
    return RecordTrail(metric, [(int(n[i]), vals[i]) for i in idx])


def littlewood_values(alpha, beta, lo: int, hi: int) -> np.ndarray:
    """n ||n alpha|| ||n beta|| in extended precision."""
    n = _blocks.arange(lo, hi)
    da = dist_raw_array(frac_mul_array(n, alpha.raw)).astype(np.longdouble)
    db = dist_raw_array(frac_mul_array(n, beta.raw)).astype(np.longdouble)
    scale = np.longdouble(2.0) ** -128
    return n.astype(np.longdouble) * da * db * scale


def littlewood_records(alpha, beta, N: int, threads: int | None = None) -> RecordTrail:
    """Strict records of n ||n alpha|| ||n beta|| for n = 1..N.

    Blocks are scanned independently and merged by the global strict-decrease
    filter, which gives the same trail as a single pass.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    segs = _blocks.segments([N])

    def work(lo, hi):
        vals = littlewood_values(alpha, beta, lo, hi)
        return _records(_blocks.arange(lo, hi), vals, Metric.LITTLEWOOD_PRODUCT)

    trail = RecordTrail(Metric.LITTLEWOOD_PRODUCT)
    for part in _blocks.run(work, segs, threads):
        trail = trail.merge(part)
    return trail
