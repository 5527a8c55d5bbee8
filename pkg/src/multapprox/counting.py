"""Exact streaming counters for simultaneous, multiplicative and coprime-pair
approximations.

Inequalities follow the two conventions of the underlying statements:

* distance counts (simultaneous, multiplicative, uniform, relaxed) are strict,
  ``... < psi(n)``;
* the coprime-pair count is non-strict, ``|n*alpha - a| <= psi(n)``.

A zero distance is an ordinary value: a zero product satisfies ``0 < psi(n)``
whenever ``psi(n) > 0``.

All positional arithmetic is done on the 64-bit raws; the only floating point
step in the multiplicative modes is the comparison of ``sum(log2 dist)``
against ``log2 psi(n)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _blocks
from .fixedpoint import (ZERO, Frac64, ceil_threshold, dist_raw_array, floor_threshold,
                         frac_mul_array, mulhi_array, to_float)
from .psi import ApproxFunction

MAX_HITS = 100_000
MAX_N = (1 << 32) - 1


class Mode(enum.Enum):
    SIMULTANEOUS = "simultaneous"
    MULTIPLICATIVE = "multiplicative"
    MULTIPLICATIVE_UNIFORM = "uniform"
    COPRIME_PAIRS = "coprime"
    RELAXED_PAIRS = "relaxed"


@dataclass(frozen=True)
class CountQuery:
    alpha: tuple
    N: int
    psi: ApproxFunction
    mode: Mode = Mode.MULTIPLICATIVE
    gamma: tuple | None = None

    def __post_init__(self):
        alpha = tuple(self.alpha)
        gamma = tuple(self.gamma) if self.gamma is not None else (ZERO,) * len(alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "mode", Mode(self.mode))
        k = len(alpha)
        if k < 1:
            raise ValueError("alpha must have at least one coordinate")
        if len(gamma) != k:
            raise ValueError("alpha and gamma lengths differ")
        if not all(isinstance(x, Frac64) for x in alpha + gamma):
            raise TypeError("alpha and gamma must hold Frac64 values")
        if not 1 <= self.N <= MAX_N:
            raise ValueError(f"N must lie in [1, {MAX_N}]")
        if self.mode is Mode.COPRIME_PAIRS and k != 1:
            raise ValueError("coprime pair counting needs k = 1")
        if self.mode in (Mode.MULTIPLICATIVE, Mode.MULTIPLICATIVE_UNIFORM,
                         Mode.RELAXED_PAIRS) and k < 2:
            raise ValueError(f"{self.mode.value} counting needs k >= 2")

    @property
    def k(self) -> int:
        return len(self.alpha)

    def with_N(self, N: int) -> CountQuery:
        return CountQuery(self.alpha, N, self.psi, self.mode, self.gamma)


@dataclass
class CountResult:
    count: int
    hits: np.ndarray
    truncated: bool = False
    flags: list = field(default_factory=list)


# kernels: each maps a block [lo, hi) to a per-n contribution array ----------

def _log2_dists(q: CountQuery, n: np.ndarray) -> list[np.ndarray]:
    out = []
    with np.errstate(divide="ignore"):
        for a, g in zip(q.alpha, q.gamma):
            d = dist_raw_array(frac_mul_array(n, a.raw), g.raw)
            out.append(np.log2(to_float(d)))
    return out


def _product_hits(logs: list[np.ndarray], psi: np.ndarray) -> np.ndarray:
    """Strict ``prod dist < psi`` decided in log2 space; zero factors give -inf."""
    s = logs[0].copy()
    for lg in logs[1:-1]:
        s += lg
    with np.errstate(divide="ignore", invalid="ignore"):
        return (s + logs[-1]) < np.log2(psi)


def _simultaneous(q, lo, hi, _flags):
    n = _blocks.arange(lo, hi)
    thr = ceil_threshold(q.psi.values(n))
    ok = np.ones(hi - lo, dtype=bool)
    for a, g in zip(q.alpha, q.gamma):
        ok &= dist_raw_array(frac_mul_array(n, a.raw), g.raw) < thr
    return ok.astype(np.int64)


def _multiplicative(q, lo, hi, _flags):
    n = _blocks.arange(lo, hi)
    return _product_hits(_log2_dists(q, n), q.psi.values(n)).astype(np.int64)


def _uniform(q, lo, hi, _flags):
    n = _blocks.arange(lo, hi)
    psi = np.full(hi - lo, q.psi(q.N))
    return _product_hits(_log2_dists(q, n), psi).astype(np.int64)


def _coprime_candidates(q, n):
    raw = q.alpha[0].raw
    frac = frac_mul_array(n, raw)
    base = mulhi_array(n, raw).astype(np.int64)
    t = floor_threshold(q.psi.values(n))
    low_ok = frac <= t
    high_ok = (frac != 0) & ((np.uint64(0) - frac) <= t)
    ni = n.astype(np.int64)
    low_ok &= np.gcd(base, ni) == 1
    high_ok &= np.gcd(base + 1, ni) == 1
    return base, low_ok, high_ok


def _coprime(q, lo, hi, _flags):
    _, low_ok, high_ok = _coprime_candidates(q, _blocks.arange(lo, hi))
    return low_ok.astype(np.int64) + high_ok.astype(np.int64)


def _relaxed(q, lo, hi, flags, cap=None):
    cap = 2 * q.N if cap is None else cap
    if q.gamma[-1].raw:
        flags.add("gamma_k_ignored")
        q = CountQuery(q.alpha, q.N, q.psi, q.mode, q.gamma[:-1] + (ZERO,))
    n = _blocks.arange(lo, hi)
    psi = q.psi.values(n)
    logs = _log2_dists(q, n)
    nearest = _product_hits(logs, psi)
    s = logs[0].copy()
    for lg in logs[1:-1]:
        s += lg
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        R = np.exp2(np.log2(psi) - s)
    R = np.where(psi > 0, R, 0.0)
    degenerate = np.isinf(s) & (psi > 0)
    big = R > 2 * q.N
    if degenerate.any():
        flags.add("zero_product_capped")
    if big.any():
        flags.add("cap_exceeded")
    R = np.minimum(R, cap + 1.0)
    d = to_float(dist_raw_array(frac_mul_array(n, q.alpha[-1].raw)))
    far = (np.maximum(0.0, np.ceil(R - d) - 1.0) + np.maximum(0.0, np.ceil(R + d) - 1.0))
    total = nearest.astype(np.int64) + far.astype(np.int64)
    return np.minimum(total, cap)


_KERNELS = {
    Mode.SIMULTANEOUS: _simultaneous,
    Mode.MULTIPLICATIVE: _multiplicative,
    Mode.MULTIPLICATIVE_UNIFORM: _uniform,
    Mode.COPRIME_PAIRS: _coprime,
    Mode.RELAXED_PAIRS: _relaxed,
}


def _gamma_flags(q: CountQuery) -> set:
    flags = set()
    if q.mode is Mode.SIMULTANEOUS and any(g.raw for g in q.gamma):
        flags.add("inhomogeneous_extension")
    return flags


def _scan(q: CountQuery, checkpoints, threads, max_hits):
    flags = _gamma_flags(q)
    kernel = _KERNELS[q.mode]
    segs = _blocks.segments(checkpoints)

    def work(lo, hi):
        local = set()
        c = kernel(q, lo, hi, local)
        nz = np.flatnonzero(c)
        nnz = len(nz)
        wit = None
        if max_hits:
            nz = nz[:max_hits]
            if q.mode is Mode.COPRIME_PAIRS:
                n = _blocks.arange(lo, hi)[nz]
                base, low_ok, high_ok = _coprime_candidates(q, n)
                ni = n.astype(np.int64)
                pairs = [np.stack([ni[low_ok], base[low_ok]], axis=1),
                         np.stack([ni[high_ok], base[high_ok] + 1], axis=1)]
                wit = np.concatenate(pairs)
                wit = wit[np.lexsort((wit[:, 1], wit[:, 0]))]
            else:
                wit = nz.astype(np.int64) + lo
        return int(c.sum()), wit, local, nnz

    parts = _blocks.run(work, segs, threads)
    for part in parts:
        flags |= part[2]
    counts = _blocks.at_checkpoints([p[0] for p in parts], segs, checkpoints)
    return counts, parts, segs, flags


def count(q: CountQuery, threads: int | None = None, max_hits: int = MAX_HITS) -> CountResult:
    """Count ``q`` over n in [1, q.N]; dispatches on ``q.mode``."""
    counts, parts, _, flags = _scan(q, [q.N], threads, max_hits)
    shape = (0, 2) if q.mode is Mode.COPRIME_PAIRS else (0,)
    wits = [p[1] for p in parts if p[1] is not None and len(p[1])]
    hits = np.concatenate(wits) if wits else np.empty(shape, dtype=np.int64)
    available = counts[0] if q.mode is Mode.COPRIME_PAIRS else sum(p[3] for p in parts)
    truncated = available > len(hits[:max_hits])
    hits = hits[:max_hits]
    return CountResult(counts[0], hits, truncated, sorted(flags))


def count_at(q: CountQuery, checkpoints, threads: int | None = None) -> list[int]:
    """Counts at several N in one pass (one pass per N for the uniform mode,
    whose threshold psi(N) moves with N)."""
    if q.mode is Mode.MULTIPLICATIVE_UNIFORM:
        return [count(q.with_N(int(N)), threads, max_hits=0).count for N in checkpoints]
    q = q.with_N(max(int(c) for c in checkpoints))
    counts, _, _, _ = _scan(q, checkpoints, threads, 0)
    return counts


def _require(q: CountQuery, mode: Mode):
    if q.mode is not mode:
        raise ValueError(f"query mode is {q.mode.value}, expected {mode.value}")


def count_simultaneous(q: CountQuery, **kw) -> CountResult:
    """#{n <= N : max_i ||n alpha_i - gamma_i|| < psi(n)}."""
    _require(q, Mode.SIMULTANEOUS)
    return count(q, **kw)


def count_multiplicative(q: CountQuery, **kw) -> CountResult:
    """#{n <= N : prod_i ||n alpha_i - gamma_i|| < psi(n)}."""
    _require(q, Mode.MULTIPLICATIVE)
    return count(q, **kw)


def count_multiplicative_uniform(q: CountQuery, **kw) -> CountResult:
    """As :func:`count_multiplicative` with the threshold frozen at psi(N)."""
    _require(q, Mode.MULTIPLICATIVE_UNIFORM)
    return count(q, **kw)


def count_coprime_pairs(q: CountQuery, **kw) -> CountResult:
    """Coprime (a, n) with n <= N and |alpha - a/n| <= psi(n)/n.

    Since psi(n) <= 1/2 at most the two integers adjacent to n*alpha qualify.
    """
    _require(q, Mode.COPRIME_PAIRS)
    return count(q, **kw)


def count_relaxed_pairs(q: CountQuery, **kw) -> CountResult:
    """Pairs (n, a_k) with ``P(n) * |n alpha_k - a_k| < psi(n)``, where P(n) is the
    product of the first k-1 shifted distances.

    The nearest a_k is decided by the same predicate as the multiplicative
    count, so this count dominates it. A zero P(n) (or psi(n)/P(n) > 2N)
    contributes at most ``2N`` and raises a flag.
    """
    _require(q, Mode.RELAXED_PAIRS)
    return count(q, **kw)
