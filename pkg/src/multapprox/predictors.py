"""Main terms for the counting functions.

    psi_k           sum (2 psi(n))^k                               simultaneous
    psi_times       1/(k-1)! sum psi(n) (-log(2^k psi(n)))^(k-1)    multiplicative
    psi_times_log   sum psi(n) (log n)^(k-1)                       multiplicative, lower order
    psi_abh         sum 2 phi(n)/n psi(n)                          coprime pairs
    t_k             2^k sum vol(C_k(psi(n)))                       multiplicative, exact volume

All series are accumulated block by block with correctly rounded sums
(math.fsum), with block boundaries fixed by the checkpoints, so partial sums
are bit-reproducible for any thread count.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _blocks
from .geometry import volume_B_array, volume_C_array
from .psi import ApproxFunction

PHI_MEMORY_BUDGET = 2 * 1024 ** 3  # bytes


class Kind(enum.Enum):
    SCHMIDT_PSI_K = "psi_k"
    WANGYU_PSI_TIMES = "psi_times"
    LOG_PSI_TIMES = "psi_times_log"
    ABH_PSI = "psi_abh"
    TK = "t_k"
    UNIFORM_TK = "uniform_t_k"


def euler_phi_sieve(N: int, budget: int = PHI_MEMORY_BUDGET) -> np.ndarray:
    """Totients phi(0..N) as an int64 array (phi[0] = 0), by prime sieving."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if 9 * (N + 1) > budget:
        raise MemoryError(f"totient table for N={N} exceeds the {budget}-byte budget")
    phi = np.arange(N + 1, dtype=np.int64)
    composite = np.zeros(N + 1, dtype=bool)
    composite[:2] = True
    for p in range(2, N + 1):
        if p * p > N:
            break
        if not composite[p]:
            composite[p * p::p] = True
    for p in np.flatnonzero(~composite):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi


_PHI_CACHE: dict[int, np.ndarray] = {}


def _phi_table(N: int) -> np.ndarray:
    for size, table in _PHI_CACHE.items():
        if size >= N:
            return table
    table = euler_phi_sieve(N)
    _PHI_CACHE.clear()
    _PHI_CACHE[N] = table
    return table


# per-term formulas ---------------------------------------------------------

def psi_times_terms(psi: np.ndarray, k: int) -> np.ndarray:
    """psi (-log(2^k psi))^(k-1) / (k-1)!, with x(-log x)^d = 0 at x = 0."""
    if k == 1:
        return psi.astype(np.float64, copy=True)
    out = np.zeros_like(psi, dtype=np.float64)
    pos = psi > 0
    p = psi[pos]
    out[pos] = p * (-np.log(2.0 ** k * p)) ** (k - 1) / math.factorial(k - 1)
    return out


def _terms(kind: Kind, k: int, psi: ApproxFunction, lo: int, hi: int, N: int,
           phi: np.ndarray | None) -> np.ndarray:
    n = np.arange(lo, hi, dtype=np.int64)
    if kind is Kind.UNIFORM_TK:
        lam = np.full(hi - lo, 2.0 ** k * psi(N))
        return volume_B_array(k, lam)
    v = psi.values(n)
    if kind is Kind.SCHMIDT_PSI_K:
        return (2.0 * v) ** k
    if kind is Kind.WANGYU_PSI_TIMES:
        return psi_times_terms(v, k)
    if kind is Kind.LOG_PSI_TIMES:
        return v * np.log(n.astype(np.float64)) ** (k - 1)
    if kind is Kind.ABH_PSI:
        # phi(n)/n as one correctly rounded division of exact integers
        return 2.0 * (phi[lo:hi] / n) * v
    return 2.0 ** k * volume_C_array(k, v)


@dataclass
class PredictorSeries:
    kind: Kind
    k: int
    psi: ApproxFunction
    partial_sums: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)


def series(kind: Kind | str, checkpoints, k: int, psi: ApproxFunction,
           threads: int | None = None, phi_table: np.ndarray | None = None) -> PredictorSeries:
    """Partial sums of a predictor at each checkpoint."""
    kind = Kind(kind)
    cps = [int(c) for c in checkpoints]
    if k < 1:
        raise ValueError("k must be >= 1")
    top = max(cps)
    flags = set()
    if kind is Kind.ABH_PSI:
        if phi_table is None:
            phi_table = _phi_table(top)
        elif len(phi_table) <= top:
            raise ValueError("phi_table does not cover [1, N]")

    if kind is Kind.UNIFORM_TK:
        values = {}
        for N in cps:
            segs = _blocks.segments([N])
            parts = _blocks.run(lambda lo, hi, N=N: _blocks.fsum(
                _terms(kind, k, psi, lo, hi, N, None)), segs, threads)
            values[N] = _blocks.fsum(parts)
        return PredictorSeries(kind, k, psi, values, [])

    segs = _blocks.segments(cps)

    def work(lo, hi):
        t = _terms(kind, k, psi, lo, hi, top, phi_table)
        local = set()
        if kind is Kind.WANGYU_PSI_TIMES and k >= 2:
            v = psi.values(np.arange(lo, hi))
            if np.any(v >= 2.0 ** -k):
                local.add("outside_derivation_regime")
        return _blocks.fsum(t), local

    parts = _blocks.run(work, segs, threads)
    for _, f in parts:
        flags |= f
    sums = _blocks.at_checkpoints([p[0] for p in parts], segs, cps, reduce=_blocks.fsum)
    return PredictorSeries(kind, k, psi, dict(zip(cps, sums)), sorted(flags))


def psi_k(N: int, k: int, psi: ApproxFunction, **kw) -> float:
    """Sum over n <= N of (2 psi(n))^k."""
    return series(Kind.SCHMIDT_PSI_K, [N], k, psi, **kw).partial_sums[N]


def psi_times(N: int, k: int, psi: ApproxFunction, **kw) -> float:
    """(1/(k-1)!) sum psi(n) (-log(2^k psi(n)))^(k-1).

    Terms with psi(n) > 2^-k are summed literally and carry the sign
    (-1)^(k-1); :func:`series` reports any psi(n) >= 2^-k with the
    ``outside_derivation_regime`` flag. For k = 1 this is sum psi(n).
    """
    return series(Kind.WANGYU_PSI_TIMES, [N], k, psi, **kw).partial_sums[N]


def psi_times_log(N: int, k: int, psi: ApproxFunction, **kw) -> float:
    """Sum over n <= N of psi(n) (log n)^(k-1); the n = 1 term vanishes for k >= 2."""
    return series(Kind.LOG_PSI_TIMES, [N], k, psi, **kw).partial_sums[N]


def psi_abh(N: int, psi: ApproxFunction, phi_table: np.ndarray | None = None, **kw) -> float:
    return series(Kind.ABH_PSI, [N], 1, psi, phi_table=phi_table, **kw).partial_sums[N]


def t_k(N: int, k: int, psi: ApproxFunction, **kw) -> float:
    """2^k sum vol_k(C_k(psi(n))), evaluated term by term with the exact volume."""
    return series(Kind.TK, [N], k, psi, **kw).partial_sums[N]


def uniform_t_k(N: int, k: int, psi: ApproxFunction, **kw) -> float:
    """N * vol_k(B_k(2^k psi(N))): expected size of the uniform companion count."""
    return series(Kind.UNIFORM_TK, [N], k, psi, **kw).partial_sums[N]
