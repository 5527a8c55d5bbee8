"""Inhomogeneous Bohr sets and the fibre-counting sums built from them.

    B(N; delta) = {n in Z : |n| <= N, ||n alpha_i - gamma_i|| <= delta_i for all i}
    G           = {n >= 1 : ||n alpha_i - gamma_i|| >= n^-sqrt(eps) for all i}
    U_N         = sum_{n <= N, n in G} phi(n) psi(n) / (n prod_i ||n alpha_i - gamma_i||)

Vectors alpha, gamma, delta here have k-1 coordinates (the fibre).

Note on G: distances never exceed 1/2, so n belongs to G only once
n^-sqrt(eps) <= 1/2, i.e. n >= 2^(1/sqrt(eps)). With the admissible
eps <= (1/(10k))^2 that is n >= 2^(10k); in particular 1 is never in G.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _blocks
from .fixedpoint import (ZERO, Frac64, dist_raw_array, floor_threshold, frac_mul_array,
                         to_float)
from .psi import ApproxFunction


@dataclass(frozen=True)
class BohrSetSpec:
    N: int
    alpha: tuple
    delta: tuple
    gamma: tuple | None = None

    def __post_init__(self):
        alpha = tuple(self.alpha)
        gamma = tuple(self.gamma) if self.gamma is not None else (ZERO,) * len(alpha)
        delta = tuple(float(d) for d in self.delta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "delta", delta)
        if not (len(alpha) == len(gamma) == len(delta)) or not alpha:
            raise ValueError("alpha, gamma and delta must have the same positive length")
        if any(not 0 < d <= 0.5 for d in delta):
            raise ValueError("each delta_i must lie in (0, 1/2]")
        if self.N < 0:
            raise ValueError("N must be non-negative")


@dataclass(frozen=True)
class EpsilonChoice:
    epsilon: float
    w: float
    kappa: float
    k: int
    m: float
    halved: bool = False


def fibre_exponent_limit(k: int) -> float:
    """(k-1)/(k-2), read as infinity for k = 2."""
    return math.inf if k == 2 else (k - 1) / (k - 2)


def epsilon_select(k: int, w: float, kappa: float) -> EpsilonChoice:
    """Largest eps with 10 k sqrt(eps) <= m, m = min(1/w - (k-2)/(k-1), kappa).

    m must lie in (0, 1); a value m >= 1 is halved before use.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    if w >= fibre_exponent_limit(k):
        raise ValueError(f"fibre hypothesis violated: w={w} >= (k-1)/(k-2)")
    m = min(1.0 / w - (k - 2) / (k - 1), kappa)
    if m <= 0:
        raise ValueError("fibre hypothesis violated: 1/w - (k-2)/(k-1) <= 0")
    halved = m >= 1
    if halved:
        m = m / 2
    return EpsilonChoice((m / (10 * k)) ** 2, w, kappa, k, m, halved)


def _coord_dists(alpha, gamma, n: np.ndarray, sign: int = 1):
    """Raw distances ||n alpha_i - gamma_i|| for each coordinate; ``sign=-1``
    evaluates at -n without negative integers."""
    for a, g in zip(alpha, gamma):
        x = frac_mul_array(n, a.raw)
        if sign < 0:
            x = np.uint64(0) - x
        yield dist_raw_array(x, g.raw)


def enumerate_bohr(spec: BohrSetSpec, threads: int | None = None) -> np.ndarray:
    """Sorted members of B(N; delta), negatives and 0 included, with non-strict <=."""
    thr = [floor_threshold(d).item() for d in spec.delta]

    def members(lo, hi, sign):
        n = _blocks.arange(lo, hi)
        ok = np.ones(hi - lo, dtype=bool)
        for d, t in zip(_coord_dists(spec.alpha, spec.gamma, n, sign), thr):
            ok &= d <= np.uint64(t)
        return n[ok].astype(np.int64) * sign

    zero_in = all(min(g.raw, (1 << 64) - g.raw) <= t for g, t in zip(spec.gamma, thr))
    if spec.N == 0:
        return np.array([0] if zero_in else [], dtype=np.int64)
    segs = _blocks.segments([spec.N])
    pos = _blocks.run(lambda lo, hi: members(lo, hi, 1), segs, threads)
    neg = _blocks.run(lambda lo, hi: members(lo, hi, -1), segs, threads)
    neg = np.concatenate(neg)[::-1]
    mid = np.array([0] if zero_in else [], dtype=np.int64)
    return np.concatenate([neg, mid, np.concatenate(pos)])


def bohr_count(spec: BohrSetSpec, threads: int | None = None) -> int:
    return len(enumerate_bohr(spec, threads))


@dataclass
class BohrDensity:
    count: int
    normalized_ratio: float
    expected: float


def bohr_density_report(spec: BohrSetSpec, threads: int | None = None) -> BohrDensity:
    """count, count / (prod delta * N), and the equidistribution guess
    (2N+1) prod min(2 delta_i, 1)."""
    c = bohr_count(spec, threads)
    vol = math.prod(spec.delta)
    expected = (2 * spec.N + 1) * math.prod(min(2 * d, 1.0) for d in spec.delta)
    ratio = c / (vol * spec.N) if spec.N else math.nan
    return BohrDensity(c, ratio, expected)


def restrict_hat(members: np.ndarray, N: int, epsilon: float) -> np.ndarray:
    """B-hat: members lying in [N^sqrt(eps), N]."""
    lo = N ** math.sqrt(epsilon)
    members = np.asarray(members)
    return members[(members >= lo) & (members <= N)]


def _g_mask(alpha, gamma, epsilon: float, n: np.ndarray) -> np.ndarray:
    # ties count as members (>=)
    thr = n.astype(np.float64) ** -math.sqrt(epsilon)
    ok = np.ones(len(n), dtype=bool)
    for d in _coord_dists(alpha, gamma, n):
        ok &= to_float(d) >= thr
    return ok


def in_G(n: int, alpha, gamma, epsilon: float) -> bool:
    return bool(_g_mask(tuple(alpha), tuple(gamma), epsilon, np.array([n], dtype=np.uint64))[0])


def restricted_set_G(alpha, gamma, epsilon: float, N: int,
                     threads: int | None = None) -> np.ndarray:
    """Members of G in [1, N], ascending."""
    alpha, gamma = tuple(alpha), tuple(gamma)
    segs = _blocks.segments([N])
    parts = _blocks.run(lambda lo, hi: (np.flatnonzero(
        _g_mask(alpha, gamma, epsilon, _blocks.arange(lo, hi))) + lo).astype(np.int64),
        segs, threads)
    return np.concatenate(parts)


def u_n_terms(alpha, gamma, psi: ApproxFunction, epsilon: float, lo: int, hi: int,
              phi_table: np.ndarray) -> np.ndarray:
    n = _blocks.arange(lo, hi)
    mask = _g_mask(alpha, gamma, epsilon, n)
    log2p = np.zeros(hi - lo)
    with np.errstate(divide="ignore"):
        for d in _coord_dists(alpha, gamma, n):
            log2p += np.log2(to_float(d))
    nf = n.astype(np.float64)
    out = np.zeros(hi - lo)
    sel = mask
    out[sel] = (phi_table[lo:hi][sel] / nf[sel]) * psi.values(n[sel]) * np.exp2(-log2p[sel])
    return out


def u_n_sum(alpha, gamma, psi: ApproxFunction, epsilon: float, N, phi_table=None,
            threads: int | None = None):
    """U_N over n in G. ``N`` may be an int or a list of checkpoints (then a list is
    returned)."""
    from .predictors import _phi_table

    cps = [int(c) for c in (N if isinstance(N, (list, tuple)) else [N])]
    top = max(cps)
    if phi_table is None:
        phi_table = _phi_table(top)
    elif len(phi_table) <= top:
        raise ValueError("phi_table does not cover [1, N]")
    alpha, gamma = tuple(alpha), tuple(gamma)
    segs = _blocks.segments(cps)
    parts = _blocks.run(lambda lo, hi: _blocks.fsum(
        u_n_terms(alpha, gamma, psi, epsilon, lo, hi, phi_table)), segs, threads)
    sums = _blocks.at_checkpoints(parts, segs, cps, reduce=_blocks.fsum)
    return sums if isinstance(N, (list, tuple)) else sums[0]


@dataclass
class DyadicCells:
    per_axis: list
    cells: list
    count: int


def dyadic_cells(N: int, k: int, epsilon: float, enumerate_cells: bool = True) -> DyadicCells:
    """(k-1)-tuples of dyadic scales 2^-j with N^-sqrt(eps) <= 2^-j <= 1/2.

    Along each axis j runs over 1 .. floor(sqrt(eps) log2 N). Set
    ``enumerate_cells=False`` to get only the count for huge N.
    """
    if N < 4:
        raise ValueError("N must be >= 4")
    if k < 2:
        raise ValueError("k must be >= 2")
    jmax = math.floor(math.sqrt(epsilon) * math.log2(N))
    axis = [2.0 ** -j for j in range(1, jmax + 1)]
    count = len(axis) ** (k - 1)
    cells = list(itertools.product(axis, repeat=k - 1)) if enumerate_cells else []
    return DyadicCells(axis, cells, count)
