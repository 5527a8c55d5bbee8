"""Volumes of the product regions

    B_k(lam) = {x in [0,1]^k   : x_1 ... x_k <= lam}
    C_k(lam) = {x in [0,1/2]^k : x_1 ... x_k <= lam}

in closed form, and by Monte Carlo as an independent check.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

MC_BATCH = 1 << 20
PRNG_ID = "numpy.PCG64+SeedSequence"


class Box(enum.Enum):
    UNIT = "unit"
    HALF = "half"


@dataclass(frozen=True)
class ProductRegion:
    k: int
    lam: float
    box: Box = Box.UNIT

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.lam > 0:
            raise ValueError("lambda must be > 0")
        object.__setattr__(self, "box", Box(self.box))

    @property
    def side(self) -> float:
        return 1.0 if self.box is Box.UNIT else 0.5

    def exact(self) -> float:
        if self.box is Box.UNIT:
            return volume_B_exact(self.k, self.lam)
        return volume_C_exact(self.k, self.lam)


def volume_B_exact(k: int, lam: float) -> float:
    """``lam * sum_{s<k} (-log lam)^s / s!`` for lam < 1, else 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    if lam >= 1:
        return 1.0
    L = -math.log(lam)
    term, total = 1.0, 1.0
    for s in range(1, k):
        term *= L / s
        total += term
    return lam * total


def volume_C_exact(k: int, lam: float) -> float:
    """``2^-k * vol(B_k(2^k lam))``."""
    return volume_B_exact(k, 2.0 ** k * lam) * 2.0 ** -k


def volume_B_array(k: int, lam: np.ndarray) -> np.ndarray:
    """Vectorised :func:`volume_B_exact`; lam = 0 gives 0 (a null set)."""
    lam = np.asarray(lam, dtype=np.float64)
    out = np.ones_like(lam)
    small = lam < 1
    x = lam[small]
    with np.errstate(divide="ignore", invalid="ignore"):
        L = -np.log(x)
        term = np.ones_like(x)
        total = np.ones_like(x)
        for s in range(1, k):
            term = term * L / s
            total += term
        vals = x * total
    out[small] = np.where(x > 0, vals, 0.0)
    return out


def volume_C_array(k: int, lam: np.ndarray) -> np.ndarray:
    return volume_B_array(k, 2.0 ** k * np.asarray(lam, dtype=np.float64)) * 2.0 ** -k


def volume_monte_carlo(region: ProductRegion, samples: int, seed: int,
                       batch: int = MC_BATCH) -> tuple[float, float]:
    """Estimate the region's volume by uniform sampling of its box.

    Batches draw from independent child streams of ``SeedSequence(seed)``,
    so the estimate depends only on (region, samples, seed, batch).
    Returns (estimate, binomial standard error).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    nb = -(-samples // batch)
    children = np.random.SeedSequence(seed).spawn(nb)
    side = region.side
    hits = 0
    for i, child in enumerate(children):
        m = min(batch, samples - i * batch)
        rng = np.random.Generator(np.random.PCG64(child))
        x = rng.random((m, region.k)) * side
        hits += int(np.count_nonzero(np.prod(x, axis=1) <= region.lam))
    box = side ** region.k
    p = hits / samples
    return p * box, box * math.sqrt(p * (1 - p) / samples)
