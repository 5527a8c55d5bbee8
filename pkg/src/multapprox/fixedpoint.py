"""Exact mod-1 arithmetic on 64-bit fixed-point fractional parts.

A real number x is stored by the integer ``raw = floor(frac(x) * 2**64)``.
Every count in this package is exact for that dyadic representative, not for
x itself. Multiplication by an integer is a wrapping 64-bit multiply, so
``n * alpha mod 1`` carries no rounding error at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

SCALE = 1 << 64
MASK = SCALE - 1
HALF = 1 << 63
INV_SCALE = 2.0 ** -64


@dataclass(frozen=True, order=True)
class Frac64:
    """A point of the circle R/Z, stored as ``raw / 2**64``."""

    raw: int

    def __post_init__(self):
        if not 0 <= self.raw < SCALE:
            raise ValueError(f"raw must lie in [0, 2**64), got {self.raw}")

    @property
    def value(self) -> float:
        return self.raw * INV_SCALE

    def as_fraction(self) -> Fraction:
        return Fraction(self.raw, SCALE)

    def hex(self) -> str:
        return f"0x{self.raw:016x}"

    def __neg__(self) -> Frac64:
        return Frac64((-self.raw) & MASK)

    def __add__(self, other: Frac64) -> Frac64:
        return Frac64((self.raw + other.raw) & MASK)

    def __sub__(self, other: Frac64) -> Frac64:
        return Frac64((self.raw - other.raw) & MASK)

    def __repr__(self):
        return f"Frac64({self.hex()})"


ZERO = Frac64(0)


def from_real(x) -> Frac64:
    """Round ``frac(x)`` down to the grid ``2**-64``.

    Accepts floats, ints, Fractions and Decimals; all are converted exactly
    before truncation, so ``from_real(Fraction(1, 3)).raw == 2**64 // 3``.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite input {x!r}")
        q = Fraction(x)
    elif isinstance(x, Decimal):
        if not x.is_finite():
            raise ValueError(f"non-finite input {x!r}")
        q = Fraction(x)
    elif isinstance(x, (Rational, int)):
        q = Fraction(x)
    elif isinstance(x, Real):
        return from_real(float(x))
    else:
        raise TypeError(f"cannot convert {type(x).__name__} to Frac64")
    q -= math.floor(q)
    return Frac64(math.floor(q * SCALE))


def from_sqrt(m: int) -> Frac64:
    """Fractional part of sqrt(m), truncated to 64 bits with integer sqrt."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return Frac64(math.isqrt(m << 128) & MASK)


def golden() -> Frac64:
    """(sqrt(5) - 1) / 2, the fractional part of the golden ratio."""
    return Frac64(((math.isqrt(5 << 128) - SCALE) // 2) & MASK)


def parse(text: str) -> Frac64:
    """Parse a hex raw (``0x...``), ``sqrt:m``, ``golden`` or a decimal literal.

    Decimal literals go through :class:`decimal.Decimal`, so digits beyond
    double precision are honoured.
    """
    s = text.strip().lower()
    if s.startswith("0x"):
        raw = int(s, 16)
        if raw >= SCALE:
            raise ValueError(f"hex raw {text!r} exceeds 64 bits")
        return Frac64(raw)
    if s == "golden":
        return golden()
    if s.startswith("sqrt:"):
        return from_sqrt(int(s[5:]))
    if "/" in s:
        return from_real(Fraction(s))
    try:
        return from_real(Decimal(s))
    except ArithmeticError as exc:
        raise ValueError(f"cannot parse {text!r} as a real") from exc


def frac_mul(n: int, a: Frac64) -> Frac64:
    """``n * a mod 1``, exact."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Frac64((n * a.raw) & MASK)


def dist_nearest(a: Frac64, shift: Frac64 = ZERO) -> float:
    """``||a - shift||``, the distance from ``a - shift`` to the nearest integer.

    The difference and the fold to [0, 1/2] happen on integers; the result is
    converted to float once.
    """
    d = (a.raw - shift.raw) & MASK
    return min(d, SCALE - d) * INV_SCALE


def dist_raw(a: Frac64, shift: Frac64 = ZERO) -> int:
    """Exact ``||a - shift|| * 2**64`` as an integer in [0, 2**63]."""
    d = (a.raw - shift.raw) & MASK
    return min(d, SCALE - d)


# Vectorised kernels. numpy uint64 arithmetic wraps modulo 2**64 for arrays.

def frac_mul_array(n: np.ndarray, raw: int) -> np.ndarray:
    return n * np.uint64(raw)


def dist_raw_array(x: np.ndarray, shift: int = 0) -> np.ndarray:
    """Fold ``x - shift`` to its distance from Z, in units of 2**-64 (uint64)."""
    d = x - np.uint64(shift) if shift else x
    return np.minimum(d, np.uint64(0) - d)


def mulhi_array(n: np.ndarray, raw: int) -> np.ndarray:
    """``floor(n * raw / 2**64)`` for n < 2**32, i.e. the integer part of n*alpha."""
    hi = np.uint64(raw >> 32)
    lo = np.uint64(raw & 0xFFFFFFFF)
    return (n * hi + ((n * lo) >> np.uint64(32))) >> np.uint64(32)


def to_float(d: np.ndarray) -> np.ndarray:
    return d.astype(np.float64) * INV_SCALE


def ceil_threshold(t: np.ndarray) -> np.ndarray:
    """Integer T with ``raw < T  <=>  raw * 2**-64 < t`` for t in [0, 1/2]."""
    return np.ceil(np.asarray(t, dtype=np.float64) * 2.0 ** 64).astype(np.uint64)


def floor_threshold(t: np.ndarray) -> np.ndarray:
    """Integer T with ``raw <= T  <=>  raw * 2**-64 <= t`` for t in [0, 1/2]."""
    return np.floor(np.asarray(t, dtype=np.float64) * 2.0 ** 64).astype(np.uint64)
