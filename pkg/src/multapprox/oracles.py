"""Slow reference implementations in exact integer / rational arithmetic.

None of these share code with the vectorised paths: each evaluates the
defining condition literally, one n (or one pair) at a time. They back the
test-suite and the ``selfcheck`` subcommand.
"""
from __future__ import annotations

import math
from fractions import Fraction

SCALE = 1 << 64


def _dist(n: int, raw: int, shift: int = 0) -> Fraction:
    x = (n * raw - shift) % SCALE
    return Fraction(min(x, SCALE - x), SCALE)


def _psi(psi, n: int) -> Fraction:
    return Fraction(psi(n))


def simultaneous(alpha, gamma, N, psi) -> int:
    c = 0
    for n in range(1, N + 1):
        p = _psi(psi, n)
        if all(_dist(n, a.raw, g.raw) < p for a, g in zip(alpha, gamma)):
            c += 1
    return c


def multiplicative(alpha, gamma, N, psi, uniform=False) -> int:
    c = 0
    pN = _psi(psi, N)
    for n in range(1, N + 1):
        prod = Fraction(1)
        for a, g in zip(alpha, gamma):
            prod *= _dist(n, a.raw, g.raw)
        if prod < (pN if uniform else _psi(psi, n)):
            c += 1
    return c


def coprime_pairs(alpha, N, psi) -> int:
    """Double loop over n and every a with a/n in [-1, 2]; non-strict condition
    n |alpha - a/n| <= psi(n), checked as an integer inequality."""
    raw = alpha.raw
    c = 0
    for n in range(1, N + 1):
        p = _psi(psi, n)
        for a in range(-n, 2 * n + 1):
            lhs = abs(n * raw - a * SCALE) * p.denominator
            if lhs <= p.numerator * SCALE and math.gcd(a, n) == 1:
                c += 1
    return c


def relaxed_pairs(alpha, gamma, N, psi, cap=None) -> int:
    cap = 2 * N if cap is None else cap
    c = 0
    for n in range(1, N + 1):
        p = _psi(psi, n)
        P = Fraction(1)
        for a, g in zip(alpha[:-1], gamma[:-1]):
            P *= _dist(n, a.raw, g.raw)
        if p == 0:
            continue
        if P == 0:
            c += cap
            continue
        R = p / P
        x = Fraction(n * alpha[-1].raw, SCALE)
        lo, hi = math.floor(x - R), math.ceil(x + R)
        m = sum(1 for a in range(lo, hi + 1) if abs(x - a) < R)
        c += min(m, cap)
    return c


def totient(n: int) -> int:
    return sum(1 for m in range(1, n + 1) if math.gcd(m, n) == 1)


def bohr(alpha, gamma, delta, N) -> list[int]:
    out = []
    for n in range(-N, N + 1):
        if all(_dist(n, a.raw, g.raw) <= Fraction(d) for a, g, d in zip(alpha, gamma, delta)):
            out.append(n)
    return out


def littlewood_final(alpha, beta, N) -> Fraction:
    return min(n * _dist(n, alpha.raw) * _dist(n, beta.raw) for n in range(1, N + 1))


def psi_series(terms, N) -> float:
    return math.fsum(terms(n) for n in range(1, N + 1))


def u_n(alpha, gamma, psi, epsilon, N) -> float:
    """Direct sum of phi(n) psi(n) / (n prod ||n alpha_i - gamma_i||) over n in G."""
    terms = []
    for n in range(1, N + 1):
        ds = [_dist(n, a.raw, g.raw) for a, g in zip(alpha, gamma)]
        if all(float(d) >= n ** -math.sqrt(epsilon) for d in ds):
            prod = math.prod(ds)
            terms.append(totient(n) * psi(n) / (n * float(prod)))
    return math.fsum(terms)
