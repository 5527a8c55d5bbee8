"""Quick oracle comparisons for the ``selfcheck`` subcommand (a few seconds)."""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from . import bohr, counting, exponents, oracles, predictors
from .experiments import sample_alpha
from .fixedpoint import Frac64, frac_mul
from .geometry import ProductRegion, volume_B_exact, volume_monte_carlo
from .psi import constant, powerlog


def _counter_checks(seed):
    N = 300
    psis = [powerlog(0.5, 1.0, 0.0), powerlog(1.0, 0.5, 0.0), constant(0.25)]
    alphas = sample_alpha(seed, 3, 3)
    gammas = sample_alpha(seed + 1, 3, 3)
    ok = {m: True for m in counting.Mode}
    for a, g, psi in zip(alphas, gammas, psis):
        for mode in counting.Mode:
            k = 1 if mode is counting.Mode.COPRIME_PAIRS else (3 if mode is counting.Mode.SIMULTANEOUS else 2)
            al, ga = a[:k], g[:k]
            q = counting.CountQuery(al, N, psi, mode, ga)
            fast = counting.count(q, max_hits=0).count
            if mode is counting.Mode.SIMULTANEOUS:
                ref = oracles.simultaneous(al, ga, N, psi)
            elif mode is counting.Mode.MULTIPLICATIVE:
                ref = oracles.multiplicative(al, ga, N, psi)
            elif mode is counting.Mode.MULTIPLICATIVE_UNIFORM:
                ref = oracles.multiplicative(al, ga, N, psi, uniform=True)
            elif mode is counting.Mode.COPRIME_PAIRS:
                ref = oracles.coprime_pairs(al[0], N, psi)
            else:
                ref = oracles.relaxed_pairs(al, ga, N, psi)
            ok[mode] &= fast == ref
    return [(f"count {m.value} == brute force", v) for m, v in ok.items()]


def run_all(seed: int = 0) -> list[tuple[str, bool]]:
    out = []
    a = Frac64(0x9E3779B97F4A7C15)
    out.append(("frac_mul exact vs repeated addition",
                all(frac_mul(n, a).raw == (n * a.raw) % 2**64 for n in range(1, 2000))))
    phi = predictors.euler_phi_sieve(2000)
    out.append(("totient sieve == gcd count (n <= 2000)",
                all(phi[n] == oracles.totient(n) for n in range(1, 2001))))
    out += _counter_checks(seed)

    alpha = sample_alpha(seed + 2, 1, 1)[0]
    spec = bohr.BohrSetSpec(400, alpha, (0.1,))
    out.append(("bohr enumeration == brute force",
                bohr.enumerate_bohr(spec).tolist() == oracles.bohr(alpha, spec.gamma, (0.1,), 400)))

    x, y = sample_alpha(seed + 3, 1, 2)[0]
    trail = exponents.littlewood_records(x, y, 2000)
    out.append(("littlewood final record == brute force",
                math.isclose(float(trail.final), float(oracles.littlewood_final(x, y, 2000)),
                             rel_tol=1e-12)))

    worst = 0.0
    for k in (2, 3, 4):
        for lam in (0.9, 0.5, 0.1, 0.01):
            rhs = lam + integrate.quad(lambda t: volume_B_exact(k - 1, lam / t), lam, 1,
                                       epsabs=1e-13, epsrel=1e-13)[0]
            worst = max(worst, abs(volume_B_exact(k, lam) - rhs))
    out.append(("volume induction identity (1e-8)", worst < 1e-8))

    est, se = volume_monte_carlo(ProductRegion(2, 0.5), 10**6, seed)
    out.append(("volume Monte Carlo within 4 stderr", abs(est - volume_B_exact(2, 0.5)) < 4 * se))

    psi = powerlog(1.0, 1.0, 0.0)
    ref = oracles.psi_series(lambda n: psi(n) * math.log(n), 1000)
    out.append(("psi_times_log == direct sum",
                math.isclose(predictors.psi_times_log(1000, 2, psi), ref, rel_tol=1e-13)))
    return out
