import math

import numpy as np
import pytest

from multapprox import exponents as ex, fixedpoint as fp, oracles
from multapprox.experiments import sample_alpha

Z = fp.ZERO


def test_zero_coordinate_sentinel(sqrt2):
    assert ex.estimate_mult_exponent([sqrt2, Z], 1000) == math.inf
    with pytest.raises(ValueError):
        ex.estimate_mult_exponent([sqrt2], 100, n_min=100)
    with pytest.raises(ValueError):
        ex.estimate_mult_exponent([sqrt2], 100, n_min=1)


def test_golden_ratio_exponent():
    # record at n = 144 (a Fibonacci denominator) dominates the burn-in window
    v = ex.estimate_mult_exponent([fp.golden()], 10**6)
    assert v == 1.1619233062956094
    assert abs(v - 1.0) < 0.2


def test_pair_exponent_dirichlet(sqrt2, sqrt3):
    assert ex.estimate_mult_exponent([sqrt2, sqrt3], 10**6) >= 1.0


def test_estimate_monotone_in_N(sqrt2, sqrt3):
    vals = [ex.estimate_mult_exponent([sqrt2, sqrt3], N) for N in (10**3, 10**4, 10**5, 10**6)]
    assert vals == sorted(vals)


def test_estimate_thread_independent(sqrt2, sqrt3):
    a = ex.estimate_mult_exponent([sqrt2, sqrt3], 700_000, threads=1)
    assert a == ex.estimate_mult_exponent([sqrt2, sqrt3], 700_000, threads=4)


def test_dirichlet_bound_random_samples():
    for (a,) in sample_alpha(31337, 50, 1):
        assert ex.estimate_mult_exponent([a], 10**6) >= 0.8


def test_littlewood_examples(sqrt2, sqrt3):
    t = ex.littlewood_records(Z, Z, 50)
    assert t.records == [(1, 0)]
    t = ex.littlewood_records(sqrt2, sqrt3, 1000)
    ref = oracles.littlewood_final(sqrt2, sqrt3, 1000)
    assert float(t.final) == pytest.approx(float(ref), rel=1e-15)
    assert float(t.final) == pytest.approx(0.009956782247828014, rel=1e-15)
    assert t.records[-1][0] == 41
    with pytest.raises(ValueError):
        ex.littlewood_records(sqrt2, sqrt3, 0)


def _strict(trail):
    ns = [n for n, _ in trail.records]
    vs = [v for _, v in trail.records]
    return all(a < b for a, b in zip(ns, ns[1:])) and all(a > b for a, b in zip(vs, vs[1:]))


@pytest.mark.parametrize("seed", range(3))
def test_littlewood_trail_strict_and_blockwise(seed):
    (x, y), = sample_alpha(seed, 1, 2)
    N = 600_000
    t = ex.littlewood_records(x, y, N, threads=3)
    assert _strict(t)
    # single pass reference
    vals = ex.littlewood_values(x, y, 1, N + 1)
    ref = ex._records(np.arange(1, N + 1), vals, ex.Metric.LITTLEWOOD_PRODUCT)
    assert t.records == ref.records


def test_littlewood_final_non_increasing(sqrt2, sqrt3):
    finals = [ex.littlewood_records(sqrt2, sqrt3, N).final for N in (10, 100, 10**3, 10**5)]
    assert all(a >= b for a, b in zip(finals, finals[1:]))


def test_exponent_trail(sqrt2, sqrt3):
    t = ex.exponent_trail([sqrt2, sqrt3], 300_000)
    assert _strict(t) and t.metric is ex.Metric.EXPONENT_RATIO
    assert -t.final == pytest.approx(ex.estimate_mult_exponent([sqrt2, sqrt3], 300_000), rel=1e-12)
    assert t.records[0][0] == ex.N_MIN
