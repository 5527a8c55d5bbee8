import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multapprox import fixedpoint as fp
from multapprox.fixedpoint import Frac64

raws = st.integers(min_value=0, max_value=2**64 - 1)


def test_from_real_examples():
    assert fp.from_real(0.0).raw == 0
    assert fp.from_real(1.5).raw == 2**63
    assert fp.from_real(Fraction(1, 3)).raw == 2**64 // 3
    assert fp.from_real(-0.25).raw == 3 * 2**62


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_from_real_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        fp.from_real(bad)


def test_frac_mul_examples():
    half = fp.from_real(0.5)
    assert fp.frac_mul(2, half).raw == 0
    assert fp.frac_mul(3, half).raw == 2**63
    third = Frac64(2**64 // 3)
    assert fp.frac_mul(7, third).raw == (7 * (2**64 // 3)) % 2**64
    with pytest.raises(ValueError):
        fp.frac_mul(0, half)


def test_dist_nearest_examples():
    assert fp.dist_nearest(fp.from_real(0.75)) == 0.25
    assert fp.dist_nearest(fp.from_real(0.5), fp.from_real(0.5)) == 0.0
    third = Frac64(2**64 // 3)
    assert fp.dist_nearest(third) == pytest.approx(1 / 3, rel=1e-15)


def test_parse_forms():
    assert fp.parse("0x8000000000000000").raw == 2**63
    assert fp.parse("1/4").raw == 2**62
    assert fp.parse("2.5").raw == 2**63
    assert fp.parse("sqrt:2") == fp.from_sqrt(2)
    # 30 significant digits of sqrt(2) pin all 64 bits
    assert fp.parse("1.41421356237309504880168872421") == fp.from_sqrt(2)
    assert fp.parse("golden").value == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-16)
    with pytest.raises(ValueError):
        fp.parse("0x1" + "0" * 16)


def test_integer_sqrt_constants():
    s2 = fp.from_sqrt(2)
    # truncation: raw/2^64 <= frac(sqrt 2) < (raw+1)/2^64
    assert (s2.raw + 2**64) ** 2 <= 2 * 2**128 < (s2.raw + 1 + 2**64) ** 2


@given(raws)
def test_symmetry(raw):
    a = Frac64(raw)
    assert fp.dist_nearest(a) == fp.dist_nearest(-a)


@given(raws, raws)
def test_range(raw, shift):
    assert 0.0 <= fp.dist_nearest(Frac64(raw), Frac64(shift)) <= 0.5
    assert 0 <= fp.dist_raw(Frac64(raw), Frac64(shift)) <= 2**63


@given(raws, st.integers(1, 10**12), st.integers(1, 10**12))
def test_additivity(raw, m, n):
    a = Frac64(raw)
    assert fp.frac_mul(m + n, a) == fp.frac_mul(m, a) + fp.frac_mul(n, a)


@given(raws, st.integers(1, 300))
def test_streaming_equals_multiply(raw, n):
    a = Frac64(raw)
    acc = fp.ZERO
    for _ in range(n):
        acc = acc + a
    assert acc == fp.frac_mul(n, a)


@given(raws, raws)
def test_vector_kernels_match_scalar(raw, shift):
    n = np.arange(1, 200, dtype=np.uint64)
    d = fp.dist_raw_array(fp.frac_mul_array(n, raw), shift)
    ref = [fp.dist_raw(fp.frac_mul(int(m), Frac64(raw)), Frac64(shift)) for m in range(1, 200)]
    assert d.tolist() == ref
    hi = fp.mulhi_array(n, raw)
    assert hi.tolist() == [(int(m) * raw) >> 64 for m in range(1, 200)]


@given(raws, st.integers(2**31, 2**32 - 1))
def test_mulhi_large_n(raw, n):
    assert int(fp.mulhi_array(np.array([n], dtype=np.uint64), raw)[0]) == (n * raw) >> 64


@given(st.floats(0, 0.5), raws)
def test_thresholds_are_exact(t, raw):
    r = raw >> 1  # distances live in [0, 2^63]
    assert (r < int(fp.ceil_threshold(t))) == (Fraction(r, 2**64) < Fraction(t))
    assert (r <= int(fp.floor_threshold(t))) == (Fraction(r, 2**64) <= Fraction(t))
