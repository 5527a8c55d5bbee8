import numpy as np
import pytest
from hypothesis import given, strategies as st

from multapprox.psi import (FAILS, HOLDS, UNKNOWN, ApproxFunction, Theorem, classify,
                            constant, growth_verdict, parse_psi, powerlog)


def test_eval_examples():
    assert constant(0.25)(10) == 0.25
    assert powerlog(1, 1, 0)(4) == 0.25
    assert powerlog(1, 1, 0)(1) == 0.5


def test_powerlog_uses_natural_log_of_n_plus_one():
    f = powerlog(0.3, 0.5, 2.0)
    assert f(7) == pytest.approx(0.3 * 7 ** -0.5 * np.log(8) ** -2.0, rel=1e-15)


def test_table_and_errors():
    f = ApproxFunction("table", (0.9, 0.3, 0.1))
    assert f.values(np.array([1, 2, 3])).tolist() == [0.5, 0.3, 0.1]
    with pytest.raises(IndexError):
        f(4)
    with pytest.raises(ValueError):
        f(0)
    for bad in ("constant:0.7", "powerlog:0,1,0", "powerlog:1,1", "wave:1", "table:"):
        with pytest.raises(ValueError):
            parse_psi(bad)


def test_parse_round_trip():
    f = parse_psi("powerlog:0.5,1,2")
    assert f == powerlog(0.5, 1, 2)
    assert parse_psi(f.spec()) == f


@given(st.floats(1e-6, 10), st.floats(0, 3), st.floats(-2, 3), st.integers(1, 10**9))
def test_eval_in_range(c, kappa, a, n):
    v = powerlog(c, kappa, a)(n)
    assert 0.0 <= v <= 0.5


def test_flags():
    assert not constant(0.25).vanishing
    assert constant(0.0).vanishing
    assert powerlog(1, 1, 0).vanishing and powerlog(1, 1, 0).non_increasing
    assert not powerlog(1, 0, -1).non_increasing


def test_wangyu_constant_fails_vanishing():
    rep = classify(constant(0.25), Theorem.WANGYU, probe_n=10**4, scan_n=10**4)
    assert rep.checks["psi_to_zero"] == FAILS
    assert not rep.ok


def test_fibrethm_power_bound_with_clamp_note():
    rep = classify(powerlog(1, 1, 0), "fibrethm", kappa=0.5, probe_n=10**5, scan_n=10**5)
    assert rep.checks["power_bound"] == HOLDS
    assert any("n=1 is clamped" in s for s in rep.notes)
    assert "psi(1) clamped to 1/2" in rep.notes


def test_power_bound_failure_reported():
    rep = classify(powerlog(1, 0.5, 0), "mainthm", kappa=0.6, probe_n=10**4, scan_n=10**4)
    assert rep.checks["power_bound"] == FAILS
    rep = classify(powerlog(1, 1, 0), "mainthm", probe_n=10**4, scan_n=10**4)
    assert rep.checks["power_bound"] == UNKNOWN


def test_gallagher_convergence_case():
    rep = classify(powerlog(1, 2, 0), Theorem.GALLAGHER, k=2)
    assert rep.checks["sum_psi_log_diverges"] == FAILS


def test_gallagher_divergence_case():
    rep = classify(powerlog(1, 1, 0), Theorem.GALLAGHER, k=2)
    assert rep.checks["sum_psi_log_diverges"] == HOLDS


def test_abh_divergence():
    rep = classify(powerlog(1, 1, 0), Theorem.ABH, probe_n=10**5)
    assert rep.checks["Psi_abh_unbounded"] == HOLDS


def test_growth_verdict():
    assert growth_verdict([1, 2, 3]) == HOLDS
    assert growth_verdict([1, 1.9, 2.0]) == FAILS
    assert growth_verdict([1, 2, 2.7]) == UNKNOWN


@pytest.mark.parametrize("f", [powerlog(1, 1, 0), powerlog(0.2, 0.3, 1.5), constant(0.1),
                               powerlog(5, 1, 0)])
def test_non_increasing_scan_consistent(f):
    assert f.non_increasing
    rep = classify(f, Theorem.KHINTCHINE, scan_n=10**6, probe_n=100)
    assert rep.checks["non_increasing"] == HOLDS
    v = f.values(np.arange(1, 10**6 + 1))
    assert np.all(np.diff(v) <= 0)
