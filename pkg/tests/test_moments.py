import math

import numpy as np
import pytest

from hyperfpp.analytics.gamma import gamma_lower_cdf
from hyperfpp.analytics.moments import (
    connecting_counts,
    empirical_pz_ratio,
    mean_connecting,
    second_moment_terms,
)
from hyperfpp.core import DomainError, ResourceError


def test_mean_connecting_instantiation():
    expected = math.factorial(6) * gamma_lower_cdf(6, 1.1).cdf
    assert math.exp(mean_connecting(8, 0.3, 1, 1)) == pytest.approx(expected, rel=1e-12)
    assert mean_connecting(8, 0.3, 2, 3) == pytest.approx(mean_connecting(8, 0.3, 1, 1) + math.log(6))


def test_mean_connecting_monte_carlo():
    streams = 10_000
    counts = connecting_counts(8, 0.3, [0], [7], streams, seed=3)
    sigma = counts.std(ddof=1) / math.sqrt(streams)
    assert abs(counts.mean() - math.exp(mean_connecting(8, 0.3, 1, 1))) <= 3 * sigma


def test_mean_connecting_grows():
    vals = [mean_connecting(n, 0.3, math.ceil(0.08 * n), math.ceil(0.08 * n)) for n in range(10, 400)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert math.isfinite(mean_connecting(10**12, 0.3, 8 * 10**10, 8 * 10**10))


def test_mean_connecting_errors():
    with pytest.raises(DomainError):
        mean_connecting(2, 0.3, 1, 1)
    with pytest.raises(DomainError):
        mean_connecting(5, 0.3, 3, 3)


def test_t1_formula():
    t = second_moment_terms(1e4, 0.3, 0.08)
    assert t.t1_log == pytest.approx(math.log(12 / (0.0064 * 0.3)) - 0.75 * math.log(1e4), rel=1e-15)


def test_t1_decreasing_and_signs():
    ns = [10.0**e for e in range(2, 17)]
    t1 = [second_moment_terms(n, 0.3, 0.08).t1_log for n in ns]
    assert all(b < a for a, b in zip(t1, t1[1:]))
    big = second_moment_terms(1e16, 0.3, 0.08)
    assert big.t2_log < 0 and big.t3_log < 0
    assert second_moment_terms(1e14, 0.3, 0.08).t3_log < 0


def test_t3_undefined_below_threshold():
    assert second_moment_terms(100, 0.3, 0.08).t3_log is None
    assert second_moment_terms(3000, 0.3, 0.08).t3_log is not None


def test_t3_matches_naive_form_where_it_is_safe():
    # direct evaluation of n ln n - ne ln(ne (1 + eps/3)) in extended precision
    import mpmath as mp

    mp.mp.dps = 60
    for n in (3e3, 1e5, 1e8):
        m = mp.mpf(n) - 5 * mp.e * (mp.mpf(n) + 3) ** (mp.mpf(2) / 3)
        ref = mp.mpf(n) * mp.log(n) - m * mp.log(m * (1 + mp.mpf(0.3) / 3))
        assert second_moment_terms(n, 0.3, 0.08).t3_log == pytest.approx(float(ref), rel=1e-9)


def test_all_logs_finite_up_to_1e16():
    for e in range(1, 17):
        t = second_moment_terms(10.0**e, 0.3, 0.08)
        assert all(math.isfinite(v) for v in (t.t1_log, t.t2_log) + ((t.t3_log,) if t.t3_log else ()))


def test_pz_degenerate_huge_eps():
    # threshold beyond any possible middle weight is not reachable with Exp(1),
    # but eps large enough makes every admissible path count in practice
    est = empirical_pz_ratio(5, 300.0, [0], [4], 20, seed=1)
    assert est.mean == math.factorial(3) and est.hit_rate == 1.0
    assert est.pz_lower_bound == 1.0


def test_pz_ratio_n7():
    est = empirical_pz_ratio(7, 0.3, [0], [6], 10_000, seed=2)
    assert est.second_moment >= est.mean**2
    assert est.pz_lower_bound <= est.hit_rate + 3 * est.hit_rate_sigma
    assert abs(est.mean - math.exp(mean_connecting(7, 0.3, 1, 1))) <= 3 * est.mean_sigma


def test_pz_cap():
    with pytest.raises(ResourceError):
        empirical_pz_ratio(10, 0.3, [0], [9], 10)
