"""Lower tails of Gamma(n, 1) sums and the bounds built on them.

For a sum of ``n`` mean-one exponentials

    P(X_n <= x) = (1 + K(x, n)) * exp(-x) * x**n / n!,
    K(x, n)     = sum_{j>=1} x**j / ((n+1)(n+2)...(n+j)),

which is the forward tail series of ``1 - exp(-x) sum_{k<n} x**k / k!``
written relative to its leading term. The series has no cancellation, so
tiny probabilities keep full relative precision.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from scipy.optimize import brentq

from ..core import DomainError

__all__ = [
    "GammaTail",
    "gamma_correction",
    "gamma_lower_cdf",
    "log_gamma_tail",
    "markov_upper",
    "log_markov_upper",
    "independent_min_cdf",
    "independent_min_median",
]

X_MAX = 700.0
_REL_TOL = 1e-16


class GammaTail(NamedTuple):
    n: int
    x: float
    cdf: float
    correction: float


def _check(n: int, x: float) -> None:
    if int(n) != n or n < 0:
        raise DomainError(f"shape n must be a non-negative integer, got {n!r}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")


def gamma_correction(n: int, x: float) -> float:
    """``K(x, n)``; lies in ``[0, e**x * x / (n + 1)]``."""
    _check(n, x)
    if x > X_MAX:
        raise DomainError(f"x={x} overflows the correction series; use log_gamma_tail")
    total = 0.0
    term = 1.0
    j = 1
    while True:
        term *= x / (n + j)
        total += term
        if term <= _REL_TOL * total and n + j > x:
            return total
        j += 1


def _log_leading(n: int, x: float) -> float:
    return n * math.log(x) - x - math.lgamma(n + 1)


def _leading(n: int, x: float) -> float:
    # exp(-x) x^n / n! as a running product: ~n roundings instead of the
    # absolute error of lgamma(n+1) amplified by exp
    if n > 170:
        return math.exp(_log_leading(n, x))
    p = math.exp(-x)
    for k in range(1, n + 1):
        p *= x / k
    return p


def gamma_lower_cdf(n: int, x: float) -> GammaTail:
    """``P(Gamma(n, 1) <= x)`` together with its correction ``K(x, n)``.

    ``n = 0`` is the empty sum, whose cdf is 1 for every ``x > 0``.
    """
    _check(n, x)
    k = gamma_correction(n, x)
    cdf = (1.0 + k) * _leading(n, x)
    return GammaTail(int(n), float(x), min(cdf, 1.0), k)


def log_gamma_tail(n: int, x: float) -> float:
    """Natural log of ``P(Gamma(n, 1) <= x)``, finite for astronomically large ``n``."""
    _check(n, x)
    if x > n + 1:
        return math.log(gamma_lower_cdf(n, x).cdf)
    # x <= n + 1 keeps K bounded by about e * x / (n + 1)
    return _log_leading(n, x) + math.log1p(gamma_correction(n, x))


def log_markov_upper(n: int, x: float) -> float:
    """Log of ``E #{paths with weight <= x} = n! P(Gamma(n) <= x)``, uncapped."""
    return math.lgamma(n + 1) + log_gamma_tail(n, x)


def markov_upper(n: int, x: float) -> float:
    """Markov bound ``min(1, e**-x x**n (1 + K(x, n)))`` on ``P(m_n <= x)``."""
    log_b = log_markov_upper(n, x)
    return 1.0 if log_b >= 0 else math.exp(log_b)


def independent_min_cdf(n: int, x: float) -> float:
    """CDF at ``x`` of the minimum of ``n!`` independent Gamma(n, 1) sums.

    Evaluates ``1 - (1 - F)**(n!)`` as ``-expm1(-exp(log n! + log(-log1p(-F))))``,
    which stays exact when ``F`` is far below machine epsilon or underflows.
    """
    _check(n, x)
    if n < 1:
        raise DomainError("n must be >= 1")
    log_f = log_gamma_tail(n, x)
    f = math.exp(log_f)
    if f >= 1.0:
        return 1.0
    if f < 1e-300:
        log_hazard = log_f
    else:
        log_hazard = math.log(-math.log1p(-f))
    exponent = math.lgamma(n + 1) + log_hazard
    if exponent > 709:
        return 1.0
    return -math.expm1(-math.exp(exponent))


def independent_min_median(n: int) -> float:
    """Root ``x*`` of ``independent_min_cdf(n, x*) = 1/2``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    hi = float(n) + 10.0
    return brentq(lambda x: independent_min_cdf(n, x) - 0.5, 1e-12, hi, xtol=1e-14, rtol=1e-14)
