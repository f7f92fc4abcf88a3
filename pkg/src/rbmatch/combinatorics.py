"""Combinatorial kernels: log-space binomials, random-walk areas, ballot and
stars-and-bars probabilities, zero-return counts, and the standard normal
CDF/PDF."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "LogNumber",
    "log_binomial",
    "harel_area",
    "walk_area_oracle",
    "enumerate_balanced_walks",
    "stars_bars_prob",
    "stars_bars_distribution",
    "ballot_segment_prob",
    "expected_zero_returns",
    "normal_cdf",
    "normal_pdf",
]

# math.comb stays integer-exact well past this; the cutoff keeps the fast
# log-gamma path for everything large.
_EXACT_BINOM_MAX_N = 60

# Above this walk size the closed form and the Stirling asymptote agree to
# better than 0.1%, so the cheaper asymptote is used.
HAREL_STIRLING_SWITCH = 150

_MAX_ORACLE_N = 10


@dataclass(frozen=True)
class LogNumber:
    """A nonnegative quantity stored as the natural log of its magnitude.

    ``zero_flag`` marks an exact zero, for which no finite log exists.
    """

    log_magnitude: float
    zero_flag: bool = False

    @property
    def value(self) -> float:
        return 0.0 if self.zero_flag else math.exp(self.log_magnitude)


def log_binomial(n: int, k: int) -> LogNumber:
    """Binomial coefficient C(n, k) in log space.

    Returns a flagged zero when k < 0 or k > n. Uses exact integer arithmetic
    for n <= 60 and log-gamma beyond that.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return LogNumber(-math.inf, zero_flag=True)
    if n <= _EXACT_BINOM_MAX_N:
        return LogNumber(math.log(math.comb(n, k)))
    return LogNumber(float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)))


def _log_binom_arr(n, k):
    """Vectorized log C(n, k); -inf where k is out of range."""
    n = np.asarray(n, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    valid = (k >= 0) & (k <= n)
    nn = np.where(valid, n, 0.0)
    kk = np.where(valid, k, 0.0)
    out = gammaln(nn + 1) - gammaln(kk + 1) - gammaln(nn - kk + 1)
    return np.where(valid, out, -np.inf)


def harel_area(n: int) -> float:
    """Expected absolute area under a balanced +-1 random walk of 2n unit steps.

    Evaluates n * 2^(2n-1) / C(2n, n) in log space; for n >= 150 the Stirling
    form n * sqrt(pi*n) / 2 is used instead.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0.0
    if n >= HAREL_STIRLING_SWITCH:
        return n * math.sqrt(math.pi * n) / 2.0
    log_b = math.log(n) + (2 * n - 1) * math.log(2.0) - log_binomial(2 * n, n).log_magnitude
    return math.exp(log_b)


def enumerate_balanced_walks(n: int) -> np.ndarray:
    """All C(2n, n) balanced +-1 step sequences as a matrix of shape (paths, 2n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > _MAX_ORACLE_N:
        raise ValueError(f"enumeration limited to n <= {_MAX_ORACLE_N}")
    steps = np.full((math.comb(2 * n, n), 2 * n), -1, dtype=np.int8)
    for row, ups in enumerate(itertools.combinations(range(2 * n), n)):
        steps[row, list(ups)] = 1
    return steps


def walk_area_oracle(n: int) -> float:
    """Brute-force mean absolute area over every balanced 2n-step walk.

    Per-path area is the sum of |height| after each step. Areas are integers,
    so the mean is an exact rational evaluated in floating point. Limited to
    n <= 10.
    """
    if n == 0:
        return 0.0
    steps = enumerate_balanced_walks(n)
    heights = np.cumsum(steps, axis=1, dtype=np.int64)
    total = int(np.abs(heights).sum())
    return total / steps.shape[0]


def stars_bars_prob(m_prime: int, m: int, n: int) -> float:
    """Probability that the first of n-m+1 partition segments holds m_prime of m items.

    Equals C(n - m_prime - 1, n - m - 1) / C(n, n - m). Defined only for
    n > m >= 0; zero when the numerator's arguments fall out of range.
    """
    if n <= m:
        raise ValueError("requires n > m")
    if m < 0 or m_prime < 0:
        raise ValueError("counts must be nonnegative")
    num = log_binomial(n - m_prime - 1, n - m - 1)
    if num.zero_flag:
        return 0.0
    den = log_binomial(n, n - m)
    return math.exp(num.log_magnitude - den.log_magnitude)


def stars_bars_distribution(m: int, n: int) -> np.ndarray:
    """The whole first-segment distribution: entry m' is stars_bars_prob(m', m, n)."""
    if n <= m:
        raise ValueError("requires n > m")
    if m < 0:
        raise ValueError("m must be nonnegative")
    mp = np.arange(m + 1)
    log_w = _log_binom_arr(n - mp - 1, n - m - 1) - log_binomial(n, n - m).log_magnitude
    return np.exp(log_w)


def ballot_segment_prob(m_hat: int, k: int, a: int, excess: int) -> float:
    """Probability that segment k holds m_hat demand points given a remain to its right.

    ``excess`` is the supply surplus n - m; the segment is a balanced stretch
    of 2*m_hat steps after which the walk never returns to its starting level,
    so the result combines a path-counting ratio with a ballot-style factor
    (excess - k) / (2a + excess - k - 2*m_hat). Requires excess - k >= 1.
    """
    e = excess - k
    if e <= 0:
        raise ValueError("requires excess - k >= 1")
    if a < 0 or m_hat < 0:
        raise ValueError("counts must be nonnegative")
    num = log_binomial(a, m_hat)
    if num.zero_flag:
        return 0.0
    num2 = log_binomial(a + e, m_hat)
    den = log_binomial(2 * a + e, 2 * m_hat)
    ratio = math.exp(num.log_magnitude + num2.log_magnitude - den.log_magnitude)
    return ratio * e / (2 * a + e - 2 * m_hat)


def expected_zero_returns(m_hat: int) -> float:
    """Expected number of returns to zero of a balanced 2*m_hat-step walk."""
    if m_hat < 0:
        raise ValueError("m_hat must be nonnegative")
    if m_hat == 0:
        return 0.0
    j = np.arange(1, m_hat + 1)
    log_terms = (
        _log_binom_arr(2 * j - 1, j)
        + _log_binom_arr(2 * (m_hat - j), m_hat - j)
        - log_binomial(2 * m_hat - 1, m_hat).log_magnitude
    )
    return float(np.exp(log_terms).sum())


_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_pdf(x: float) -> float:
    """Standard normal density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)
