import math

import numpy as np
import pytest
from scipy.integrate import quad

from rbmatch.combinatorics import (
    HAREL_STIRLING_SWITCH,
    ballot_segment_prob,
    enumerate_balanced_walks,
    expected_zero_returns,
    harel_area,
    log_binomial,
    normal_cdf,
    normal_pdf,
    stars_bars_prob,
    walk_area_oracle,
)


def test_log_binomial_small_values():
    assert log_binomial(4, 2).value == pytest.approx(6.0)
    assert log_binomial(0, 0).value == pytest.approx(1.0)
    assert log_binomial(5, -1).zero_flag
    assert log_binomial(5, 6).zero_flag
    assert log_binomial(5, 6).value == 0.0


def test_log_binomial_large_against_ratio_accumulation():
    # C(400, 200) = prod_{i=1..200} (200 + i) / i
    expected = sum(math.log((200 + i) / i) for i in range(1, 201))
    got = log_binomial(400, 200).log_magnitude
    assert got == pytest.approx(expected, rel=1e-10)


def test_harel_area_small_values():
    assert harel_area(0) == 0.0
    assert harel_area(1) == pytest.approx(1.0)
    assert harel_area(2) == pytest.approx(8.0 / 3.0)
    assert harel_area(3) == pytest.approx(3 * 32 / 20)


def test_walk_area_oracle_small_counts():
    assert walk_area_oracle(1) == pytest.approx(1.0)  # both 2-step walks have area 1
    assert walk_area_oracle(2) == pytest.approx(8.0 / 3.0)  # areas {4,2,2,2,2,4}
    assert walk_area_oracle(3) == pytest.approx(harel_area(3), abs=1e-12)


def test_harel_matches_oracle_up_to_eight():
    for n in range(9):
        assert harel_area(n) == pytest.approx(walk_area_oracle(n), rel=1e-12)


def test_walk_oracle_rejects_large_n():
    with pytest.raises(ValueError):
        walk_area_oracle(11)


def test_harel_branches_agree_at_switch():
    n = HAREL_STIRLING_SWITCH
    exact = math.exp(
        math.log(n) + (2 * n - 1) * math.log(2.0) - log_binomial(2 * n, n).log_magnitude
    )
    stirling = harel_area(n)
    assert abs(stirling - exact) / exact < 1e-3


def test_stars_bars_examples():
    assert stars_bars_prob(0, 1, 2) == pytest.approx(0.5)
    assert stars_bars_prob(1, 1, 2) == pytest.approx(0.5)
    for n in (3, 7, 40):
        m = 2
        assert stars_bars_prob(m, m, n) == pytest.approx(1.0 / math.comb(n, n - m))


def test_stars_bars_rejects_balanced():
    with pytest.raises(ValueError):
        stars_bars_prob(0, 3, 3)


def test_stars_bars_sums_to_one_sampled():
    rng = np.random.default_rng(0)
    for _ in range(40):
        m = int(rng.integers(1, 60))
        n = int(rng.integers(m + 1, 200))
        total = sum(stars_bars_prob(mp, m, n) for mp in range(m + 1))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_ballot_examples():
    assert ballot_segment_prob(0, 0, 1, 1) == pytest.approx(1.0 / 3.0)
    assert ballot_segment_prob(1, 0, 1, 1) == pytest.approx(2.0 / 3.0)
    total = sum(ballot_segment_prob(mh, 0, 5, 3) for mh in range(6))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_ballot_rejects_spent_excess():
    with pytest.raises(ValueError):
        ballot_segment_prob(0, 3, 5, 3)


def test_ballot_sums_to_one_sampled():
    rng = np.random.default_rng(1)
    for _ in range(40):
        a = int(rng.integers(0, 51))
        e = int(rng.integers(1, 21))
        total = sum(ballot_segment_prob(mh, 0, a, e) for mh in range(a + 1))
        assert total == pytest.approx(1.0, abs=1e-9)


def _zero_return_enumeration(m_hat: int) -> float:
    walks = enumerate_balanced_walks(m_hat)
    heights = np.cumsum(walks, axis=1)
    return float((heights == 0).sum(axis=1).mean())


def test_expected_zero_returns_values():
    assert expected_zero_returns(0) == 0.0
    assert expected_zero_returns(1) == pytest.approx(1.0)
    assert expected_zero_returns(3) == pytest.approx(_zero_return_enumeration(3), abs=1e-12)


def test_expected_zero_returns_matches_enumeration():
    for m_hat in range(1, 9):
        assert expected_zero_returns(m_hat) == pytest.approx(
            _zero_return_enumeration(m_hat), abs=1e-10
        )


def test_expected_zero_returns_monotone_and_bounded():
    values = [expected_zero_returns(m) for m in range(60)]
    for m, v in enumerate(values):
        assert 0.0 <= v <= m
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_normal_cdf_pdf_basics():
    assert normal_cdf(0.0) == pytest.approx(0.5)
    assert normal_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi))
    assert normal_pdf(0.0) == pytest.approx(0.3989422804, abs=1e-9)


def test_normal_cdf_against_quadrature():
    for x in (-0.5 / math.sqrt(10.0), -2.0, 0.7, 3.1):
        integral, _ = quad(normal_pdf, -9.0, x)
        assert normal_cdf(x) == pytest.approx(integral, abs=1e-8)
    assert normal_cdf(-0.5 / math.sqrt(10.0)) == pytest.approx(0.43717, abs=1e-4)


def test_normal_cdf_symmetry():
    for x in np.linspace(-8, 8, 33):
        assert abs((1.0 - normal_cdf(x)) - normal_cdf(-x)) <= 1e-12
