"""Special functions against independent oracles.

phi is checked against scipy's normal survival function, derivatives
against central differences, the KL inverse against brentq root finding,
and xi against exact rational summation.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import norm

from pbda.exceptions import DomainError
from pbda.special import (
    kl_bernoulli,
    kl_inverse_sup,
    phi,
    phi_dis,
    phi_dis_prime,
    phi_prime,
    xi,
)

GRID = np.linspace(-6.0, 6.0, 61)


class TestPhi:
    def test_matches_normal_survival_function(self):
        assert np.allclose(phi(GRID), norm.sf(GRID), atol=1e-14, rtol=0)

    def test_at_zero(self):
        assert phi(0.0) == 0.5

    def test_symmetry(self):
        assert np.max(np.abs(phi(GRID) + phi(-GRID) - 1.0)) < 1e-14

    def test_monotone_decreasing(self):
        assert np.all(np.diff(phi(GRID)) < 0)

    def test_scalar_in_scalar_out(self):
        assert isinstance(phi(1.0), float)
        assert isinstance(phi(np.array([1.0, 2.0])), np.ndarray)

    def test_extreme_arguments_saturate(self):
        assert phi(1e6) == 0.0
        assert phi(-1e6) == 1.0

    def test_prime_matches_finite_differences(self):
        eps = 1e-6
        fd = (phi(GRID + eps) - phi(GRID - eps)) / (2 * eps)
        assert np.allclose(phi_prime(GRID), fd, atol=1e-9)

    def test_prime_is_negative_density(self):
        assert np.allclose(phi_prime(GRID), -norm.pdf(GRID), atol=1e-14)


class TestPhiDis:
    def test_identity(self):
        assert np.allclose(phi_dis(GRID), 2.0 * norm.sf(GRID) * norm.cdf(GRID), atol=1e-14)

    def test_even_and_maximal_at_zero(self):
        assert np.allclose(phi_dis(GRID), phi_dis(-GRID), atol=1e-15)
        assert phi_dis(0.0) == 0.5
        assert np.all(phi_dis(GRID[GRID != 0]) < 0.5)

    def test_prime_matches_finite_differences(self):
        eps = 1e-6
        fd = (phi_dis(GRID + eps) - phi_dis(GRID - eps)) / (2 * eps)
        assert np.allclose(phi_dis_prime(GRID), fd, atol=1e-9)


class TestKlBernoulli:
    def test_known_value(self):
        expected = 0.5 * math.log(0.5 / 0.25) + 0.5 * math.log(0.5 / 0.75)
        assert kl_bernoulli(0.5, 0.25) == pytest.approx(expected, abs=1e-15)

    def test_zero_on_diagonal(self):
        for v in (0.0, 0.3, 0.5, 1.0):
            assert kl_bernoulli(v, v) == 0.0

    def test_complement_symmetry(self):
        for q, p in [(0.1, 0.6), (0.3, 0.9), (0.45, 0.5)]:
            assert kl_bernoulli(q, p) == pytest.approx(kl_bernoulli(1 - q, 1 - p), abs=1e-12)

    def test_limit_branches(self):
        assert kl_bernoulli(0.0, 0.3) == pytest.approx(-math.log1p(-0.3), abs=1e-15)
        assert kl_bernoulli(1.0, 0.3) == pytest.approx(-math.log(0.3), abs=1e-15)

    def test_infinite_divergence_raises(self):
        with pytest.raises(DomainError):
            kl_bernoulli(0.5, 0.0)
        with pytest.raises(DomainError):
            kl_bernoulli(0.5, 1.0)

    def test_out_of_range_raises(self):
        with pytest.raises(DomainError):
            kl_bernoulli(-0.1, 0.5)
        with pytest.raises(DomainError):
            kl_bernoulli(0.5, 1.1)

    def test_nonnegative(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            q, p = rng.uniform(0.01, 0.99, 2)
            assert kl_bernoulli(q, p) >= 0.0


class TestKlInverseSup:
    def test_against_brentq_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            q = rng.uniform(0.01, 0.95)
            c = rng.uniform(1e-4, 1.0)
            got = kl_inverse_sup(q, c)
            if got >= 1.0 - 2e-12:
                assert kl_bernoulli(q, 1.0 - 1e-12) <= c
                continue
            want = brentq(lambda p: kl_bernoulli(q, p) - c, q, 1.0 - 1e-12, xtol=1e-15)
            assert got == pytest.approx(want, abs=1e-10)

    def test_zero_budget_is_identity(self):
        for q in (0.0, 0.2, 0.7, 1.0):
            assert kl_inverse_sup(q, 0.0) == q

    def test_round_trip(self):
        for q, c in [(0.05, 0.02), (0.3, 0.1), (0.6, 0.4)]:
            p = kl_inverse_sup(q, c)
            assert kl_bernoulli(q, p) == pytest.approx(c, abs=1e-8)

    def test_monotone_in_budget(self):
        vals = [kl_inverse_sup(0.2, c) for c in (0.01, 0.05, 0.2, 0.5)]
        assert vals == sorted(vals)
        assert all(v >= 0.2 for v in vals)

    def test_huge_budget_clamps(self):
        assert kl_inverse_sup(0.2, 1e6) == 1.0 - 1e-12

    def test_q_zero_closed_form(self):
        assert kl_inverse_sup(0.0, 0.3) == pytest.approx(1.0 - math.exp(-0.3), abs=1e-14)

    def test_q_one(self):
        assert kl_inverse_sup(1.0, 0.5) == 1.0 - 1e-12

    def test_negative_budget_raises(self):
        with pytest.raises(DomainError):
            kl_inverse_sup(0.3, -0.1)


class TestXi:
    def test_exact_small_values(self):
        assert xi(1) == 2.0
        assert xi(2) == 2.5

    def test_against_rational_summation(self):
        for m in (3, 5, 10, 17):
            want = sum(
                Fraction(math.comb(m, k))
                * Fraction(k, m) ** k
                * Fraction(m - k, m) ** (m - k)
                for k in range(m + 1)
            )
            assert xi(m) == pytest.approx(float(want), rel=1e-12)

    def test_sqrt_envelope(self):
        for m in (1, 2, 10, 100, 5000):
            assert math.sqrt(m) <= xi(m) <= 2.0 * math.sqrt(m)

    def test_large_m_uses_envelope(self):
        m = 10**6 + 1
        assert xi(m) == 2.0 * math.sqrt(m)

    def test_invalid_m_raises(self):
        with pytest.raises(DomainError):
            xi(0)
