"""Scalar building blocks of the PAC-Bayes bounds.

Gaussian-posterior loss functions and their derivatives, the binary KL
divergence, its sup-inverse, and the combinatorial confidence factor.
All functions are pure; the array-valued ones broadcast over numpy
inputs and return floats for scalar inputs.
"""

import math
from functools import lru_cache

import numpy as np
from scipy.special import erfc, gammaln, logsumexp, xlogy

from .exceptions import DomainError

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Interior clamp for log evaluations; exact 0/1 take limit branches.
_EPS = 1e-12

# |a| beyond this the probit loss is numerically 0 or 1.
_PHI_CUTOFF = 40.0


def _maybe_float(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def phi(a):
    """Probability that a unit-variance Gaussian exceeds margin ``a``.

    phi(a) = (1 - erf(a / sqrt(2))) / 2.  Strictly decreasing, with
    phi(a) + phi(-a) = 1.
    """
    a = np.clip(np.asarray(a, dtype=float), -_PHI_CUTOFF, _PHI_CUTOFF)
    return _maybe_float(0.5 * erfc(a / _SQRT2))


def phi_prime(a):
    """Derivative of :func:`phi`: the negated standard normal density."""
    a = np.asarray(a, dtype=float)
    return _maybe_float(-_INV_SQRT_2PI * np.exp(-0.5 * a * a))


def phi_dis(a):
    """Expected pairwise-disagreement rate at margin ``a``.

    phi_dis(a) = 2 phi(a) phi(-a); even, maximal at 0 with value 1/2.
    """
    a = np.asarray(a, dtype=float)
    return _maybe_float(2.0 * np.asarray(phi(a)) * np.asarray(phi(-a)))


def phi_dis_prime(a):
    """Derivative of :func:`phi_dis`."""
    a = np.asarray(a, dtype=float)
    return _maybe_float(
        2.0 * np.asarray(phi_prime(a)) * (np.asarray(phi(-a)) - np.asarray(phi(a)))
    )


def kl_bernoulli(q, p):
    """KL divergence between Bernoulli(q) and Bernoulli(p).

    Uses the convention 0 ln 0 = 0.  Raises :class:`DomainError` when the
    divergence is infinite (p at an endpoint with q elsewhere) or an
    argument is outside [0, 1].
    """
    q = float(q)
    p = float(p)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q={q} outside [0, 1]")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        if q == p:
            return 0.0
        raise DomainError(f"kl(q={q} || p={p}) is infinite")
    if q == 0.0:
        return -math.log1p(-p)
    if q == 1.0:
        return -math.log(p)
    qc = min(max(q, _EPS), 1.0 - _EPS)
    pc = min(max(p, _EPS), 1.0 - _EPS)
    return qc * math.log(qc / pc) + (1.0 - qc) * math.log((1.0 - qc) / (1.0 - pc))


def kl_inverse_sup(q, c):
    """Largest p in [q, 1) with kl_bernoulli(q, p) <= c.

    kl(q||.) is increasing on [q, 1), so this is the unique root of
    kl(q||p) = c when one exists; otherwise the result is clamped to
    1 - 1e-12.  Solved by bisection (at most 200 iterations).
    """
    q = float(q)
    c = float(c)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q={q} outside [0, 1]")
    if c < 0.0:
        raise DomainError(f"c={c} negative")
    if c == 0.0:
        return q
    hi = 1.0 - _EPS
    if q >= hi:
        return hi
    if kl_bernoulli(q, hi) <= c:
        return hi
    if q == 0.0:
        # kl(0||p) = -ln(1-p), invertible in closed form
        return min(-math.expm1(-c), hi)
    # kl(q||.) with q fixed interior: hoist the q-dependent log terms
    qc = min(max(q, _EPS), 1.0 - _EPS)
    qr = 1.0 - qc
    entropy = qc * math.log(qc) + qr * math.log(qr)
    log = math.log
    lo = q
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if entropy - qc * log(mid) - qr * log(1.0 - mid) <= c:
            lo = mid
        else:
            hi = mid
        if hi - lo < 5e-16:
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def xi(m):
    """Confidence normalizer sum_k C(m,k) (k/m)^k (1-k/m)^(m-k).

    Exact log-domain summation; lies between sqrt(m) and 2 sqrt(m).
    For m > 10^6 the 2 sqrt(m) envelope is returned instead of the sum.
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"m={m} must be >= 1")
    if m > 10**6:
        return 2.0 * math.sqrt(m)
    k = np.arange(m + 1, dtype=float)
    log_binom = gammaln(m + 1.0) - gammaln(k + 1.0) - gammaln(m - k + 1.0)
    log_terms = log_binom + xlogy(k, k / m) + xlogy(m - k, 1.0 - k / m)
    return float(np.exp(logsumexp(log_terms)))
