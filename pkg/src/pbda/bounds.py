"""PAC-Bayes bound objectives and their gradients.

Two objectives are covered: the source-only risk bound (PBGD) and the
domain-adaptation bound on the rescaled adaptation loss (DA-PBGD).
Both are sup-inverses of the binary KL at a complexity budget, and both
gradients come from implicit differentiation of kl(q || B) = budget.

The private helpers operate on precomputed normalized feature matrices
(margin = F @ theta) so that the kernelized module can reuse them with
kernel columns in place of normalized inputs.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateGradient
from .gibbs import normalized
from .special import (
    kl_bernoulli,
    kl_inverse_sup,
    phi,
    phi_dis,
    phi_dis_prime,
    phi_prime,
    xi,
)

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class ObjectiveReport:
    """Value and audit terms of the DA objective at one weight vector."""

    objective: float
    bstar: float
    source_risk: float
    disagreement: float
    kl_budget: float
    gradient: np.ndarray | None = None


def complexity_budget(norm_sq, m, delta, kl_coef):
    """(kl_coef * ||w||^2 + ln(xi(m)/delta)) / m.

    kl_coef is 1/2 for the single-posterior bound and 1 for the
    pair-of-posteriors adaptation bound.
    """
    return (kl_coef * norm_sq + math.log(xi(m) / delta)) / m


def _implicit_gradient(bound, q, budget_grad, q_grad):
    """Gradient of the sup-inverse bound via implicit differentiation.

    Differentiating kl(q || B) = budget gives
    B' = B(1-B)/(B-q) * [budget' + ln(B(1-q)/(q(1-B))) q'].
    """
    if bound - q < _DEGENERATE_TOL:
        raise DegenerateGradient(f"bound {bound} not strictly above empirical term {q}")
    for name, v in (("empirical term", q), ("bound", bound)):
        if v < _DEGENERATE_TOL or v > 1.0 - _DEGENERATE_TOL:
            raise DegenerateGradient(f"{name} {v} at an endpoint of [0, 1]")
    prefactor = bound * (1.0 - bound) / (bound - q)
    log_term = math.log(bound * (1.0 - q) / (q * (1.0 - bound)))
    return prefactor * (budget_grad + log_term * q_grad)


# --- shared cores over feature matrices (margin_i = F[i] @ theta) ---


def _pbgd_value(theta, Fs, y, m, delta, kl_coef, norm_sq):
    risk = float(np.mean(phi(y * (Fs @ theta))))
    budget = complexity_budget(norm_sq, m, delta, kl_coef)
    return kl_inverse_sup(risk, budget), risk, budget


def _pbgd_grad(theta, Fs, y, m, delta, kl_coef, norm_sq, norm_grad):
    bound, risk, _ = _pbgd_value(theta, Fs, y, m, delta, kl_coef, norm_sq)
    ms = Fs @ theta
    risk_grad = Fs.T @ (phi_prime(y * ms) * y) / m
    budget_grad = kl_coef * norm_grad / m
    return _implicit_gradient(bound, risk, budget_grad, risk_grad)


def _da_value(theta, Fs, y, Ft, m, delta, norm_sq):
    ms = Fs @ theta
    mt = Ft @ theta
    risk = float(np.mean(phi(y * ms)))
    dis = float(np.mean(phi_dis(mt)) - np.mean(phi_dis(ms)))
    bs = float(np.clip(0.5 * (risk + dis) + 0.25, 0.0, 1.0))
    budget = complexity_budget(norm_sq, m, delta, 1.0)
    return kl_inverse_sup(bs, budget), bs, risk, dis, budget


def _da_grad(theta, Fs, y, Ft, m, delta, norm_sq, norm_grad):
    bound, bs, _, _, _ = _da_value(theta, Fs, y, Ft, m, delta, norm_sq)
    ms = Fs @ theta
    mt = Ft @ theta
    loss_grad = (
        Fs.T @ (phi_prime(y * ms) * y) + Ft.T @ phi_dis_prime(mt) - Fs.T @ phi_dis_prime(ms)
    )
    bs_grad = loss_grad / (2.0 * m)
    budget_grad = norm_grad / m
    return _implicit_gradient(bound, bs, budget_grad, bs_grad)


# --- primal public surface ---


def pbgd_bound(w, source, delta=0.05):
    """Upper confidence bound on the expected Gibbs risk of the posterior at w."""
    w = np.asarray(w, dtype=float)
    bound, _, _ = _pbgd_value(
        w, normalized(source.X), source.y, len(source), delta, 0.5, float(w @ w)
    )
    return bound


def pbgd_gradient(w, source, delta=0.05):
    """Gradient of :func:`pbgd_bound` with respect to w."""
    w = np.asarray(w, dtype=float)
    return _pbgd_grad(
        w, normalized(source.X), source.y, len(source), delta, 0.5, float(w @ w), 2.0 * w
    )


def dapbgd_objective(w, paired, delta=0.05, with_gradient=True):
    """Adaptation bound objective and its audit terms at weight vector w."""
    w = np.asarray(w, dtype=float)
    Fs = normalized(paired.Xs)
    Ft = normalized(paired.Xt)
    bound, bs, risk, dis, budget = _da_value(w, Fs, paired.ys, Ft, paired.m, delta, float(w @ w))
    grad = None
    if with_gradient:
        try:
            grad = _da_grad(w, Fs, paired.ys, Ft, paired.m, delta, float(w @ w), 2.0 * w)
        except DegenerateGradient:
            grad = None
    return ObjectiveReport(
        objective=bound,
        bstar=bs,
        source_risk=risk,
        disagreement=dis,
        kl_budget=budget,
        gradient=grad,
    )


def dapbgd_gradient(w, paired, delta=0.05):
    """Gradient of the adaptation bound objective with respect to w."""
    w = np.asarray(w, dtype=float)
    return _da_grad(
        w,
        normalized(paired.Xs),
        paired.ys,
        normalized(paired.Xt),
        paired.m,
        delta,
        float(w @ w),
        2.0 * w,
    )


def bound_coherent(bs, bound, budget, tol=1e-8):
    """True when kl(bstar || bound) stays within the complexity budget."""
    if bound <= bs:
        return bound >= bs - tol
    return kl_bernoulli(bs, min(bound, 1.0 - 1e-12)) <= budget + tol
