"""Kernelized (dual) representation of the bound objectives.

A classifier is an alpha-weighted expansion over a stored anchor set;
normalized margins become kernel columns divided by sqrt(k(x, x)), and
the squared weight norm becomes alpha' K alpha, so the primal bound and
gradient machinery applies unchanged with kernel features.
"""

from dataclasses import dataclass

import numpy as np

from .bounds import ObjectiveReport, _da_grad, _da_value, _pbgd_grad, _pbgd_value
from .exceptions import DegenerateGradient, DegenerateInput, DomainError

VALID_KINDS = ("linear", "gaussian")


@dataclass(frozen=True)
class KernelConfig:
    """Kernel choice; gamma only applies to the Gaussian kernel."""

    kind: str = "gaussian"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "gaussian" and not self.gamma > 0:
            raise DomainError("gamma must be > 0 for the gaussian kernel")


@dataclass(frozen=True)
class DualWeights:
    """Expansion coefficients over a fixed anchor point set."""

    alpha: np.ndarray
    anchors: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        anchors = np.atleast_2d(np.asarray(self.anchors, dtype=float))
        if alpha.shape != (anchors.shape[0],):
            raise DomainError(
                f"alpha length {alpha.shape} does not match {anchors.shape[0]} anchors"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "anchors", anchors)


def kernel_matrix(A, B, config):
    """k(a, b) for every anchor/evaluation point pair; shape (|A|, |B|)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if config.kind == "linear":
        return A @ B.T
    sq = np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :] - 2.0 * (A @ B.T)
    return np.exp(-config.gamma * np.maximum(sq, 0.0))


def gram(points, config):
    """Symmetric PSD Gram matrix of a point set."""
    K = kernel_matrix(points, points, config)
    return 0.5 * (K + K.T)


def kernel_self(X, config):
    """k(x, x) for every row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if config.kind == "linear":
        return np.sum(X * X, axis=1)
    return np.ones(X.shape[0])


def dual_features(anchors, X, config):
    """Normalized kernel features: row i is k(anchors, x_i) / sqrt(k(x_i, x_i)).

    The dual margin of x is then feature_row @ alpha, the feature-space
    analogue of w.x/||x||.
    """
    kxx = kernel_self(X, config)
    if np.any(kxx <= 0):
        raise DegenerateInput("k(x, x) must be positive for a normalized margin")
    return kernel_matrix(X, anchors, config) / np.sqrt(kxx)[:, None]


def dual_margin(dw, k_col, k_xx):
    """Margin of one point from its kernel evaluations against the anchors."""
    if k_xx <= 0:
        raise DegenerateInput("k(x, x) must be positive")
    return float(np.asarray(k_col, dtype=float) @ dw.alpha / np.sqrt(k_xx))


def dual_margins(dw, X, config):
    """Normalized dual margins of every row of X."""
    return dual_features(dw.anchors, X, config) @ dw.alpha


def dual_norm_sq(dw, K):
    """Squared feature-space norm alpha' K alpha; stands in for ||w||^2."""
    return float(dw.alpha @ K @ dw.alpha)


def dual_objective(dw, paired, K, delta=0.05, config=None, with_gradient=True):
    """Adaptation bound objective for a dual-weight classifier.

    ``K`` is the Gram matrix of ``dw.anchors``; ``config`` names the
    kernel used to build it.
    """
    config = config if config is not None else KernelConfig()
    Fs = dual_features(dw.anchors, paired.Xs, config)
    Ft = dual_features(dw.anchors, paired.Xt, config)
    norm_sq = dual_norm_sq(dw, K)
    bound, bs, risk, dis, budget = _da_value(dw.alpha, Fs, paired.ys, Ft, paired.m, delta, norm_sq)
    grad = None
    if with_gradient:
        try:
            grad = _da_grad(
                dw.alpha, Fs, paired.ys, Ft, paired.m, delta, norm_sq, 2.0 * (K @ dw.alpha)
            )
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


def dual_gradient(dw, paired, K, delta=0.05, config=None):
    """Gradient of the dual adaptation objective with respect to alpha."""
    config = config if config is not None else KernelConfig()
    Fs = dual_features(dw.anchors, paired.Xs, config)
    Ft = dual_features(dw.anchors, paired.Xt, config)
    return _da_grad(
        dw.alpha,
        Fs,
        paired.ys,
        Ft,
        paired.m,
        delta,
        dual_norm_sq(dw, K),
        2.0 * (K @ dw.alpha),
    )


def dual_pbgd_bound(dw, source, K, delta=0.05, config=None):
    """Source-only risk bound for a dual-weight classifier."""
    config = config if config is not None else KernelConfig()
    Fs = dual_features(dw.anchors, source.X, config)
    bound, _, _ = _pbgd_value(dw.alpha, Fs, source.y, len(source), delta, 0.5, dual_norm_sq(dw, K))
    return bound


def dual_pbgd_gradient(dw, source, K, delta=0.05, config=None):
    """Gradient of :func:`dual_pbgd_bound` with respect to alpha."""
    config = config if config is not None else KernelConfig()
    Fs = dual_features(dw.anchors, source.X, config)
    return _pbgd_grad(
        dw.alpha,
        Fs,
        source.y,
        len(source),
        delta,
        0.5,
        dual_norm_sq(dw, K),
        2.0 * (K @ dw.alpha),
    )
