"""Gaussian-posterior averages for linear classifiers.

Closed-form Gibbs risk, domain disagreement and adaptation loss for an
isotropic unit-variance Gaussian posterior centered on a weight vector,
plus Monte-Carlo estimators of the same quantities used as oracles.
"""

import numpy as np

from .exceptions import DegenerateInput, DimensionError
from .special import phi, phi_dis

_MC_CHUNK = 8192


def normalized(X):
    """Rows of X divided by their Euclidean norms."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms <= 0):
        raise DegenerateInput("zero vector has no margin")
    return X / norms[:, None]


def margins(w, X):
    """Normalized margins w.x/||x|| for every row of X."""
    w = np.asarray(w, dtype=float)
    Xn = normalized(X)
    if Xn.shape[1] != w.shape[0]:
        raise DimensionError(f"dim mismatch: w has {w.shape[0]}, points have {Xn.shape[1]}")
    return Xn @ w


def margin(w, x):
    """Normalized margin of a single point."""
    return float(margins(w, np.atleast_2d(x))[0])


def gibbs_risk(w, sample):
    """Posterior-averaged 0/1 risk on a labeled sample: mean of phi(y margin)."""
    return float(np.mean(phi(sample.y * margins(w, sample.X))))


def disagreement_hat(w, paired):
    """Empirical domain disagreement on a paired sample.

    Mean of phi_dis(target margin) - phi_dis(source margin); lies in
    [-1/2, 1/2].
    """
    mt = margins(w, paired.Xt)
    ms = margins(w, paired.Xs)
    return float(np.mean(phi_dis(mt)) - np.mean(phi_dis(ms)))


def adaptation_loss_hat(w, paired):
    """Empirical adaptation loss: source Gibbs risk plus disagreement.

    Computed exactly as gibbs_risk(source) + disagreement_hat so the
    definitional decomposition holds bit-for-bit.
    """
    return gibbs_risk(w, paired.source()) + disagreement_hat(w, paired)


def bstar(w, paired):
    """Affinely rescaled adaptation loss, guaranteed in [0, 1]."""
    return float(np.clip(0.5 * adaptation_loss_hat(w, paired) + 0.25, 0.0, 1.0))


def predict(w, X):
    """Deterministic labels sgn(w.x); a margin of exactly 0 maps to +1."""
    w = np.asarray(w, dtype=float)
    return np.where(margins(w, X) >= 0.0, 1, -1)


def error_rate(w, sample):
    """Fraction of the labeled sample misclassified by the deterministic classifier."""
    return float(np.mean(predict(w, sample.X) != sample.y))


def _mc_chunks(n_draws):
    done = 0
    while done < n_draws:
        take = min(_MC_CHUNK, n_draws - done)
        done += take
        yield take


def mc_gibbs_risk(w, sample, n_draws, seed=0):
    """Monte-Carlo Gibbs risk: draws v = w + N(0, I) per trial."""
    if n_draws < 1:
        raise DegenerateInput("n_draws must be >= 1")
    w = np.asarray(w, dtype=float)
    Xn = normalized(sample.X)
    rng = np.random.default_rng(seed)
    total = 0.0
    for take in _mc_chunks(n_draws):
        V = w + rng.standard_normal((take, w.shape[0]))
        pred = np.where(V @ Xn.T >= 0.0, 1, -1)
        total += np.sum(np.mean(pred != sample.y, axis=1))
    return total / n_draws


def mc_disagreement(w, paired, n_draws, seed=0):
    """Monte-Carlo domain disagreement: two consecutive posterior draws per trial."""
    if n_draws < 1:
        raise DegenerateInput("n_draws must be >= 1")
    w = np.asarray(w, dtype=float)
    Xsn = normalized(paired.Xs)
    Xtn = normalized(paired.Xt)
    rng = np.random.default_rng(seed)
    total = 0.0
    for take in _mc_chunks(n_draws):
        V = w + rng.standard_normal((take, 2, w.shape[0]))
        ps1, ps2 = (V[:, 0] @ Xsn.T >= 0.0), (V[:, 1] @ Xsn.T >= 0.0)
        pt1, pt2 = (V[:, 0] @ Xtn.T >= 0.0), (V[:, 1] @ Xtn.T >= 0.0)
        total += np.sum(np.mean(pt1 != pt2, axis=1) - np.mean(ps1 != ps2, axis=1))
    return total / n_draws


def mc_from_margins(ms, ys, mt, n_draws, seed=0):
    """Monte-Carlo (risk, disagreement, adaptation loss) from center margins.

    Works for any classifier with known normalized margins (including
    kernelized ones): a posterior draw perturbs each margin by a standard
    normal, which matches the isotropic Gaussian posterior in
    distribution for every per-point expectation.
    """
    if n_draws < 1:
        raise DegenerateInput("n_draws must be >= 1")
    ms = np.asarray(ms, dtype=float)
    mt = np.asarray(mt, dtype=float)
    rng = np.random.default_rng(seed)
    risk_total = 0.0
    dis_total = 0.0
    for take in _mc_chunks(n_draws):
        g1 = rng.standard_normal((take, ms.shape[0] + mt.shape[0]))
        g2 = rng.standard_normal((take, ms.shape[0] + mt.shape[0]))
        ps1 = ms + g1[:, : ms.shape[0]] >= 0.0
        ps2 = ms + g2[:, : ms.shape[0]] >= 0.0
        risk_total += np.sum(np.mean(np.where(ps1, 1, -1) != ys, axis=1))
        if mt.shape[0]:
            pt1 = mt + g1[:, ms.shape[0] :] >= 0.0
            pt2 = mt + g2[:, ms.shape[0] :] >= 0.0
            dis_total += np.sum(np.mean(pt1 != pt2, axis=1) - np.mean(ps1 != ps2, axis=1))
    risk = risk_total / n_draws
    dis = dis_total / n_draws
    return risk, dis, risk + dis


def mc_adaptation_loss(w, paired, n_draws, seed=0):
    """Monte-Carlo adaptation loss over pairs of posterior draws."""
    if n_draws < 1:
        raise DegenerateInput("n_draws must be >= 1")
    w = np.asarray(w, dtype=float)
    Xsn = normalized(paired.Xs)
    Xtn = normalized(paired.Xt)
    y = paired.ys
    rng = np.random.default_rng(seed)
    total = 0.0
    for take in _mc_chunks(n_draws):
        V = w + rng.standard_normal((take, 2, w.shape[0]))
        ps1, ps2 = (V[:, 0] @ Xsn.T >= 0.0), (V[:, 1] @ Xsn.T >= 0.0)
        pt1, pt2 = (V[:, 0] @ Xtn.T >= 0.0), (V[:, 1] @ Xtn.T >= 0.0)
        err = np.mean(np.where(ps1, 1, -1) != y, axis=1)
        total += np.sum(err + np.mean(pt1 != pt2, axis=1) - np.mean(ps1 != ps2, axis=1))
    return total / n_draws
