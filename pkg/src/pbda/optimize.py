"""Deterministic bound-minimizing gradient descent, primal and dual.

Backtracking Armijo line search with seeded restarts.  Margins and the
metric product are updated incrementally along the search direction, so
each line-search probe costs O(m + n) instead of a fresh matrix product.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import _implicit_gradient
from .exceptions import DegenerateGradient
from .gibbs import normalized
from .kernel import DualWeights, KernelConfig, dual_features, gram
from .models import KernelModel, LinearModel
from .special import kl_inverse_sup, phi, phi_dis, phi_dis_prime, phi_prime, xi

_JITTER = 1e-8
_MAX_JITTER_RETRIES = 5
_MIN_STEP = 1e-16
_FLAT_WINDOW = 10
_FLAT_REL_TOL = 1e-10


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer hyperparameters; defaults suit the desk-scale moons tasks."""

    delta: float = 0.05
    max_iters: int = 2000
    grad_tol: float = 1e-6
    step_init: float = 1.0
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError("delta must be in (0, 1]")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must be in (0, 1)")
        if self.max_iters < 1 or self.step_init <= 0 or self.armijo_c <= 0:
            raise ValueError("invalid optimizer configuration")


@dataclass(frozen=True)
class IterationRecord:
    objective: float
    bstar: float
    source_risk: float
    disagreement: float
    step: float
    grad_norm: float


@dataclass
class TrainReport:
    """Final weights plus a full per-iteration audit of one training run."""

    model: object
    algorithm: str
    objective: float
    converged: bool
    iterations: int
    restart: int
    trace: list = field(default_factory=list)

    @property
    def final(self):
        return self.trace[-1]


class _BoundProblem:
    """Shared descent state for the PBGD and DA-PBGD objectives.

    ``K`` is the metric of the squared-norm term (None for the identity
    in the primal case, the anchor Gram matrix in the dual case).
    """

    def __init__(self, Fs, y, Ft, K, m, delta, mode):
        self.y = y
        self.K = K
        self.m = m
        self.mode = mode
        self.kl_coef = 1.0 if mode == "dapbgd" else 0.5
        self.log_conf = math.log(xi(m) / delta)
        # stack source and target features so margins and the gradient
        # reduction each cost a single matrix-vector product
        self.F = Fs if Ft is None else np.vstack([Fs, Ft])
        self.has_target = Ft is not None

    @property
    def dim(self):
        return self.F.shape[1]

    def metric_apply(self, v):
        return v.copy() if self.K is None else self.K @ v

    def apply_features(self, v):
        """Stacked margins (source rows first, then target rows)."""
        return self.F @ v

    def split(self, M):
        return (M[: self.m], M[self.m :]) if self.has_target else (M, None)

    def value(self, M, norm_sq):
        """Objective and audit terms from cached stacked margins and norm."""
        Ms, Mt = self.split(M)
        risk = float(np.mean(phi(self.y * Ms)))
        if self.mode == "dapbgd":
            dis = float(np.mean(phi_dis(Mt)) - np.mean(phi_dis(Ms)))
            q = float(np.clip(0.5 * (risk + dis) + 0.25, 0.0, 1.0))
        else:
            dis = 0.0
            q = risk
        budget = (self.kl_coef * norm_sq + self.log_conf) / self.m
        return kl_inverse_sup(q, budget), q, risk, dis

    def gradient(self, M, K_theta, bound, q):
        """Implicit-function gradient from cached state; may be degenerate."""
        Ms, Mt = self.split(M)
        weights = np.empty_like(M)
        weights[: self.m] = phi_prime(self.y * Ms) * self.y
        if self.mode == "dapbgd":
            weights[: self.m] -= phi_dis_prime(Ms)
            weights[self.m :] = phi_dis_prime(Mt)
            q_grad = (self.F.T @ weights) / (2.0 * self.m)
        else:
            q_grad = (self.F.T @ weights) / self.m
        budget_grad = self.kl_coef * 2.0 * K_theta / self.m
        return _implicit_gradient(bound, q, budget_grad, q_grad)


def _descend(problem, theta0, cfg, rng):
    theta = np.array(theta0, dtype=float)

    def full_state(th):
        M = problem.apply_features(th)
        K_theta = problem.metric_apply(th)
        return M, K_theta, float(th @ K_theta)

    M, K_theta, norm_sq = full_state(theta)
    f, q, risk, dis = problem.value(M, norm_sq)
    trace = [IterationRecord(f, q, risk, dis, 0.0, float("nan"))]
    converged = False
    step = cfg.step_init
    history = [f]
    iterations = 0

    for _ in range(cfg.max_iters):
        g = None
        for _attempt in range(_MAX_JITTER_RETRIES + 1):
            try:
                g = problem.gradient(M, K_theta, f, q)
                break
            except DegenerateGradient:
                theta = theta + _JITTER * rng.standard_normal(theta.shape)
                M, K_theta, norm_sq = full_state(theta)
                f, q, risk, dis = problem.value(M, norm_sq)
        if g is None:
            break
        g_norm = float(np.linalg.norm(g))
        if g_norm < cfg.grad_tol:
            converged = True
            break

        G = problem.apply_features(g)
        Kg = problem.metric_apply(g)
        g_Kt = float(g @ K_theta)
        g_Kg = float(g @ Kg)

        step = min(cfg.step_init, step / cfg.backtrack_factor)
        accepted = False
        while step > _MIN_STEP:
            M_t = M - step * G
            norm_t = norm_sq - 2.0 * step * g_Kt + step * step * g_Kg
            f_t, q_t, risk_t, dis_t = problem.value(M_t, norm_t)
            if f_t <= f - cfg.armijo_c * step * g_norm * g_norm:
                accepted = True
                break
            step *= cfg.backtrack_factor
        if not accepted:
            break

        theta = theta - step * g
        M, norm_sq = M_t, norm_t
        K_theta = K_theta - step * Kg
        f, q, risk, dis = f_t, q_t, risk_t, dis_t
        iterations += 1
        trace.append(IterationRecord(f, q, risk, dis, step, g_norm))
        history.append(f)
        if len(history) > _FLAT_WINDOW:
            old = history[-_FLAT_WINDOW - 1]
            if old - f <= _FLAT_REL_TOL * max(abs(old), 1e-30):
                converged = True
                break

    return theta, f, trace, converged, iterations


def _restart_points(dim, cfg):
    points = [np.zeros(dim)]
    for k in range(1, cfg.restarts + 1):
        v = np.random.default_rng(cfg.seed + k).standard_normal(dim)
        points.append(0.1 * v / np.linalg.norm(v))
    return points


def _train(problem, cfg, make_model, algorithm):
    best = None
    for k, theta0 in enumerate(_restart_points(problem.dim, cfg)):
        rng = np.random.default_rng(cfg.seed + 1000 + k)
        theta, f, trace, converged, iters = _descend(problem, theta0, cfg, rng)
        if best is None or f < best.objective:
            best = TrainReport(
                model=make_model(theta),
                algorithm=algorithm,
                objective=f,
                converged=converged,
                iterations=iters,
                restart=k,
                trace=trace,
            )
    return best


def train_pbgd(source, config=None, kernel=None, anchors=None):
    """Minimize the source-only risk bound; returns the best restart.

    With ``kernel`` set, training runs in the dual over ``anchors``
    (default: the source points).
    """
    cfg = config if config is not None else TrainConfig()
    if kernel is None:
        problem = _BoundProblem(
            normalized(source.X), source.y, None, None, len(source), cfg.delta, "pbgd"
        )
        return _train(problem, cfg, LinearModel, "pbgd")
    anchors = source.X if anchors is None else np.asarray(anchors, dtype=float)
    K = gram(anchors, kernel)
    Fs = dual_features(anchors, source.X, kernel)
    problem = _BoundProblem(Fs, source.y, None, K, len(source), cfg.delta, "pbgd")
    return _train(
        problem, cfg, lambda a: KernelModel(DualWeights(a, anchors), kernel), "pbgd"
    )


def train_dapbgd(paired, config=None, kernel=None, anchors=None):
    """Minimize the adaptation bound on a paired sample; best restart wins.

    With ``kernel`` set, training runs in the dual over ``anchors``
    (default: all source and target points of the paired sample).
    """
    cfg = config if config is not None else TrainConfig()
    if kernel is None:
        problem = _BoundProblem(
            normalized(paired.Xs),
            paired.ys,
            normalized(paired.Xt),
            None,
            paired.m,
            cfg.delta,
            "dapbgd",
        )
        return _train(problem, cfg, LinearModel, "dapbgd")
    anchors = (
        np.vstack([paired.Xs, paired.Xt]) if anchors is None else np.asarray(anchors, dtype=float)
    )
    K = gram(anchors, kernel)
    Fs = dual_features(anchors, paired.Xs, kernel)
    Ft = dual_features(anchors, paired.Xt, kernel)
    problem = _BoundProblem(Fs, paired.ys, Ft, K, paired.m, cfg.delta, "dapbgd")
    return _train(
        problem, cfg, lambda a: KernelModel(DualWeights(a, anchors), kernel), "dapbgd"
    )


def select_gamma(train_fn, gammas):
    """Bound-driven kernel-width selection: lowest final objective wins.

    ``train_fn`` maps a KernelConfig to a TrainReport; ties resolve to
    the earlier grid entry.  No target labels are involved.
    """
    best = None
    best_gamma = None
    for gamma in gammas:
        report = train_fn(KernelConfig("gaussian", gamma))
        if best is None or report.objective < best.objective:
            best, best_gamma = report, gamma
    return best, best_gamma
