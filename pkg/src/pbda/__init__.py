"""PAC-Bayesian domain adaptation for linear and kernelized classifiers.

Implements bound-minimizing gradient descent on a source-only PAC-Bayes
risk bound (PBGD) and on a domain-adaptation bound that additionally
penalizes the posterior's ability to tell the source and target input
distributions apart (DA-PBGD).
"""

from .bounds import (
    ObjectiveReport,
    complexity_budget,
    dapbgd_gradient,
    dapbgd_objective,
    pbgd_bound,
    pbgd_gradient,
)
from .data import (
    LabeledSample,
    PairedSample,
    UnlabeledSample,
    generate_moons,
    load_csv,
    pair,
    rotate,
    save_csv,
)
from .estimators import DAPBGDClassifier, PBGDClassifier
from .exceptions import (
    DegenerateGradient,
    DegenerateInput,
    DimensionError,
    DomainError,
    ParseError,
    PBDAError,
)
from .gibbs import (
    adaptation_loss_hat,
    bstar,
    disagreement_hat,
    error_rate,
    gibbs_risk,
    margin,
    margins,
    mc_adaptation_loss,
    mc_disagreement,
    mc_gibbs_risk,
    predict,
)
from .kernel import (
    DualWeights,
    KernelConfig,
    dual_gradient,
    dual_margin,
    dual_norm_sq,
    dual_objective,
    dual_pbgd_bound,
    dual_pbgd_gradient,
    gram,
)
from .models import KernelModel, LinearModel, load_model, save_model
from .optimize import TrainConfig, TrainReport, select_gamma, train_dapbgd, train_pbgd
from .special import kl_bernoulli, kl_inverse_sup, phi, phi_dis, phi_dis_prime, phi_prime, xi

__all__ = [
    "ObjectiveReport", "complexity_budget", "dapbgd_gradient", "dapbgd_objective",
    "pbgd_bound", "pbgd_gradient",
    "LabeledSample", "PairedSample", "UnlabeledSample",
    "generate_moons", "load_csv", "pair", "rotate", "save_csv",
    "DAPBGDClassifier", "PBGDClassifier",
    "DegenerateGradient", "DegenerateInput", "DimensionError", "DomainError",
    "ParseError", "PBDAError",
    "adaptation_loss_hat", "bstar", "disagreement_hat", "error_rate", "gibbs_risk",
    "margin", "margins", "mc_adaptation_loss", "mc_disagreement", "mc_gibbs_risk", "predict",
    "DualWeights", "KernelConfig", "dual_gradient", "dual_margin", "dual_norm_sq",
    "dual_objective", "dual_pbgd_bound", "dual_pbgd_gradient", "gram",
    "KernelModel", "LinearModel", "load_model", "save_model",
    "TrainConfig", "TrainReport", "select_gamma", "train_dapbgd", "train_pbgd",
    "kl_bernoulli", "kl_inverse_sup", "phi", "phi_dis", "phi_dis_prime", "phi_prime", "xi",
]

__version__ = "0.1.0"
