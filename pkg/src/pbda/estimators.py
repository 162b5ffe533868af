"""Scikit-learn style wrappers around the bound-minimizing trainers."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import LabeledSample, UnlabeledSample, pair
from .kernel import KernelConfig
from .models import model_predict
from .optimize import TrainConfig, train_dapbgd, train_pbgd


class _BoundMinimizerMixin:
    def _train_config(self):
        return TrainConfig(
            delta=self.delta,
            max_iters=self.max_iters,
            grad_tol=self.grad_tol,
            step_init=self.step_init,
            backtrack_factor=self.backtrack_factor,
            armijo_c=self.armijo_c,
            restarts=self.restarts,
            seed=self.seed,
        )

    def _kernel_config(self):
        if self.kernel is None:
            return None
        return KernelConfig(self.kernel, self.gamma)

    def _encode_labels(self, y):
        classes = np.unique(y)
        if classes.shape[0] != 2:
            raise ValueError(f"expected exactly 2 classes, got {classes.shape[0]}")
        self.classes_ = classes
        return np.where(y == classes[1], 1, -1)

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        return self.model_.margins(X)

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X)
        signs = model_predict(self.model_, X)
        return np.where(signs > 0, self.classes_[1], self.classes_[0])


class PBGDClassifier(_BoundMinimizerMixin, ClassifierMixin, BaseEstimator):
    """Linear (or kernelized) classifier that minimizes a PAC-Bayes risk bound.

    Fitting runs a deterministic gradient descent on the sup-inverse KL
    bound of the Gibbs risk; ``bound_`` exposes the certified risk level
    of the returned posterior center.
    """

    def __init__(
        self,
        kernel=None,
        gamma=1.0,
        delta=0.05,
        max_iters=2000,
        grad_tol=1e-6,
        step_init=1.0,
        backtrack_factor=0.5,
        armijo_c=1e-4,
        restarts=3,
        seed=0,
    ):
        self.kernel = kernel
        self.gamma = gamma
        self.delta = delta
        self.max_iters = max_iters
        self.grad_tol = grad_tol
        self.step_init = step_init
        self.backtrack_factor = backtrack_factor
        self.armijo_c = armijo_c
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        source = LabeledSample(X, self._encode_labels(y))
        self.report_ = train_pbgd(source, self._train_config(), self._kernel_config())
        self.model_ = self.report_.model
        self.bound_ = self.report_.objective
        return self


class DAPBGDClassifier(_BoundMinimizerMixin, ClassifierMixin, BaseEstimator):
    """Domain-adaptive classifier minimizing the paired adaptation bound.

    ``fit`` additionally takes the unlabeled target inputs; the labeled
    source and the target are paired by a seeded shuffle before
    training.
    """

    def __init__(
        self,
        kernel=None,
        gamma=1.0,
        delta=0.05,
        max_iters=2000,
        grad_tol=1e-6,
        step_init=1.0,
        backtrack_factor=0.5,
        armijo_c=1e-4,
        restarts=3,
        seed=0,
        pair_seed=0,
    ):
        self.kernel = kernel
        self.gamma = gamma
        self.delta = delta
        self.max_iters = max_iters
        self.grad_tol = grad_tol
        self.step_init = step_init
        self.backtrack_factor = backtrack_factor
        self.armijo_c = armijo_c
        self.restarts = restarts
        self.seed = seed
        self.pair_seed = pair_seed

    def fit(self, X, y, X_target=None):
        if X_target is None:
            raise ValueError("DAPBGDClassifier.fit requires unlabeled target inputs X_target")
        X, y = check_X_y(X, y)
        X_target = check_array(X_target)
        source = LabeledSample(X, self._encode_labels(y))
        paired = pair(source, UnlabeledSample(X_target), seed=self.pair_seed)
        self.report_ = train_dapbgd(paired, self._train_config(), self._kernel_config())
        self.model_ = self.report_.model
        self.bound_ = self.report_.objective
        self.paired_ = paired
        return self
