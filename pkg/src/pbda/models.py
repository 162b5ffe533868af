"""Trained classifier containers plus the text model-file format.

A model is either a primal weight vector or a dual expansion over
anchors.  The file format is flat key=value lines; arrays are
space-separated decimals at 17 significant digits.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ParseError
from .gibbs import margins as primal_margins
from .kernel import DualWeights, KernelConfig, dual_margins
from .special import phi, phi_dis


@dataclass(frozen=True)
class LinearModel:
    """Primal linear classifier h(x) = sgn(w.x)."""

    w: np.ndarray

    def margins(self, X):
        return primal_margins(self.w, X)


@dataclass(frozen=True)
class KernelModel:
    """Dual classifier h(x) = sgn(sum_i alpha_i k(x_i, x))."""

    weights: DualWeights
    config: KernelConfig

    def margins(self, X):
        return dual_margins(self.weights, X, self.config)


def model_predict(model, X):
    """Deterministic labels; a margin of exactly 0 maps to +1."""
    return np.where(model.margins(X) >= 0.0, 1, -1)


def model_accuracy(model, sample):
    """Fraction of a labeled sample classified correctly."""
    return float(np.mean(model_predict(model, sample.X) == sample.y))


def model_gibbs_risk(model, sample):
    """Closed-form Gibbs risk of the posterior centered on this model."""
    return float(np.mean(phi(sample.y * model.margins(sample.X))))


def model_disagreement(model, paired):
    """Closed-form empirical domain disagreement of this model's posterior."""
    return float(
        np.mean(phi_dis(model.margins(paired.Xt))) - np.mean(phi_dis(model.margins(paired.Xs)))
    )


def _fmt_array(a):
    return " ".join(format(v, ".17g") for v in np.asarray(a, dtype=float).ravel())


def save_model(model, path, algorithm=""):
    """Write a model as flat key=value text."""
    lines = []
    if algorithm:
        lines.append(f"algorithm={algorithm}")
    if isinstance(model, LinearModel):
        lines.append("format=primal")
        lines.append(f"d={model.w.shape[0]}")
        lines.append(f"w={_fmt_array(model.w)}")
    else:
        lines.append("format=dual")
        lines.append(f"kernel={model.config.kind}")
        lines.append(f"gamma={format(model.config.gamma, '.17g')}")
        n, d = model.weights.anchors.shape
        lines.append(f"n_anchors={n}")
        lines.append(f"d={d}")
        lines.append(f"alpha={_fmt_array(model.weights.alpha)}")
        lines.append(f"anchors={_fmt_array(model.weights.anchors)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path):
    """Read a model file written by :func:`save_model`."""
    fields = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            if "=" not in raw:
                raise ParseError(f"expected key=value, got {raw!r}", line=lineno)
            key, value = raw.split("=", 1)
            fields[key] = value
    fmt = fields.get("format")
    try:
        if fmt == "primal":
            d = int(fields["d"])
            w = np.fromstring(fields["w"], sep=" ")
            if w.shape != (d,):
                raise ParseError(f"w has {w.shape[0]} entries, expected {d}")
            return LinearModel(w)
        if fmt == "dual":
            config = KernelConfig(fields["kernel"], float(fields.get("gamma", 1.0)))
            n = int(fields["n_anchors"])
            d = int(fields["d"])
            alpha = np.fromstring(fields["alpha"], sep=" ")
            anchors = np.fromstring(fields["anchors"], sep=" ").reshape(n, d)
            return KernelModel(DualWeights(alpha, anchors), config)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad model file: {exc}") from exc
    raise ParseError(f"unknown model format {fmt!r}")
