"""Two-moons benchmark data: generation, rotation, pairing, CSV I/O.

Samples are immutable containers of float arrays.  Labels live in
{-1, +1}.  Points are never the zero vector because every downstream
quantity divides by the point norm.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInput, DimensionError, ParseError

_MIN_NORM = 1e-9


def _check_points(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DimensionError(f"expected a nonempty 2-D point array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DegenerateInput("points contain non-finite values")
    if np.any(np.linalg.norm(X, axis=1) < _MIN_NORM):
        raise DegenerateInput("points must not be (near-)zero vectors")
    X.setflags(write=False)
    return X


@dataclass(frozen=True)
class LabeledSample:
    """Points with labels in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = _check_points(self.X)
        y = np.asarray(self.y, dtype=int)
        if y.shape != (X.shape[0],):
            raise DimensionError(f"labels shape {y.shape} does not match {X.shape[0]} points")
        if not np.all(np.isin(y, (-1, 1))):
            raise ParseError("labels must be -1 or +1")
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    def unlabeled(self):
        return UnlabeledSample(self.X)


@dataclass(frozen=True)
class UnlabeledSample:
    """Points without labels."""

    X: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", _check_points(self.X))

    def __len__(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class PairedSample:
    """m source-target triples (x_s, y_s, x_t) drawn jointly."""

    Xs: np.ndarray
    ys: np.ndarray
    Xt: np.ndarray

    def __post_init__(self):
        src = LabeledSample(self.Xs, self.ys)
        tgt = UnlabeledSample(self.Xt)
        if src.dim != tgt.dim:
            raise DimensionError(f"source dim {src.dim} != target dim {tgt.dim}")
        if len(src) != len(tgt):
            raise DimensionError(f"{len(src)} source vs {len(tgt)} target points")
        object.__setattr__(self, "Xs", src.X)
        object.__setattr__(self, "ys", src.y)
        object.__setattr__(self, "Xt", tgt.X)

    @property
    def m(self):
        return self.Xs.shape[0]

    @property
    def dim(self):
        return self.Xs.shape[1]

    def source(self):
        return LabeledSample(self.Xs, self.ys)

    def target(self):
        return UnlabeledSample(self.Xt)


def generate_moons(n_per_class, noise_std=0.05, seed=0):
    """Inter-twinning moons in 2-D, ``n_per_class`` points per label.

    Class +1 sits on the upper unit half-circle around the origin; class
    -1 on the downward half-circle of radius 1 around (1, 0.5).  Arc
    angles are uniform; isotropic Gaussian noise of std ``noise_std`` is
    added.  Deterministic for a fixed seed.
    """
    if n_per_class < 1:
        raise DimensionError("n_per_class must be >= 1")
    if noise_std < 0:
        raise DegenerateInput("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    t_up = rng.uniform(0.0, np.pi, n_per_class)
    t_dn = rng.uniform(0.0, np.pi, n_per_class)
    upper = np.column_stack([np.cos(t_up), np.sin(t_up)])
    lower = np.column_stack([1.0 + np.cos(t_dn), 0.5 - np.sin(t_dn)])
    X = np.vstack([upper, lower])
    if noise_std > 0:
        X = X + rng.normal(0.0, noise_std, X.shape)
        # resample the rare point that noise pushed onto the origin
        while True:
            bad = np.linalg.norm(X, axis=1) < _MIN_NORM
            if not bad.any():
                break
            X[bad] += rng.normal(0.0, noise_std, (int(bad.sum()), 2))
    y = np.concatenate([np.ones(n_per_class, dtype=int), -np.ones(n_per_class, dtype=int)])
    return LabeledSample(X, y)


def rotate(sample, angle_degrees):
    """Rotate every point of a 2-D sample about the origin."""
    if sample.dim != 2:
        raise DimensionError(f"rotation requires d=2, got d={sample.dim}")
    theta = np.deg2rad(angle_degrees)
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    X = sample.X @ R.T
    if isinstance(sample, LabeledSample):
        return LabeledSample(X, sample.y)
    return UnlabeledSample(X)


def pair(source, target, seed=0):
    """Pair a labeled source with an unlabeled target sample.

    Takes the first min(|S|, |T|) elements of a seeded shuffle of each
    side; every retained point is used exactly once.
    """
    if source.dim != target.dim:
        raise DimensionError(f"source dim {source.dim} != target dim {target.dim}")
    m = min(len(source), len(target))
    rng = np.random.default_rng(seed)
    si = rng.permutation(len(source))[:m]
    ti = rng.permutation(len(target))[:m]
    return PairedSample(source.X[si], source.y[si], target.X[ti])


def _fmt(v):
    return format(v, ".17g")


def save_csv(sample, path):
    """Write a sample as CSV (header x1..xd,label; empty label if unlabeled)."""
    labeled = isinstance(sample, LabeledSample)
    d = sample.dim
    header = ",".join(f"x{j + 1}" for j in range(d)) + ",label"
    lines = [header]
    for i in range(len(sample)):
        row = ",".join(_fmt(v) for v in sample.X[i])
        if labeled:
            row += ",+1" if sample.y[i] > 0 else ",-1"
        else:
            row += ","
        lines.append(row)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_csv(path):
    """Read a sample written by :func:`save_csv`.

    Returns a :class:`LabeledSample` when every label cell is +1/-1 and
    an :class:`UnlabeledSample` when every label cell is empty; anything
    else is a :class:`ParseError` carrying the offending line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    header = lines[0].split(",")
    if header[-1] != "label" or len(header) < 2:
        raise ParseError(f"bad header {lines[0]!r}", line=1)
    d = len(header) - 1
    if header[:d] != [f"x{j + 1}" for j in range(d)]:
        raise ParseError(f"bad header {lines[0]!r}", line=1)
    points, labels = [], []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        cells = raw.split(",")
        if len(cells) != d + 1:
            raise ParseError(f"expected {d + 1} columns, got {len(cells)}", line=lineno)
        try:
            points.append([float(c) for c in cells[:d]])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        lab = cells[d].strip()
        if lab == "":
            labels.append(None)
        elif lab in ("+1", "1", "-1"):
            labels.append(1 if lab in ("+1", "1") else -1)
        else:
            raise ParseError(f"bad label {lab!r}", line=lineno)
    if not points:
        raise ParseError("no data rows", line=2)
    if all(l is None for l in labels):
        return UnlabeledSample(np.array(points))
    if any(l is None for l in labels):
        first = labels.index(None) + 2
        raise ParseError("empty label in a labeled file", line=first)
    return LabeledSample(np.array(points), np.array(labels))
