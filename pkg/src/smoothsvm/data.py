"""Numeric containers shared by the smoothing, model and solver layers.

Both containers expose the same duck-typed surface consumed by
:mod:`smoothsvm.models`:

``design``
    the effective data matrix ``D`` (``X`` for linear models, ``K(X,X)Y``
    for kernel models), with a trailing ones column when bias-augmented;
``yx``
    ``Y @ design``, the matrix whose products drive every iteration;
``row_inf_norms`` / ``row_sq_norms``
    per-row norms of ``design``;
``metric``
    ``None`` for the Euclidean regularizer, the kernel matrix otherwise;
``bias``
    whether the last coordinate is an unpenalized intercept.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist

from .errors import (DimensionMismatch, EmptyDataset, InputError,
                     LabelOutOfRange, NonPositiveKernelWidth, ZeroRow)

__all__ = ["Dataset", "GramDataset", "build_dataset", "dataset_from_arrays",
           "check_zero_rows",
           "augment_bias", "build_gram", "rbf_kernel"]


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def _row_norms(D):
    absD = np.abs(D)
    return absD.max(axis=1), np.einsum("ij,ij->i", D, D)


def _check_labels(y):
    bad = ~((y == 1.0) | (y == -1.0))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise LabelOutOfRange(f"label at row {i} is {y[i]!r}; expected -1 or +1")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense samples ``X`` (n x p) with labels ``y`` in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray
    row_inf_norms: np.ndarray
    row_sq_norms: np.ndarray
    bias: bool = False
    yx: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.yx is None:
            object.__setattr__(self, "yx", _frozen(self.y[:, None] * self.X))

    @property
    def design(self):
        return self.X

    @property
    def metric(self):
        return None

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        """Number of raw features (the bias column excluded)."""
        return self.X.shape[1] - int(self.bias)

    @property
    def n_weights(self):
        return self.X.shape[1]


def dataset_from_arrays(X, y, allow_zero_rows=False):
    """Validate ``X`` and ``y`` and build a :class:`Dataset`.

    Sparse ``X`` is densified.  All-zero rows are rejected with
    :class:`~smoothsvm.errors.ZeroRow` unless ``allow_zero_rows`` is set,
    which is only sensible for data that will be kernelized (kernel rows
    are never zero).  Training on a zero row raises the same error later.
    """
    if sparse.issparse(X):
        X = X.toarray()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("at least one sample is required")
    if X.shape[1] == 0:
        raise EmptyDataset("at least one feature is required")
    if y.shape[0] != X.shape[0]:
        raise DimensionMismatch(
            f"{X.shape[0]} samples but {y.shape[0]} labels")
    if not np.isfinite(X).all():
        raise InputError("feature matrix contains non-finite entries")
    _check_labels(y)
    inf_norms, sq_norms = _row_norms(X)
    if not allow_zero_rows:
        check_zero_rows(inf_norms)
    return Dataset(_frozen(X), _frozen(y), _frozen(inf_norms), _frozen(sq_norms))


def check_zero_rows(inf_norms):
    zero = np.flatnonzero(np.asarray(inf_norms) == 0.0)
    if zero.size:
        raise ZeroRow(int(zero[0]))


def build_dataset(raw_rows, allow_zero_rows=False):
    """Build a :class:`Dataset` from ``(feature_vector, label)`` pairs."""
    rows = list(raw_rows)
    if not rows:
        raise EmptyDataset("at least one row is required")
    widths = {len(features) for features, _ in rows}
    if len(widths) != 1:
        raise DimensionMismatch(f"rows have differing lengths {sorted(widths)}")
    X = np.array([features for features, _ in rows], dtype=np.float64)
    y = np.array([label for _, label in rows], dtype=np.float64)
    return dataset_from_arrays(X, y, allow_zero_rows)


@dataclass(frozen=True, eq=False)
class GramDataset:
    """Kernelized training set.

    ``K`` is the effective data matrix ``K(X,X) @ diag(y)`` (plus a ones
    column when bias-augmented); ``kernel`` is the raw symmetric kernel
    matrix used by the regularizer; ``X`` keeps the training samples so new
    points can be scored.
    """

    K: np.ndarray
    kernel: np.ndarray
    y: np.ndarray
    X: np.ndarray
    width: float
    row_inf_norms: np.ndarray
    row_sq_norms: np.ndarray
    bias: bool = False
    yx: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.yx is None:
            object.__setattr__(self, "yx", _frozen(self.y[:, None] * self.K))

    @property
    def design(self):
        return self.K

    @property
    def metric(self):
        return self.kernel

    @property
    def kernel_params(self):
        return {"kernel": "rbf", "width": self.width}

    @property
    def n_samples(self):
        return self.K.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]

    @property
    def n_weights(self):
        return self.K.shape[1]


def rbf_kernel(A, B, width):
    """``exp(-||a - b||^2 / width)`` for every row pair of ``A`` and ``B``."""
    if not width > 0:
        raise NonPositiveKernelWidth(f"RBF width must be positive, got {width!r}")
    return np.exp(-cdist(np.atleast_2d(A), np.atleast_2d(B), "sqeuclidean") / width)


def build_gram(d, width=None):
    """Kernelize a linear :class:`Dataset` with an RBF kernel.

    ``width`` defaults to the number of features, i.e. the kernel
    ``exp(-||X_i - X_j||^2 / p)``.
    """
    if d.bias:
        raise InputError("kernelize before augmenting the bias column")
    if width is None:
        width = float(d.n_features)
    width = float(width)
    K = rbf_kernel(d.X, d.X, width)
    D = K * d.y[None, :]
    inf_norms, sq_norms = _row_norms(D)
    return GramDataset(_frozen(D), _frozen(K), d.y, d.X, width,
                       _frozen(inf_norms), _frozen(sq_norms))


def augment_bias(d):
    """Append a constant-one column so the last weight acts as the bias.

    Works for both containers; norms are recomputed.  Augmenting twice adds
    a second ones column, which callers must avoid.
    """
    D = d.design
    D = np.hstack([D, np.ones((D.shape[0], 1))])
    inf_norms, sq_norms = _row_norms(D)
    common = dict(row_inf_norms=_frozen(inf_norms),
                  row_sq_norms=_frozen(sq_norms), bias=True, yx=None)
    if isinstance(d, GramDataset):
        return replace(d, K=_frozen(D), **common)
    return replace(d, X=_frozen(D), **common)
