"""Objective assembly for C-SVM, LP-SVM and LS-SVM.

Every variant has the form ``F(w) = R(w) + C * L(w)`` and is exposed through
the same :class:`Objective` surface (value, gradient, Lipschitz constant) so
the accelerated solver never branches on the variant.

======== ============================ ===================================
variant  regularizer ``R``            loss ``L``
======== ============================ ===================================
csvm     ``0.5 ||w||^2``              smoothed hinge, parameter ``mu``
lpsvm    smoothed ``||w||_1`` (``nu``) smoothed hinge, parameter ``mu``
lssvm    ``0.5 ||w||^2``              ``sum (1 - y_i X_i w)^2``
======== ============================ ===================================

With an RBF kernel the data matrix becomes ``K(X,X) Y`` and the Euclidean
regularizer becomes ``0.5 w^T K w``.  With a bias column the last weight is
never regularized.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import smoothing
from .data import Dataset, GramDataset, augment_bias, build_gram, check_zero_rows
from .errors import DimensionMismatch, InputError, MissingNu

__all__ = ["CSVM", "LPSVM", "LSSVM", "VARIANTS", "ModelSpec", "ObjectiveEval",
           "MatvecCounter", "Objective", "prepare_data", "eval_csvm",
           "eval_lpsvm", "eval_lssvm", "kernelize", "evaluate",
           "nonsmooth_objective"]

CSVM = "csvm"
LPSVM = "lpsvm"
LSSVM = "lssvm"
VARIANTS = (CSVM, LPSVM, LSSVM)


@dataclass(frozen=True)
class ModelSpec:
    """Which SVM to train and how to smooth it.

    ``mu`` smooths the hinge loss (C-SVM and LP-SVM); ``nu`` smooths the
    l1 regularizer and is required for LP-SVM.  LS-SVM ignores both.
    ``lipschitz`` selects the constant used for the step size: ``"row_max"``
    uses the per-row bounds, ``"strict"`` the tighter sum (hinge) or the
    exact spectral bound (least squares).
    """

    variant: str = CSVM
    C: float = 1.0
    kernel: str = "linear"
    width: float = None
    bias: bool = False
    mu: float = 5.0
    nu: float = None
    lipschitz: str = "row_max"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InputError(f"unknown variant {self.variant!r}")
        if self.kernel not in ("linear", "rbf"):
            raise InputError(f"unknown kernel {self.kernel!r}")
        if self.lipschitz not in ("row_max", "strict"):
            raise InputError(f"unknown Lipschitz mode {self.lipschitz!r}")
        if not self.C > 0:
            raise InputError(f"C must be positive, got {self.C!r}")
        if self.variant != LSSVM and not self.mu > 0:
            raise InputError(f"mu must be positive, got {self.mu!r}")
        if self.variant == LPSVM:
            if self.nu is None:
                raise MissingNu("LP-SVM needs the l1 smoothing parameter nu")
            if not self.nu > 0:
                raise InputError(f"nu must be positive, got {self.nu!r}")

    def with_smoothing(self, mu, nu=None):
        return replace(self, mu=mu, nu=self.nu if nu is None else nu)


@dataclass
class ObjectiveEval:
    value: float
    gradient: np.ndarray
    lipschitz: float


class MatvecCounter:
    """Counts products with the n x q data matrix (or the kernel metric)."""

    def __init__(self):
        self.count = 0

    def tick(self, k=1):
        self.count += k


def prepare_data(d, spec):
    """Kernelize and/or bias-augment ``d`` as ``spec`` requires."""
    if spec.kernel == "rbf" and isinstance(d, Dataset):
        if d.bias:
            raise InputError("kernelize before augmenting the bias column")
        d = build_gram(d, spec.width)
    elif spec.kernel == "linear" and isinstance(d, GramDataset):
        raise InputError("linear model given a kernelized dataset")
    if spec.bias and not d.bias:
        d = augment_bias(d)
    return d


def _spectral_norm(A):
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


class Objective:
    """Smoothed SVM objective bound to prepared data.

    The data must already match ``spec`` (see :func:`prepare_data`).  Each
    call to :meth:`margins` and each transposed product in
    :meth:`gradient` ticks ``counter`` (margins at the origin are free);
    kernel models with an l2
    regularizer additionally spend one product with the kernel matrix.
    """

    def __init__(self, data, spec, counter=None):
        if spec.bias != data.bias:
            raise InputError("data bias column does not match the model spec")
        if (spec.kernel == "rbf") != isinstance(data, GramDataset):
            raise InputError("data kernelization does not match the model spec")
        check_zero_rows(data.row_inf_norms)
        self.data = data
        self.spec = spec
        self.counter = counter if counter is not None else MatvecCounter()
        self.A = data.yx
        self.n, self.q = self.A.shape
        self.n_reg = self.q - int(data.bias)
        self.metric = data.metric
        self.lipschitz = self._lipschitz()

    # ------------------------------------------------------------------
    def _lipschitz(self):
        spec, d = self.spec, self.data
        if spec.variant == LPSVM:
            reg = smoothing.l1_lipschitz(spec.nu)
        elif self.metric is None:
            reg = 1.0
        else:
            reg = float(np.linalg.eigvalsh(self.metric)[-1])
        if spec.variant == LSSVM:
            if spec.lipschitz == "row_max":
                loss = 2.0 * float(d.row_sq_norms.max())
            else:
                loss = 2.0 * _spectral_norm(self.A) ** 2
        else:
            loss = smoothing.hinge_lipschitz(d, spec.mu, spec.lipschitz)
        return reg + spec.C * loss

    def _check(self, w):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.q,):
            raise DimensionMismatch(
                f"weight vector has shape {w.shape}, expected ({self.q},)")
        return w

    def margins(self, w):
        # the usual cold start is the origin, where no product is needed
        if not w.any():
            return np.zeros(self.n)
        self.counter.tick()
        return self.A @ w

    def _regularizer(self, w):
        wr = w[:self.n_reg]
        g = np.zeros(self.q)
        if self.spec.variant == LPSVM:
            vals, u = smoothing.smoothed_l1(wr, self.spec.nu)
            g[:self.n_reg] = u
            return float(vals.sum()), g
        if self.metric is None:
            g[:self.n_reg] = wr
            return 0.5 * float(wr @ wr), g
        self.counter.tick()
        Kw = self.metric @ wr
        g[:self.n_reg] = Kw
        return 0.5 * float(wr @ Kw), g

    def partial(self, w):
        """Objective value at ``w`` plus the state needed for its gradient.

        Costs one product with the data matrix; :meth:`gradient` then costs
        one more.
        """
        w = self._check(w)
        m = self.margins(w)
        reg, reg_grad = self._regularizer(w)
        if self.spec.variant == LSSVM:
            residual = 1.0 - m
            loss = float(residual @ residual)
            weights = 2.0 * residual
        else:
            vals, u = smoothing.smoothed_hinge(m, self.data.row_inf_norms,
                                               self.spec.mu)
            loss = float(vals.sum())
            weights = u
        return reg + self.spec.C * loss, (reg_grad, weights)

    def gradient(self, cache):
        reg_grad, weights = cache
        self.counter.tick()
        return reg_grad - self.spec.C * (self.A.T @ weights)

    def value(self, w):
        return self.partial(w)[0]

    def evaluate(self, w):
        value, cache = self.partial(w)
        return ObjectiveEval(value, self.gradient(cache), self.lipschitz)

    def dual(self, w):
        """Hinge duals at ``w`` (``None`` for LS-SVM)."""
        if self.spec.variant == LSSVM:
            return None
        w = self._check(w)
        return smoothing.smoothed_hinge(self.A @ w, self.data.row_inf_norms,
                                        self.spec.mu)[1]


def _eval_variant(variant, d, w, spec):
    if spec.variant != variant:
        raise InputError(f"spec variant is {spec.variant!r}, expected {variant!r}")
    return Objective(d, spec).evaluate(w)


def eval_csvm(d, w, spec):
    """``0.5||w||^2 + C sum h_mu``; gradient ``w - C (YX)^T u``."""
    return _eval_variant(CSVM, d, w, spec)


def eval_lpsvm(d, w, spec):
    """``sum l_nu(w_j) + C sum h_mu``; gradient ``u_l1 - C (YX)^T u_hinge``."""
    return _eval_variant(LPSVM, d, w, spec)


def eval_lssvm(d, w, spec):
    """``0.5||w||^2 + C sum (1 - y_i X_i w)^2``; gradient ``w - 2C (YX)^T (e - YXw)``."""
    return _eval_variant(LSSVM, d, w, spec)


def kernelize(spec, g, alpha):
    """Evaluate the kernel form of ``spec`` at coefficients ``alpha``."""
    if spec.kernel != "rbf" or not isinstance(g, GramDataset):
        raise InputError("kernelize needs an rbf spec and a GramDataset")
    return Objective(g, spec).evaluate(alpha)


def evaluate(d, w, spec):
    return Objective(d, spec).evaluate(w)


def nonsmooth_objective(d, w, spec):
    """The original objective with the exact hinge loss and l1-norm."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (d.yx.shape[1],):
        raise DimensionMismatch(f"weight vector has shape {w.shape}")
    n_reg = w.shape[0] - int(d.bias)
    wr = w[:n_reg]
    m = d.yx @ w
    if spec.variant == LPSVM:
        reg = float(np.abs(wr).sum())
    elif d.metric is None:
        reg = 0.5 * float(wr @ wr)
    else:
        reg = 0.5 * float(wr @ (d.metric @ wr))
    if spec.variant == LSSVM:
        loss = float(((1.0 - m) ** 2).sum())
    else:
        loss = float(np.maximum(0.0, 1.0 - m).sum())
    return reg + spec.C * loss
