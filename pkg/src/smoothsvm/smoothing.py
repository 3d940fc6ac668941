"""Smoothed hinge loss and smoothed l1-norm.

Both surrogates are saddle-point smoothings: the non-smooth term is written
as a maximum over a box of a bilinear form, and a strongly convex
prox-function is subtracted.  The maximizer (the dual variable) has a closed
form, a clipped ratio, and every value and gradient here is derived from it
so that branch selection is consistent at the boundaries.

Smoothed hinge for sample ``i`` with margin ``m_i = y_i X_i w``::

    h_mu(m_i) = max_{0 <= u <= 1}  u (1 - m_i) - (mu / 2) ||X_i||_inf u^2

Smoothed absolute value::

    l_mu(w_i) = max_{-1 <= u <= 1}  u w_i - (mu / 2) u^2
"""

import numpy as np

from .errors import DimensionMismatch

__all__ = ["smoothed_hinge", "smoothed_l1", "hinge_dual", "hinge_value",
           "hinge_gradient", "hinge_lipschitz", "l1_dual", "l1_value",
           "l1_gradient", "l1_lipschitz"]


def smoothed_hinge(margins, inf_norms, mu):
    """Per-sample smoothed hinge values and duals from precomputed margins.

    Returns
    -------
    values : ndarray
        ``h_mu`` for each sample.
    u : ndarray
        Dual variables in ``[0, 1]``.
    """
    slack = 1.0 - margins
    scale = mu * inf_norms
    u = np.clip(slack / scale, 0.0, 1.0)
    return u * slack - 0.5 * scale * u * u, u


def smoothed_l1(w, mu):
    """Per-coordinate smoothed absolute values and duals in ``[-1, 1]``."""
    w = np.asarray(w, dtype=np.float64)
    u = np.clip(w / mu, -1.0, 1.0)
    return u * w - 0.5 * mu * u * u, u


def _margins(d, w):
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] != d.yx.shape[1]:
        raise DimensionMismatch(
            f"weight vector has shape {w.shape}, data has {d.yx.shape[1]} columns")
    return d.yx @ w


def hinge_dual(d, w, mu):
    """Maximizing dual ``u_i = median{(1 - y_i X_i w) / (mu ||X_i||_inf), 0, 1}``."""
    return smoothed_hinge(_margins(d, w), d.row_inf_norms, mu)[1]


def hinge_value(d, w, mu):
    """Sum of smoothed hinge losses over all samples."""
    return float(smoothed_hinge(_margins(d, w), d.row_inf_norms, mu)[0].sum())


def hinge_gradient(d, u):
    """Gradient ``-(YX)^T u`` of the smoothed hinge sum, given its duals."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (d.yx.shape[0],):
        raise DimensionMismatch(
            f"dual vector has shape {u.shape}, data has {d.yx.shape[0]} rows")
    return -(d.yx.T @ u)


def hinge_lipschitz(d, mu, mode="row_max"):
    """Lipschitz constant of the gradient of the smoothed hinge sum.

    Each sample contributes ``||X_i||_2^2 / (mu ||X_i||_inf)`` (the spectral
    norm of the rank-one ``X_i^T X_i`` is ``||X_i||_2^2``).  ``mode="row_max"``
    bounds the sum by ``n`` times the largest contribution; ``mode="strict"``
    uses the sum itself, which is tighter and still valid.
    """
    ratios = d.row_sq_norms / d.row_inf_norms
    if mode == "row_max":
        return ratios.shape[0] * float(ratios.max()) / mu
    if mode == "strict":
        return float(ratios.sum()) / mu
    raise ValueError(f"unknown Lipschitz mode {mode!r}")


def l1_dual(w, mu):
    """Soft-thresholded dual ``u_i = median{w_i / mu, -1, 1}``."""
    return smoothed_l1(w, mu)[1]


def l1_value(w, mu):
    return float(smoothed_l1(w, mu)[0].sum())


def l1_gradient(w, mu):
    # the gradient of the smoothed l1-norm is its dual
    return l1_dual(w, mu)


def l1_lipschitz(mu):
    return 1.0 / mu
