"""Independent reference computations used to check the main code path.

None of these reuse the smoothing closed forms: gradients come from finite
differences, smoothed losses from brute-force maximization over a grid, the
LS-SVM optimum from a dense linear solve and the hinge optimum from plain
subgradient descent on the non-smooth objective.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError, NonFiniteEvaluation, SingularSystem
from .models import LPSVM, LSSVM, nonsmooth_objective, prepare_data

__all__ = ["FDSpec", "fd_gradient", "kink_free", "saddle_max",
           "lssvm_direct", "subgradient_reference", "gradient_check"]


@dataclass(frozen=True)
class FDSpec:
    h: float = 1e-6
    scheme: str = "central"

    def __post_init__(self):
        if not self.h > 0:
            raise InputError("finite-difference step must be positive")
        if self.scheme != "central":
            raise InputError(f"unsupported scheme {self.scheme!r}")


def _steps(w, spec):
    return spec.h * np.maximum(1.0, np.abs(w))


def fd_gradient(f, w, spec=FDSpec()):
    """Central-difference gradient of the scalar function ``f`` at ``w``.

    The step for coordinate ``i`` is ``h * max(1, |w_i|)``.
    """
    w = np.array(w, dtype=np.float64)
    steps = _steps(w, spec)
    g = np.empty_like(w)
    for i, h in enumerate(steps):
        old = w[i]
        w[i] = old + h
        fp = f(w)
        w[i] = old - h
        fm = f(w)
        w[i] = old
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NonFiniteEvaluation(f"f is not finite around coordinate {i}")
        g[i] = (fp - fm) / (2.0 * h)
    return g


def kink_free(data, spec, w, fd=FDSpec(), margin=10.0):
    """True when no branch boundary lies within ``margin`` FD steps of ``w``.

    ``data`` must already be prepared for ``spec``.  Near a boundary the
    piecewise-quadratic objective has a second-derivative jump and central
    differences lose their exactness, so such points are excluded.
    """
    w = np.asarray(w, dtype=np.float64)
    steps = _steps(w, spec=fd)
    if spec.variant != LSSVM:
        m = data.yx @ w
        reach = margin * (np.abs(data.yx) @ steps)
        lower = 1.0 - spec.mu * data.row_inf_norms
        if (np.abs(m - 1.0) <= reach).any() or (np.abs(m - lower) <= reach).any():
            return False
    if spec.variant == LPSVM:
        n_reg = w.shape[0] - int(data.bias)
        wr = np.abs(w[:n_reg])
        if (np.abs(wr - spec.nu) <= margin * steps[:n_reg]).any():
            return False
    return True


def gradient_check(objective, w, fd=FDSpec()):
    """Relative error ``||g_fd - g|| / ||g||`` for an :class:`Objective`."""
    g = objective.evaluate(w).gradient
    g_fd = fd_gradient(objective.value, w, fd)
    return float(np.linalg.norm(g_fd - g) / max(np.linalg.norm(g), 1e-300))


def saddle_max(margin_term, inf_norm, mu, grid_n=100_000):
    """Grid maximum of ``u * margin_term - (mu / 2) * inf_norm * u^2`` on ``[0, 1]``."""
    if grid_n < 1000:
        raise InputError("grid_n must be at least 1000")
    u = np.linspace(0.0, 1.0, int(grid_n) + 1)
    return float(np.max(u * margin_term - 0.5 * mu * inf_norm * u * u))


def lssvm_direct(d, C, spec=None):
    """Stationary point of the LS-SVM objective by a dense SPD solve.

    Solves ``(M + 2C A^T A) w = 2C A^T e`` where ``A = YX`` and ``M`` is the
    regularizer Hessian (identity, or the kernel matrix, with a zero row for
    an unpenalized bias).
    """
    if spec is not None:
        d = prepare_data(d, spec)
    A = np.asarray(d.yx)
    q = A.shape[1]
    n_reg = q - int(d.bias)
    M = np.zeros((q, q))
    M[:n_reg, :n_reg] = np.eye(n_reg) if d.metric is None else d.metric
    H = M + 2.0 * C * (A.T @ A)
    rhs = 2.0 * C * A.sum(axis=0)
    try:
        return scipy.linalg.solve(H, rhs, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SingularSystem(str(exc)) from exc


def subgradient_reference(d, spec, iterations, w0=None, lam=1.0):
    """Best iterate of subgradient descent on the non-smooth objective.

    Uses steps ``1 / (lam * k)``.  With ``iterations=0`` the starting point
    is returned unchanged.

    Returns
    -------
    w : ndarray
        Best iterate found.
    history : ndarray
        Best objective value after each iteration (``iterations + 1`` entries).
    """
    if spec.variant == LSSVM:
        raise InputError("subgradient reference is for hinge-loss variants")
    data = prepare_data(d, spec)
    A = np.asarray(data.yx)
    q = A.shape[1]
    n_reg = q - int(data.bias)
    w = np.zeros(q) if w0 is None else np.array(w0, dtype=np.float64)
    best_w = w.copy()
    best_f = nonsmooth_objective(data, w, spec)
    history = [best_f]
    for k in range(1, int(iterations) + 1):
        m = A @ w
        g = np.zeros(q)
        if spec.variant == LPSVM:
            g[:n_reg] = np.sign(w[:n_reg])
        elif data.metric is None:
            g[:n_reg] = w[:n_reg]
        else:
            g[:n_reg] = data.metric @ w[:n_reg]
        g -= spec.C * (A.T @ (m < 1.0).astype(np.float64))
        w = w - g / (lam * k)
        f = nonsmooth_objective(data, w, spec)
        if f < best_f:
            best_f, best_w = f, w.copy()
        history.append(best_f)
    return best_w, np.array(history)
