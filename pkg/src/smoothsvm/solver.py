"""Accelerated gradient solver and smoothing continuation.

One iteration, given the gradient ``g_k`` of the smoothed objective at
``w_k`` and its Lipschitz constant ``L``::

    y_k     = w_k - g_k / L
    z_k     = w_star - (1 / L) * sum_{i<=k} (i + 1) / 2 * g_i
    w_{k+1} = 2 / (k + 3) * z_k + (k + 1) / (k + 3) * y_k

No line search is performed.  Iteration stops once successive objective
values differ by less than ``epsilon``.
"""

import copy
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .data import rbf_kernel
from .errors import DimensionMismatch, InputError, NonFiniteIterate
from .models import (LSSVM, MatvecCounter, Objective, ObjectiveEval,
                     prepare_data)

__all__ = ["SolverConfig", "SolverState", "Trace", "StageReport",
           "TrainedModel", "nesterov_step", "solve", "solve_homotopy",
           "homotopy_schedule"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-3
    max_iter: int = 100_000
    w0: np.ndarray = None
    w_star: np.ndarray = None
    record_history: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError(f"epsilon must be positive, got {self.epsilon!r}")
        if int(self.max_iter) < 1:
            raise InputError(f"max_iter must be at least 1, got {self.max_iter!r}")


@dataclass
class SolverState:
    k: int
    w: np.ndarray
    grad_accum: np.ndarray
    y: np.ndarray = None
    z: np.ndarray = None
    f_history: list = field(default_factory=list)


@dataclass
class Trace:
    """Per-iteration history, filled only when ``record_history`` is set.

    ``objective[k]`` is ``F(w_k)`` for ``k = 0..K``; ``objective_y[k]`` is
    ``F(y_k)`` for ``k = 0..K-1``.
    """

    objective: list = field(default_factory=list)
    objective_y: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    y: list = field(default_factory=list)
    z: list = field(default_factory=list)
    grad_accum: list = field(default_factory=list)


@dataclass
class StageReport:
    mu: float
    nu: float
    epsilon: float
    iterations: int
    objective: float
    converged: bool


@dataclass
class TrainedModel:
    w: np.ndarray
    spec: object
    iterations: int
    final_objective: float
    converged: bool
    lipschitz: float = None
    matvecs: int = 0
    trace: Trace = None
    stages: list = None
    basis: np.ndarray = None
    basis_labels: np.ndarray = None

    @property
    def bias(self):
        return float(self.w[-1]) if self.spec.bias else 0.0

    @property
    def coef(self):
        return self.w[:-1] if self.spec.bias else self.w

    def decision_function(self, X):
        """Linear ``X w + b`` or kernel ``sum_i a_i y_i K(X_i, x) + b``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.spec.kernel == "rbf":
            if X.shape[1] != self.basis.shape[1]:
                raise DimensionMismatch(
                    f"model expects {self.basis.shape[1]} features, got {X.shape[1]}")
            K = rbf_kernel(X, self.basis, self.spec.width)
            return K @ (self.basis_labels * self.coef) + self.bias
        if X.shape[1] != self.coef.shape[0]:
            raise DimensionMismatch(
                f"model expects {self.coef.shape[0]} features, got {X.shape[1]}")
        return X @ self.coef + self.bias

    def predict(self, X):
        """Labels in {-1, +1}; a zero decision value maps to +1."""
        return np.where(self.decision_function(X) >= 0.0, 1.0, -1.0)


def nesterov_step(state, ev, config):
    """Advance ``state`` by one accelerated step using ``ev`` taken at ``state.w``."""
    if not ev.lipschitz > 0:
        raise InputError("Lipschitz constant must be positive")
    k = state.k
    g = ev.gradient
    w_star = (np.zeros_like(state.w) if config.w_star is None
              else np.asarray(config.w_star, dtype=np.float64))
    y = state.w - g / ev.lipschitz
    accum = state.grad_accum + (0.5 * (k + 1)) * g
    z = w_star - accum / ev.lipschitz
    w = (2.0 / (k + 3)) * z + ((k + 1) / (k + 3)) * y
    if not np.isfinite(w).all():
        raise NonFiniteIterate(
            f"non-finite iterate at k={k}; check the Lipschitz constant")
    return SolverState(k + 1, w, accum, y, z, state.f_history)


def _initial(config, q, name):
    v = getattr(config, name)
    if v is None:
        return np.zeros(q)
    v = np.array(v, dtype=np.float64)
    if v.shape != (q,):
        raise DimensionMismatch(f"{name} has shape {v.shape}, expected ({q},)")
    return v


def _kernel_basis(data, spec):
    if spec.kernel == "rbf":
        return data.X, data.y
    return None, None


def solve(d, spec, config=None, counter=None):
    """Minimize the smoothed objective of ``spec`` on ``d``.

    ``d`` may be a raw :class:`~smoothsvm.data.Dataset`; it is kernelized
    and bias-augmented as ``spec`` requires.  Hitting ``max_iter`` is not an
    error: the returned model has ``converged=False``.
    """
    config = config or SolverConfig()
    data = prepare_data(d, spec)
    if spec.kernel == "rbf" and spec.width is None:
        spec = replace(spec, width=data.width)
    counter = counter if counter is not None else MatvecCounter()
    obj = Objective(data, spec, counter)
    q = obj.q
    w = _initial(config, q, "w0")
    config = replace(config, w_star=_initial(config, q, "w_star"))

    trace = None
    if config.record_history:
        trace = Trace()
        probe = copy.copy(obj)
        probe.counter = MatvecCounter()

    state = SolverState(0, w, np.zeros(q))
    f, cache = obj.partial(w)
    state.f_history.append(f)
    if trace is not None:
        trace.objective.append(f)
        trace.iterates.append(w.copy())
    converged = False
    for _ in range(int(config.max_iter)):
        ev = ObjectiveEval(f, obj.gradient(cache), obj.lipschitz)
        state = nesterov_step(state, ev, config)
        f_next, cache = obj.partial(state.w)
        if not np.isfinite(f_next):
            raise NonFiniteIterate(f"objective became {f_next} at k={state.k}")
        state.f_history.append(f_next)
        if trace is not None:
            trace.objective.append(f_next)
            trace.objective_y.append(probe.value(state.y))
            trace.iterates.append(state.w.copy())
            trace.y.append(state.y)
            trace.z.append(state.z)
            trace.grad_accum.append(state.grad_accum)
        done = abs(f_next - f) < config.epsilon
        f = f_next
        if done:
            converged = True
            break
    if not converged:
        logger.warning("no convergence after %d iterations (|dF| >= %g)",
                       state.k, config.epsilon)
    basis, labels = _kernel_basis(data, spec)
    return TrainedModel(state.w, spec, state.k, f, converged, obj.lipschitz,
                        counter.count, trace, None, basis, labels)


def homotopy_schedule(mu0, mu_star):
    """Smoothing parameters ``mu0 / (t + 1)`` for ``t = 0, 1, ...``.

    The schedule ends with the first value at or below ``mu_star``; that
    last value is replaced by ``mu_star`` itself so the final stage always
    solves the target problem.
    """
    if not mu0 >= mu_star > 0:
        raise InputError(f"need mu0 >= mu_star > 0, got {mu0!r}, {mu_star!r}")
    mus = []
    t = 0
    while True:
        mu = mu0 / (t + 1)
        if mu <= mu_star * (1.0 + 1e-12):
            mus.append(float(mu_star))
            return mus
        mus.append(mu)
        t += 1


def solve_homotopy(d, spec, config=None, mu0=5.0, mu_star=None,
                   stage_tolerance_factor=10.0, nu0=None):
    """Continuation on the smoothing parameter with warm starts.

    Each stage solves at the next value of :func:`homotopy_schedule`,
    starting from (and using as prox-center) the previous stage's solution.
    Intermediate stages stop at ``stage_tolerance_factor * epsilon``; the
    last at ``epsilon``.  For LP-SVM the l1 parameter follows the same
    ``1 / (t + 1)`` decay from ``nu0`` (default ``spec.nu``).
    """
    if spec.variant == LSSVM:
        raise InputError("LS-SVM has no smoothing parameter to continue on")
    config = config or SolverConfig()
    if mu_star is None:
        mu_star = spec.mu
    schedule = homotopy_schedule(mu0, mu_star)
    if nu0 is None:
        nu0 = spec.nu
    data = prepare_data(d, spec)
    counter = MatvecCounter()
    stage_config = config
    stages = []
    total = 0
    model = None
    for t, mu in enumerate(schedule):
        last = t == len(schedule) - 1
        nu = None if nu0 is None else nu0 * mu / mu0
        stage_spec = spec.with_smoothing(mu, nu)
        eps = config.epsilon * (1.0 if last else stage_tolerance_factor)
        stage_config = replace(stage_config, epsilon=eps)
        model = solve(data, stage_spec, stage_config, counter)
        total += model.iterations
        stages.append(StageReport(mu, nu, eps, model.iterations,
                                  model.final_objective, model.converged))
        logger.debug("homotopy stage %d: mu=%g iterations=%d F=%.6g",
                     t, mu, model.iterations, model.final_objective)
        stage_config = replace(stage_config, w0=model.w, w_star=model.w)
    model.iterations = total
    model.stages = stages
    model.matvecs = counter.count
    return model
