"""Training runs, reports and the C / training-size sweep harness."""

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .data import dataset_from_arrays
from .errors import InputError
from .io import apply_scaling, densify
from .models import LSSVM, prepare_data
from .oracle import subgradient_reference
from .solver import SolverConfig, TrainedModel, solve, solve_homotopy

logger = logging.getLogger(__name__)

__all__ = ["common_width", "fit_width", "load_xy", "DEFAULT_C_GRID", "ADULT_SIZES", "RunReport", "train",
           "accuracy", "sweep", "write_sweep_csv", "SWEEP_COLUMNS"]

DEFAULT_C_GRID = (1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3)
# training-set sizes of the six census-income subsets
ADULT_SIZES = (1605, 2265, 3185, 4781, 6414, 11220)
SWEEP_COLUMNS = ("solver", "c", "n", "mean_time", "std_time", "mean_iters",
                 "accuracy")


@dataclass
class RunReport:
    spec: dict
    solver: dict
    wall_time_seconds: float
    iterations: int
    final_objective: float
    converged: bool
    n_train: int
    train_accuracy: float = None
    accuracy: float = None
    homotopy: list = field(default_factory=list)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"


def accuracy(model, X, y):
    return float(np.mean(model.predict(X) == y))


def train(d, spec, config=None, homotopy=None):
    """Fit ``spec`` on ``d``; returns ``(model, seconds)``.

    ``homotopy`` is ``None`` or a ``(mu0, mu_star)`` pair.  Only the solver
    call is timed.
    """
    config = config or SolverConfig()
    data = prepare_data(d, spec)
    start = time.perf_counter()
    if homotopy is None:
        model = solve(data, spec, config)
    else:
        mu0, mu_star = homotopy
        model = solve_homotopy(data, spec, config, mu0, mu_star)
    return model, time.perf_counter() - start


def make_report(model, seconds, spec, config, d, test=None):
    solver = {"epsilon": config.epsilon, "max_iter": int(config.max_iter)}
    report = RunReport(
        spec=asdict(spec), solver=solver, wall_time_seconds=seconds,
        iterations=int(model.iterations),
        final_objective=float(model.final_objective),
        converged=bool(model.converged), n_train=int(d.n_samples),
        train_accuracy=accuracy(model, d.X, d.y))
    if test is not None:
        report.accuracy = accuracy(model, *test)
    if model.stages:
        report.homotopy = [asdict(s) for s in model.stages]
    return report


def _subgradient_run(d, spec, iterations):
    if spec.variant == LSSVM:
        raise InputError("the subgradient baseline needs a hinge-loss variant")
    data = prepare_data(d, spec)
    start = time.perf_counter()
    w, _ = subgradient_reference(data, spec, iterations)
    seconds = time.perf_counter() - start
    basis = data.X if spec.kernel == "rbf" else None
    labels = data.y if spec.kernel == "rbf" else None
    model = TrainedModel(w, spec, iterations, float("nan"), True,
                         basis=basis, basis_labels=labels)
    if spec.kernel == "rbf" and spec.width is None:
        model.spec = replace(spec, width=data.width)
    return model, seconds


def _subsample(X, y, size, seed):
    n = X.shape[0]
    if size > n:
        raise InputError(f"requested {size} training samples, only {n} available")
    order = np.random.default_rng(seed).permutation(n)
    return order[:size], order[size:]


def _cells(c_grid, sizes, repeats, baseline):
    solvers = ("smoothed", "subgradient") if baseline else ("smoothed",)
    return [(s, n, c, r) for s in solvers for n in sizes for c in c_grid
            for r in range(repeats)]


def _run_order(cells):
    # repeat-major: slow drifts in machine speed hit every C value alike
    # instead of whichever cell happens to be running
    return sorted(range(len(cells)), key=lambda i: (cells[i][3], i))


def sweep(X, y, spec, c_grid=DEFAULT_C_GRID, sizes=None, repeats=10,
          config=None, test=None, seed=0, jobs=1, baseline=False,
          baseline_iterations=1000):
    """Time training over a grid of C values and training-set sizes.

    With ``sizes`` the training set is subsampled with a seeded
    permutation; without an explicit ``test`` set the held-out remainder
    is used for accuracy.  Returns one row per (solver, n, C) with the
    mean / population std of the solve time, mean iterations and accuracy.
    Cells are independent and may run on ``jobs`` threads; results are
    merged in cell order.  Repeats are interleaved across cells.  One untimed solve per training set runs first so
    that cold caches and lazy library initialization do not land on
    whichever cell happens to be timed first.
    """
    if not c_grid:
        raise InputError("C grid is empty")
    if repeats < 1:
        raise InputError("repeats must be at least 1")
    config = config or SolverConfig()
    n_all = X.shape[0]
    subsample = bool(sizes)
    sizes = [int(s) for s in sizes] if subsample else [n_all]

    splits = {}
    for size in sizes:
        if subsample:
            tr, te = _subsample(X, y, size, seed)
        else:
            tr, te = np.arange(n_all), np.array([], dtype=int)
        d = dataset_from_arrays(X[tr], y[tr],
                                allow_zero_rows=spec.kernel == "rbf")
        if test is not None:
            evald = test
        elif te.size:
            evald = (X[te], y[te])
        else:
            evald = (d.X, d.y)
        splits[size] = (d, evald)

    def run(cell):
        solver_name, size, c, _ = cell
        d = splits[size][0]
        cspec = replace(spec, C=float(c))
        if solver_name == "smoothed":
            return train(d, cspec, config)
        return _subgradient_run(d, cspec, baseline_iterations)

    for d, _ in splits.values():
        train(d, replace(spec, C=float(c_grid[0])), config)

    # time everything first; scoring against a large test set between
    # solves would evict the training matrix and bill the next solve for it
    cells = _cells(list(c_grid), sizes, repeats, baseline)
    order = _run_order(cells)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(run, [cells[i] for i in order]))
    else:
        done = [run(cells[i]) for i in order]
    results = [None] * len(cells)
    for i, r in zip(order, done):
        results[i] = r

    rows = []
    for start in range(0, len(cells), repeats):
        solver_name, size, c, _ = cells[start]
        chunk = results[start:start + repeats]
        times = np.array([r[1] for r in chunk])
        Xe, ye = splits[size][1]
        rows.append({
            "solver": solver_name, "c": float(c), "n": int(size),
            "mean_time": float(times.mean()), "std_time": float(times.std()),
            "mean_iters": float(np.mean([r[0].iterations for r in chunk])),
            "accuracy": accuracy(chunk[0][0], Xe, ye),
        })
    return rows


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_sweep_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in SWEEP_COLUMNS])


def load_xy(records, n_features=None, scaling=None):
    X, y = densify(records, n_features)
    if scaling is not None:
        X = apply_scaling(X, scaling)
    return X, y


def common_width(*record_sets):
    """Largest feature index over several record lists.

    Sparse files often leave rare features out of the training file, so the
    training and test matrices are densified to a shared width.
    """
    return max((r.max_index for recs in record_sets if recs for r in recs),
               default=0)


def fit_width(X, n_features):
    """Pad with zero columns or drop trailing columns to ``n_features``.

    Dropped columns had no training support, so their weights would be zero.
    """
    p = X.shape[1]
    if p > n_features:
        if np.any(X[:, n_features:]):
            logger.warning("ignoring %d feature(s) unseen in training",
                           p - n_features)
        return X[:, :n_features]
    if p < n_features:
        return np.hstack([X, np.zeros((X.shape[0], n_features - p))])
    return X
