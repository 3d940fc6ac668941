"""Command line: ``smoothsvm {train,predict,sweep}``.

Exit status is 0 on success, 2 on bad input and 3 when training stopped at
``--max-iter`` without meeting the tolerance.
"""

import argparse
import logging
import sys

import numpy as np

from . import bench, modelfile
from .data import dataset_from_arrays
from .errors import SmoothSVMError
from .io import apply_scaling, fit_scaling, load_svmlight, split
from .models import VARIANTS, ModelSpec, Objective, prepare_data
from .oracle import gradient_check, kink_free
from .solver import SolverConfig

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 2, 3

_SCALING = {"none": "none", "minmax": "minmax_per_feature",
            "unit_l2": "unit_l2_per_sample"}

logger = logging.getLogger("smoothsvm")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}")


def _homotopy(text):
    if text == "off":
        return None
    try:
        mu0, mu_star = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'off' or 'MU0:MUSTAR'")
    return mu0, mu_star


def _model_args(p):
    p.add_argument("--data", required=True, help="training file (LIBSVM format, .gz ok)")
    p.add_argument("--test", help="optional held-out file for accuracy")
    p.add_argument("--model", choices=VARIANTS, default="csvm")
    p.add_argument("--mu", type=float, default=5.0, help="hinge smoothing")
    p.add_argument("--nu", type=float, help="l1 smoothing (lpsvm)")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--kernel", choices=("linear", "rbf"), default="linear")
    p.add_argument("--width", type=float, help="RBF width (default: #features)")
    p.add_argument("--bias", choices=("on", "off"), default="off")
    p.add_argument("--lipschitz", choices=("row_max", "strict"), default="row_max")
    p.add_argument("--scale", choices=tuple(_SCALING), default="none")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="smoothsvm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="fit a model")
    _model_args(tr)
    tr.add_argument("--c", type=float, default=1.0)
    tr.add_argument("--homotopy", type=_homotopy, default=None,
                    help="'off' or 'MU0:MUSTAR'")
    tr.add_argument("--holdout", type=float,
                    help="hold out this fraction of --data (seeded by --seed)")
    tr.add_argument("--out", help="model file to write")
    tr.add_argument("--report", help="JSON run report to write")
    tr.add_argument("--verify", action="store_true",
                    help="finite-difference gradient check on the training data")

    pr = sub.add_parser("predict", help="label a data file")
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--out", help="write one +1/-1 per line here")

    sw = sub.add_parser("sweep", help="time training over C values / sizes")
    _model_args(sw)
    sw.add_argument("--c-grid", type=_float_list,
                    default=list(bench.DEFAULT_C_GRID))
    sw.add_argument("--sizes", type=_int_list)
    sw.add_argument("--repeats", type=int, default=10)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--baseline", action="store_true",
                    help="add subgradient-descent rows")
    sw.add_argument("--baseline-iters", type=int, default=1000)
    sw.add_argument("--out", required=True, help="CSV file")
    return parser


def _spec(args, C):
    return ModelSpec(variant=args.model, C=C, kernel=args.kernel,
                     width=args.width, bias=args.bias == "on", mu=args.mu,
                     nu=args.nu, lipschitz=args.lipschitz)


def _verify(d, spec, w):
    data = prepare_data(d, spec)
    obj = Objective(data, spec)
    rng = np.random.default_rng(0)
    worst, checked = 0.0, 0
    for point in [w] + [rng.normal(size=obj.q) for _ in range(5)]:
        if kink_free(data, spec, point):
            worst = max(worst, gradient_check(obj, point))
            checked += 1
    print(f"gradient check: {checked} points, max relative error {worst:.3e}")
    return worst


def cmd_train(args):
    records = load_svmlight(args.data)
    test_records = load_svmlight(args.test) if args.test else None
    if args.holdout:
        records, held = split(records, 1.0 - args.holdout, args.seed)
        test_records = test_records or held
    width = bench.common_width(records, test_records)
    X, y = bench.load_xy(records, width)
    scaling = fit_scaling(X, _SCALING[args.scale])
    d = dataset_from_arrays(apply_scaling(X, scaling), y,
                            allow_zero_rows=args.kernel == "rbf")
    test = None
    if test_records:
        test = bench.load_xy(test_records, d.n_features, scaling)
    spec = _spec(args, args.c)
    config = SolverConfig(epsilon=args.eps, max_iter=args.max_iter)
    if args.homotopy is not None:
        spec = spec.with_smoothing(args.homotopy[1])
    model, seconds = bench.train(d, spec, config, args.homotopy)
    report = bench.make_report(model, seconds, model.spec, config, d, test)
    if args.verify:
        _verify(d, model.spec, model.w)
    if args.out:
        modelfile.save(args.out, model, scaling)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    print(f"iterations={model.iterations} converged={model.converged} "
          f"objective={model.final_objective:.10g} time={seconds:.3f}s "
          f"train_accuracy={report.train_accuracy:.4f}"
          + (f" accuracy={report.accuracy:.4f}" if test else ""))
    return EXIT_OK if model.converged else EXIT_NOT_CONVERGED


def cmd_predict(args):
    model, scaling = modelfile.load(args.model)
    records = load_svmlight(args.data)
    n_features = (model.basis.shape[1] if model.basis is not None
                  else model.coef.shape[0])
    X, y = bench.load_xy(records)
    X = apply_scaling(bench.fit_width(X, n_features), scaling)
    pred = model.predict(X)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.writelines("+1\n" if p > 0 else "-1\n" for p in pred)
    else:
        sys.stdout.writelines("+1\n" if p > 0 else "-1\n" for p in pred)
    print(f"accuracy={np.mean(pred == y):.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args):
    records = load_svmlight(args.data)
    test_records = load_svmlight(args.test) if args.test else None
    width = bench.common_width(records, test_records)
    X, y = bench.load_xy(records, width)
    scaling = fit_scaling(X, _SCALING[args.scale])
    X = apply_scaling(X, scaling)
    test = None
    if test_records:
        test = bench.load_xy(test_records, width, scaling)
    spec = _spec(args, 1.0)
    config = SolverConfig(epsilon=args.eps, max_iter=args.max_iter)
    rows = bench.sweep(X, y, spec, args.c_grid, args.sizes, args.repeats,
                       config, test, args.seed, args.jobs, args.baseline,
                       args.baseline_iters)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        bench.write_sweep_csv(rows, fh)
    return EXIT_OK


COMMANDS = {"train": cmd_train, "predict": cmd_predict, "sweep": cmd_sweep}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (SmoothSVMError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
