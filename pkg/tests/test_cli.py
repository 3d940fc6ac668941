import csv
import json

import numpy as np
import pytest

from smoothsvm import modelfile
from smoothsvm.cli import main
from smoothsvm.io import parse_svmlight
from smoothsvm.bench import load_xy

TOY = "+1 1:2 2:1\n+1 1:1 2:2\n-1 1:-1 2:-2\n-1 1:-2 2:-0.5\n"


@pytest.fixture
def toy(tmp_path):
    path = tmp_path / "toy.svm"
    path.write_text(TOY)
    return path


def test_train_separable_toy(toy, tmp_path, capsys):
    model, report = tmp_path / "m.json", tmp_path / "r.json"
    assert main(["train", "--data", str(toy), "--out", str(model),
                 "--report", str(report)]) == 0
    rep = json.loads(report.read_text())
    assert rep["converged"] is True and rep["train_accuracy"] == 1.0
    assert rep["spec"]["mu"] == 5.0 and rep["solver"]["epsilon"] == 1e-3
    assert "train_accuracy=1.0000" in capsys.readouterr().out


def test_extreme_c_values_complete(toy, tmp_path):
    for c in ("0.001", "1000"):
        report = tmp_path / f"r{c}.json"
        assert main(["train", "--data", str(toy), "--c", c, "--report", str(report)]) == 0
        assert json.loads(report.read_text())["spec"]["C"] == float(c)


def test_homotopy_report_lists_stages(toy, tmp_path):
    report = tmp_path / "r.json"
    main(["train", "--data", str(toy), "--homotopy", "5:0.5", "--report", str(report)])
    mus = [s["mu"] for s in json.loads(report.read_text())["homotopy"]]
    assert mus[:6] == pytest.approx([5, 2.5, 5 / 3, 1.25, 1, 5 / 6])
    assert mus[-1] == 0.5 and all(m > 0.5 for m in mus[:-1])


def test_predict_round_trip(toy, tmp_path, capsys):
    model, preds = tmp_path / "m.json", tmp_path / "p.txt"
    main(["train", "--data", str(toy), "--bias", "on", "--out", str(model)])
    capsys.readouterr()
    assert main(["predict", "--model", str(model), "--data", str(toy),
                 "--out", str(preds)]) == 0
    assert preds.read_text().split() == ["+1", "+1", "-1", "-1"]
    assert "accuracy=1.0000" in capsys.readouterr().err


def test_model_file_round_trip_predictions(toy, tmp_path):
    path = tmp_path / "m.json"
    main(["train", "--data", str(toy), "--kernel", "rbf", "--c", "10", "--out", str(path)])
    model, scaling = modelfile.load(path)
    again = modelfile.loads(modelfile.dumps(model, scaling))[0]
    X = np.random.default_rng(0).normal(size=(20, 2))
    np.testing.assert_array_equal(model.decision_function(X), again.decision_function(X))
    assert model.spec.width == 2.0


def test_scaling_is_stored_and_applied(toy, tmp_path, capsys):
    path = tmp_path / "m.json"
    main(["train", "--data", str(toy), "--scale", "minmax", "--bias", "on", "--out", str(path)])
    _, scaling = modelfile.load(path)
    np.testing.assert_array_equal(scaling.low, [-2.0, -2.0])
    capsys.readouterr()
    main(["predict", "--model", str(path), "--data", str(toy)])
    assert capsys.readouterr().out.split() == ["+1", "+1", "-1", "-1"]


def test_predict_ignores_unseen_trailing_features(toy, tmp_path, capsys):
    path, wide = tmp_path / "m.json", tmp_path / "wide.svm"
    main(["train", "--data", str(toy), "--out", str(path)])
    wide.write_text("+1 1:2 2:1 3:5\n")
    capsys.readouterr()
    assert main(["predict", "--model", str(path), "--data", str(wide)]) == 0
    assert capsys.readouterr().out.split() == ["+1"]


def test_exit_code_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.svm"
    bad.write_text("+1 1:1\n2 1:1\n")
    assert main(["train", "--data", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["train", "--data", str(tmp_path / "missing.svm")]) == 2
    assert main(["train", "--data", str(bad).replace("bad", "x"), "--model", "lpsvm"]) == 2


def test_exit_code_not_converged(toy):
    assert main(["train", "--data", str(toy), "--eps", "1e-15", "--max-iter", "2",
                 "--mu", "0.01"]) == 3


def test_lpsvm_requires_nu(toy, capsys):
    assert main(["train", "--data", str(toy), "--model", "lpsvm"]) == 2
    assert main(["train", "--data", str(toy), "--model", "lpsvm", "--nu", "0.1"]) == 0


def test_verify_flag(toy, capsys):
    assert main(["train", "--data", str(toy), "--verify", "--mu", "50"]) == 0
    assert "gradient check" in capsys.readouterr().out


def _sweep(toy, tmp_path, name, *extra):
    out = tmp_path / name
    assert main(["sweep", "--data", str(toy), "--out", str(out), *extra]) == 0
    with open(out, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sweep_default_grid(toy, tmp_path):
    rows = _sweep(toy, tmp_path, "s.csv", "--repeats", "2")
    assert [float(r["c"]) for r in rows] == [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3]
    assert list(rows[0]) == ["solver", "c", "n", "mean_time", "std_time",
                             "mean_iters", "accuracy"]


def test_sweep_single_repeat_has_zero_std(toy, tmp_path):
    rows = _sweep(toy, tmp_path, "s.csv", "--repeats", "1", "--c-grid", "1,10")
    assert [r["std_time"] for r in rows] == ["0", "0"]


def test_sweep_deterministic_apart_from_time(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(60, 3))
    y = np.where(X[:, 0] + 0.3 * rng.normal(size=60) > 0, "+1", "-1")
    data = tmp_path / "d.svm"
    data.write_text("".join(f"{lab} " + " ".join(f"{j + 1}:{float(v)!r}" for j, v in enumerate(row)) + "\n"
                            for lab, row in zip(y, X)))
    args = ("--repeats", "2", "--c-grid", "0.1,1", "--sizes", "20,40", "--baseline",
            "--baseline-iters", "50", "--jobs", "2")
    a = _sweep(data, tmp_path, "a.csv", *args)
    b = _sweep(data, tmp_path, "b.csv", *args)
    keep = ("solver", "c", "n", "mean_iters", "accuracy")
    assert [[r[k] for k in keep] for r in a] == [[r[k] for k in keep] for r in b]
    assert [(r["solver"], r["n"]) for r in a][:2] == [("smoothed", "20"), ("smoothed", "20")]
    assert len(a) == 8


def test_sweep_rejects_oversized_subset(toy, tmp_path):
    assert main(["sweep", "--data", str(toy), "--sizes", "10",
                 "--out", str(tmp_path / "s.csv")]) == 2


def test_train_holdout(tmp_path, capsys):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(50, 2))
    lines = [("+1" if x[0] > 0 else "-1") + f" 1:{float(x[0])!r} 2:{float(x[1])!r}" for x in X]
    data = tmp_path / "d.svm"
    data.write_text("\n".join(lines) + "\n")
    report = tmp_path / "r.json"
    assert main(["train", "--data", str(data), "--holdout", "0.3", "--seed", "3",
                 "--report", str(report)]) == 0
    rep = json.loads(report.read_text())
    assert rep["n_train"] == 35 and rep["accuracy"] is not None


def test_load_xy_helper():
    X, y = load_xy(parse_svmlight(TOY))
    assert X.shape == (4, 2) and y.tolist() == [1, 1, -1, -1]
