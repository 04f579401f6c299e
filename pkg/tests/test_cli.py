"""Command-line harness: subcommands, artifacts, exit codes, determinism."""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

from graphseg import PointCloud, csv_write
from graphseg.cli import BENCHMARK_HEADER, main


def write_config(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def moons_config(tmp_path, out, **overrides):
    cfg = {
        "dataset": {"kind": "moons", "classes": 2, "per_class": 40,
                    "noise_sd": 0.12, "seed": 5},
        "graph": {"kind": "knn", "k": 8},
        "learner": "laplace",
        "labels_per_class": [3],
        "trials": 1,
        "seed": 11,
        "out": str(tmp_path / out),
    }
    cfg.update(overrides)
    return cfg


# ---------------------------------------------------------------- generate


def test_generate_writes_csv(tmp_path, capsys):
    cfg = {
        "dataset": {"kind": "moons", "classes": 3, "per_class": 300, "seed": 2},
        "out": str(tmp_path / "gen"),
    }
    rc = main(["generate", "--config", write_config(tmp_path, "g.json", cfg)])
    assert rc == 0
    lines = (tmp_path / "gen" / "points.csv").read_text().splitlines()
    assert lines[0] == "x_0,x_1,label"
    assert len(lines) == 901  # header plus 900 rows


def test_generate_deterministic_bytes(tmp_path):
    cfg = {
        "dataset": {"kind": "moons", "classes": 2, "per_class": 50,
                    "noise_sd": 0.1, "seed": 9},
    }
    cfg["out"] = str(tmp_path / "a")
    main(["generate", "--config", write_config(tmp_path, "a.json", cfg)])
    cfg["out"] = str(tmp_path / "b")
    main(["generate", "--config", write_config(tmp_path, "b.json", cfg)])
    assert (tmp_path / "a" / "points.csv").read_bytes() == (
        tmp_path / "b" / "points.csv"
    ).read_bytes()


def test_generate_invalid_class_count(tmp_path, capsys):
    cfg = {"dataset": {"kind": "moons", "classes": 1, "per_class": 10},
           "out": str(tmp_path / "x")}
    rc = main(["generate", "--config", write_config(tmp_path, "bad.json", cfg)])
    assert rc == 2
    assert "error" in capsys.readouterr().err


# --------------------------------------------------------------------- run


def test_run_writes_predictions_and_svg(tmp_path, capsys):
    cfg = moons_config(tmp_path, "run1", learner="segregation", svg=True)
    rc = main(["run", "--config", write_config(tmp_path, "r.json", cfg)])
    assert rc == 0
    out_dir = tmp_path / "run1"
    lines = (out_dir / "predictions.csv").read_text().splitlines()
    assert lines[0] == "x_0,x_1,label,predicted"
    assert len(lines) == 81
    svgs = list(out_dir.glob("*.svg"))
    assert len(svgs) == 1
    text = svgs[0].read_text()
    assert text.startswith("<svg")
    captured = capsys.readouterr().out
    assert "accuracy=" in captured


def test_run_disconnected_graph_exit_2(tmp_path, capsys):
    pts = np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1],
                    [50.0, 0.0], [50.1, 0.0], [50.0, 0.1]])
    cpath = tmp_path / "far.csv"
    csv_write(cpath, PointCloud(pts, np.array([0, 0, 0, 1, 1, 1])))
    cfg = {"dataset": {"kind": "csv", "path": str(cpath)},
           "graph": {"kind": "knn", "k": 1, "sigma": 1.0},
           "learner": "laplace", "labels_per_class": [1],
           "seed": 0, "out": str(tmp_path / "d")}
    rc = main(["run", "--config", write_config(tmp_path, "d.json", cfg)])
    assert rc == 2
    assert "increase k" in capsys.readouterr().err


def test_run_single_class_dataset_rejected(tmp_path, capsys):
    pts = np.random.default_rng(0).standard_normal((12, 2))
    cpath = tmp_path / "mono.csv"
    csv_write(cpath, PointCloud(pts, np.zeros(12, dtype=int)))
    cfg = {"dataset": {"kind": "csv", "path": str(cpath)},
           "graph": {"kind": "knn", "k": 4}, "learner": "laplace",
           "labels_per_class": [2], "seed": 0, "out": str(tmp_path / "m")}
    rc = main(["run", "--config", write_config(tmp_path, "m.json", cfg)])
    assert rc == 2


def test_run_nonconvergence_exit_4(tmp_path, capsys):
    cfg = moons_config(
        tmp_path, "nc", learner="segregation",
        learner_params={"segregation": {"max_iter": 1, "tol": 1e-12}})
    rc = main(["run", "--config", write_config(tmp_path, "nc.json", cfg)])
    assert rc == 4


# --------------------------------------------------------------- benchmark


def test_benchmark_table_shape_and_determinism(tmp_path):
    cfg = moons_config(tmp_path, "benchA", trials=2,
                       labels_per_class=[2, 3, 5])
    cfg.pop("learner")
    cfg["learners"] = ["laplace", "poisson", "segregation"]
    # default damped Jacobi would need more than the 10 n sweep cap here
    cfg["learner_params"] = {"poisson": {"method": "conjugate_gradient"}}
    rc = main(["benchmark", "--config", write_config(tmp_path, "bA.json", cfg)])
    assert rc == 0
    lines = (tmp_path / "benchA" / "benchmark.csv").read_text().splitlines()
    assert lines[0] == BENCHMARK_HEADER
    assert len(lines) == 10  # header plus 3 learners x 3 label counts

    cfg["out"] = str(tmp_path / "benchB")
    main(["benchmark", "--config", write_config(tmp_path, "bB.json", cfg)])
    assert (tmp_path / "benchA" / "benchmark.csv").read_bytes() == (
        tmp_path / "benchB" / "benchmark.csv"
    ).read_bytes()


def test_benchmark_values_parse_as_floats(tmp_path):
    cfg = moons_config(tmp_path, "benchC", trials=2)
    cfg.pop("learner")
    cfg["learners"] = ["laplace"]
    main(["benchmark", "--config", write_config(tmp_path, "bC.json", cfg)])
    rows = (tmp_path / "benchC" / "benchmark.csv").read_text().splitlines()[1:]
    for row in rows:
        name, m, mean_acc, sd_acc, trials = row.split(",")
        assert 0.0 <= float(mean_acc) <= 1.0
        assert float(sd_acc) >= 0.0
        assert "np" not in mean_acc and "np" not in sd_acc


def test_benchmark_single_trial_matches_run(tmp_path, capsys):
    # one benchmark trial draws the same labeled set as cmd_run with the
    # same master seed, so the accuracies agree exactly
    run_cfg = moons_config(tmp_path, "rr", noise_override=None)
    run_cfg["dataset"]["noise_sd"] = 0.25  # noisy enough that accuracy < 1
    rc = main(["run", "--config", write_config(tmp_path, "rr.json", run_cfg)])
    assert rc == 0
    out = capsys.readouterr().out
    run_acc = float(re.search(r"accuracy=([0-9.]+)", out).group(1))

    bench_cfg = dict(run_cfg)
    bench_cfg.pop("learner")
    bench_cfg.pop("noise_override", None)
    bench_cfg["learners"] = ["laplace"]
    bench_cfg["out"] = str(tmp_path / "bb")
    main(["benchmark", "--config", write_config(tmp_path, "bb.json", bench_cfg)])
    row = (tmp_path / "bb" / "benchmark.csv").read_text().splitlines()[1]
    bench_acc = float(row.split(",")[2])
    assert bench_acc == pytest.approx(run_acc, abs=5e-5)  # run prints 4 decimals


# ------------------------------------------------------------ verify, misc


def test_verify_subcommand_passes(capsys):
    rc = main(["verify"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "FAIL" not in out


def test_malformed_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == 2


def test_missing_config_exit_2(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 2


def test_missing_dataset_file_exit_3(tmp_path):
    cfg = {"dataset": {"kind": "csv", "path": str(tmp_path / "nope.csv")},
           "graph": {"kind": "knn", "k": 5}, "learner": "laplace",
           "labels_per_class": [2], "seed": 0, "out": str(tmp_path / "o")}
    assert main(["run", "--config", write_config(tmp_path, "c.json", cfg)]) == 3


def test_unknown_learner_rejected(tmp_path, capsys):
    cfg = moons_config(tmp_path, "u")
    cfg["learner"] = "svm"
    assert main(["run", "--config", write_config(tmp_path, "u.json", cfg)]) == 2


def test_flag_overrides_config(tmp_path, capsys):
    cfg = moons_config(tmp_path, "fo", learner="laplace")
    cfg["learner_params"] = {"poisson": {"method": "conjugate_gradient"}}
    rc = main(["run", "--config", write_config(tmp_path, "fo.json", cfg),
               "--learner", "poisson"])
    assert rc == 0
    assert "learner=poisson" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    cfg = moons_config(tmp_path, "mod")
    path = write_config(tmp_path, "mod.json", cfg)
    proc = subprocess.run(
        [sys.executable, "-m", "graphseg.cli", "run", "--config", path],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "accuracy=" in proc.stdout
