"""Command-line harness: dataset generation, single runs, benchmarks, checks.

Subcommands
-----------
generate   build a dataset and write it as a point-cloud CSV
run        solve one trial with one learner; write predictions (CSV/SVG)
benchmark  mean/sd accuracy over repeated trials; write a CSV table
verify     run the numerical verification suite on built-in fixtures

Configuration comes from a JSON file (``--config``); individual flags
override the file.  Exit codes: 0 success, 2 configuration or parameter
error (including graphs that come out disconnected), 3 data format error,
4 non-convergence or verification failure.

Benchmark output is bitwise reproducible for a fixed configuration and
master seed: trial t draws its labeled set from the stream seeded by
``(seed, t)``, independent of execution order.  Reported accuracy always
excludes the labeled vertices.  Class indices are zero-based internally;
human-facing summaries print them one-based.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .build import PointCloud, gaussian_weights, knn_graph
from .datasets import csv_read, csv_write, load_idx_pair, subset_by_class, trial_split
from .estimators import (GradientProjectionLearning, LaplaceLearning,
                         PenalizedLearning, PoissonLearning,
                         SegregationLearning, transductive_accuracy)
from .exceptions import ConfigError, DataFormatError
from .plot import svg_scatter

LEARNERS = {
    "laplace": LaplaceLearning,
    "poisson": PoissonLearning,
    "segregation": SegregationLearning,
    "gradproj": GradientProjectionLearning,
    "penalize": PenalizedLearning,
}

BENCHMARK_HEADER = "learner,labels_per_class,mean_acc,sd_acc,trials"


@dataclass
class TrialOutcome:
    """One solved trial of a benchmark."""

    trial: int
    labels_per_class: int
    learner: str
    accuracy: float
    iterations: int
    wall_time: float


def _load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _merge_flags(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    if args.learner is not None:
        cfg["learner"] = args.learner
    if args.labels_per_class is not None:
        cfg["labels_per_class"] = args.labels_per_class
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.svg:
        cfg["svg"] = True
    cfg.setdefault("seed", 0)
    cfg.setdefault("out", "results")
    return cfg


def _build_dataset(cfg: dict) -> PointCloud:
    spec = cfg.get("dataset")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("config needs a dataset object with a 'kind'")
    kind = spec["kind"]
    if kind == "moons":
        from .datasets import make_moons
        return make_moons(classes=int(spec.get("classes", 2)),
                          per_class=int(spec.get("per_class", 200)),
                          noise_sd=float(spec.get("noise_sd", 0.1)),
                          seed=int(spec.get("seed", cfg.get("seed", 0))))
    if kind == "csv":
        if "path" not in spec:
            raise ConfigError("csv dataset needs a 'path'")
        return csv_read(spec["path"])
    if kind == "idx":
        for key in ("images", "labels"):
            if key not in spec:
                raise ConfigError(f"idx dataset needs '{key}'")
        X, y = load_idx_pair(spec["images"], spec["labels"])
        wanted = spec.get("classes")
        if wanted is not None:
            keep = np.isin(y, np.asarray(wanted))
            X, y = X[keep], y[keep]
            if X.shape[0] == 0:
                raise ConfigError(f"no samples with classes {wanted}")
        per_class = spec.get("per_class")
        if per_class is not None:
            classes = np.unique(y)
            idx = subset_by_class(y, classes, int(per_class),
                                  int(spec.get("seed", cfg.get("seed", 0))))
            X, y = X[idx], y[idx]
        return PointCloud(X, y)
    raise ConfigError(f"unknown dataset kind {kind!r}")


def _build_graph(cfg: dict, pc: PointCloud):
    spec = cfg.get("graph", {"kind": "knn", "k": 10})
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("graph config must be an object with a 'kind'")
    kind = spec["kind"]
    squared = bool(spec.get("squared", False))
    sigma = spec.get("sigma")
    try:
        if kind == "knn":
            g = knn_graph(pc, int(spec.get("k", 10)), sigma, squared=squared)
        elif kind == "dense":
            if sigma is None:
                raise ConfigError("dense graph needs a 'sigma'")
            g = gaussian_weights(pc, float(sigma), squared=squared)
        else:
            raise ConfigError(f"unknown graph kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not g.connected:
        k = spec.get("k", 10)
        raise ConfigError(
            f"graph is disconnected with k={k}; increase k (or sigma) so every "
            f"region connects")
    return g


def _make_learner(cfg: dict, name: str):
    if name not in LEARNERS:
        raise ConfigError(f"unknown learner {name!r}; expected one of {sorted(LEARNERS)}")
    params = dict(cfg.get("learner_params", {}).get(name, {}))
    params["graph"] = "precomputed"
    try:
        return LEARNERS[name](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for learner {name!r}: {exc}") from exc


def _known_classes(pc: PointCloud) -> np.ndarray:
    if pc.labels is None:
        raise ConfigError("dataset has no labels; cannot draw a labeled subset")
    classes = np.unique(pc.labels[pc.labels >= 0])
    if classes.size < 2:
        raise ConfigError("need at least two labeled classes")
    return classes


def _labels_per_class_list(cfg: dict) -> list:
    raw = cfg.get("labels_per_class", [5])
    if isinstance(raw, (int, float)):
        raw = [raw]
    values = [int(v) for v in raw]
    if not values or any(v < 1 for v in values):
        raise ConfigError("labels_per_class must be positive")
    return values


def _masked_targets(pc: PointCloud, split) -> np.ndarray:
    y = np.full(pc.n, -1, dtype=np.intp)
    idx = split.indices
    y[idx] = pc.labels[idx]
    return y


def cmd_generate(cfg: dict) -> int:
    pc = _build_dataset(cfg)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "points.csv"
    csv_write(csv_path, pc)
    print(f"wrote {pc.n} points to {csv_path}")
    if cfg.get("svg") and pc.labels is not None:
        svg_path = out / "points.svg"
        svg_scatter(svg_path, pc.points, np.maximum(pc.labels, 0))
        print(f"wrote {svg_path}")
    return 0


def cmd_run(cfg: dict) -> int:
    pc = _build_dataset(cfg)
    g = _build_graph(cfg, pc)
    name = cfg.get("learner", "segregation")
    model = _make_learner(cfg, name)
    classes = _known_classes(pc)
    m = _labels_per_class_list(cfg)[0]
    split = trial_split(pc.labels, classes, m, int(cfg["seed"]), trial=0)
    start = time.perf_counter()
    model.fit(g, _masked_targets(pc, split))
    elapsed = time.perf_counter() - start
    pred = model.transduction_

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "predictions.csv"
    csv_write(csv_path, pc, predictions=pred)
    report = model.report_
    known = pc.labels >= 0
    known[split.indices] = False
    acc = (float(np.mean(pred[known] == pc.labels[known]))
           if known.any() else float("nan"))
    print(f"learner={name} n={pc.n} classes={len(classes)} labels_per_class={m}")
    print(f"iterations={report.iterations} residual={report.residual:.3e} "
          f"converged={report.converged} time={elapsed:.2f}s")
    print(f"accuracy={acc:.4f} (excluding labeled vertices)")
    print(f"wrote {csv_path}")
    if cfg.get("svg"):
        svg_path = out / "predictions.svg"
        # palette is indexed by class position, rings mark the labeled set
        class_pos = np.searchsorted(classes, pred)
        svg_scatter(svg_path, pc.points, class_pos, boundary=split.indices)
        print(f"wrote {svg_path}")
    if not report.converged:
        print("warning: solver did not converge", file=sys.stderr)
        return 4
    return 0


def cmd_benchmark(cfg: dict) -> int:
    pc = _build_dataset(cfg)
    g = _build_graph(cfg, pc)
    classes = _known_classes(pc)
    names = cfg.get("learners")
    if names is None:
        names = [cfg.get("learner", "segregation")]
    if isinstance(names, str):
        names = [names]
    trials = int(cfg.get("trials", 10))
    if trials < 1:
        raise ConfigError("trials must be positive")
    rates = _labels_per_class_list(cfg)
    seed = int(cfg["seed"])

    outcomes: list[TrialOutcome] = []
    all_converged = True
    for name in names:
        for m in rates:
            for t in range(trials):
                split = trial_split(pc.labels, classes, m, seed, t)
                model = _make_learner(cfg, name)
                start = time.perf_counter()
                model.fit(g, _masked_targets(pc, split))
                elapsed = time.perf_counter() - start
                acc = transductive_accuracy(pc.labels, model.transduction_,
                                            split.indices)
                outcomes.append(TrialOutcome(t, m, name, acc,
                                             model.report_.iterations, elapsed))
                all_converged = all_converged and model.report_.converged

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    table_path = out / "benchmark.csv"
    lines = [BENCHMARK_HEADER]
    for name in names:
        for m in rates:
            accs = np.array([o.accuracy for o in outcomes
                             if o.learner == name and o.labels_per_class == m])
            sd = float(accs.std(ddof=1)) if accs.size > 1 else 0.0
            lines.append(f"{name},{m},{float(accs.mean())!r},{sd!r},{trials}")
    with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    print(f"wrote {table_path}")
    if not all_converged:
        print("warning: at least one trial did not converge", file=sys.stderr)
        return 4
    return 0


def cmd_verify(cfg: dict) -> int:
    from .fixtures import verification_suite
    failures = 0
    for name, ok, detail in verification_suite():
        print(f"{'PASS' if ok else 'FAIL'}  {name}{': ' + detail if detail else ''}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} verification check(s) failed", file=sys.stderr)
        return 4
    print("all verification checks passed")
    return 0


def _parse_labels_list(text: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


_FLAG_DEFAULTS = {"config": None, "seed": None, "out": None, "learner": None,
                  "labels_per_class": None, "trials": None, "svg": False}


def build_parser() -> argparse.ArgumentParser:
    # Shared flags live on a parent parser attached to the main parser and to
    # every subparser, so they are accepted both before and after the
    # subcommand name.  Defaults are SUPPRESS: a subparser must not clobber a
    # value parsed before the subcommand; main() fills in the real defaults.
    flags = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    flags.add_argument("--config", help="JSON configuration file")
    flags.add_argument("--seed", type=int, help="master seed (u64)")
    flags.add_argument("--out", help="output directory")
    flags.add_argument("--learner", choices=sorted(LEARNERS), help="learner name")
    flags.add_argument("--labels-per-class", type=_parse_labels_list,
                       metavar="N[,N...]", help="labeled vertices per class")
    flags.add_argument("--trials", type=int, help="benchmark trials")
    flags.add_argument("--svg", action="store_true", help="also write SVG plots")

    parser = argparse.ArgumentParser(
        prog="graphseg",
        description="Graph semi-supervised learning via competitive segregation",
        parents=[flags])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[flags], help="write a dataset as CSV")
    sub.add_parser("run", parents=[flags], help="single trial; write predictions")
    sub.add_parser("benchmark", parents=[flags],
                   help="accuracy table over repeated trials")
    sub.add_parser("verify", parents=[flags], help="run the verification suite")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in _FLAG_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        cfg = _load_config(args.config) if args.config else {}
        cfg = _merge_flags(cfg, args)
        handler = {"generate": cmd_generate, "run": cmd_run,
                   "benchmark": cmd_benchmark, "verify": cmd_verify}[args.command]
        return handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataFormatError as exc:
        print(f"data format error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # invalid parameter values surfaced by library validation
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
