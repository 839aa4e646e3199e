"""Benchmark command line: seeded multi-trial experiment runner.

Each trial generates a fresh synthetic instance, runs the randomized
greedy, deterministic greedy, and random baselines on it, and records the
full value trajectories. Raw and summarized trajectories land in CSV files
ready for any plotting tool. Per-trial seeds are mixed from the master
seed, so results do not depend on execution order or worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from math import ceil
from pathlib import Path

import numpy as np

from .algorithms import random_baseline, residual_random_greedy, standard_greedy
from .datagen import (
    make_dpp_instance,
    make_linreg_instance,
    make_onehot_logistic_instance,
    random_graphic_matroid,
    random_partition_matroid,
)
from .fixtures import standard_fixtures, verify_fixture
from .objectives import dpp_determinant, least_squares_loglik, logistic_loglik
from .seeding import trial_seed

__all__ = ["ExperimentConfig", "ResultTable", "run_experiment", "verify_fixtures", "main"]

EXPERIMENTS = (
    "linreg-graphic",
    "linreg-partition",
    "dpp-interval",
    "logistic-onehot",
    "fixture-verify",
)

# Per-experiment size defaults; n/p mirror the synthetic regression setup
# (rows x columns), and double as frames/feature-dim for the determinant
# experiment and samples/dummy-count for the logistic one.
_DEFAULTS = {
    "linreg-graphic": {"n": 100, "p": 200},
    "linreg-partition": {"n": 100, "p": 200, "blocks": 10},
    "dpp-interval": {"n": 200, "p": 3, "bandwidth": 1.0, "interval": 25},
    "logistic-onehot": {"n": 500, "p": 28},
    "fixture-verify": {},
}

_ONEHOT_ARITY = 4
_MAX_DET_RANK = 64


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one experiment invocation."""

    experiment: str
    trials: int = 20
    master_seed: int = 0
    n: int | None = None
    p: int | None = None
    blocks: int | None = None
    bandwidth: float | None = None
    interval: int | None = None
    output_dir: str | None = None
    write_dat: bool = False

    def resolved(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        merged = dict(_DEFAULTS[self.experiment])
        for key in ("n", "p", "blocks", "bandwidth", "interval"):
            if getattr(self, key) is not None:
                merged[key] = getattr(self, key)
        cfg = replace(
            self,
            n=merged.get("n"),
            p=merged.get("p"),
            blocks=merged.get("blocks"),
            bandwidth=merged.get("bandwidth"),
            interval=merged.get("interval"),
        )
        cfg._validate()
        return cfg

    def _validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.experiment == "fixture-verify":
            return
        if self.output_dir is None:
            raise ValueError("an output directory is required (--out)")
        if self.n is None or self.n < 1 or self.p is None or self.p < 1:
            raise ValueError("n and p must be positive")
        if self.experiment == "linreg-partition" and (self.blocks or 0) < 1:
            raise ValueError("blocks must be at least 1")
        if self.experiment == "dpp-interval":
            if self.interval is None or self.interval < 1:
                raise ValueError("interval length must be positive")
            if self.bandwidth is None or self.bandwidth <= 0:
                raise ValueError("bandwidth must be positive")
            if ceil(self.n / self.interval) > _MAX_DET_RANK:
                raise ValueError(
                    f"n/interval yields rank > {_MAX_DET_RANK}; the determinant "
                    "objective is evaluated in linear space and would overflow"
                )
        if self.experiment == "logistic-onehot" and self.p % _ONEHOT_ARITY != 0:
            raise ValueError(f"p must be a multiple of {_ONEHOT_ARITY} (one-hot groups)")


@dataclass
class ResultTable:
    """Raw trajectories plus recomputable summaries for one experiment."""

    experiment: str
    rows: list[tuple[str, int, int, float]]
    ground_truth: float | None = None

    def summary_rows(self) -> list[tuple[str, int, float, float, int]]:
        grouped: dict[tuple[str, int], list[float]] = {}
        for algorithm, _trial, iteration, value in self.rows:
            grouped.setdefault((algorithm, iteration), []).append(value)
        out = []
        for (algorithm, iteration), values in sorted(grouped.items()):
            arr = np.asarray(values)
            std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
            out.append((algorithm, iteration, float(arr.mean()), std, len(arr)))
        return out

    def terminal_means(self) -> dict[str, float]:
        """Mean over trials of each algorithm's final value."""
        last: dict[tuple[str, int], tuple[int, float]] = {}
        for algorithm, trial, iteration, value in self.rows:
            key = (algorithm, trial)
            if key not in last or iteration > last[key][0]:
                last[key] = (iteration, value)
        sums: dict[str, list[float]] = {}
        for (algorithm, _trial), (_it, value) in last.items():
            sums.setdefault(algorithm, []).append(value)
        return {alg: float(np.mean(vals)) for alg, vals in sums.items()}

    def write_raw(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("experiment,algorithm,trial,iteration,value\n")
            for algorithm, trial, iteration, value in self.rows:
                fh.write(
                    f"{self.experiment},{algorithm},{trial},{iteration},{value:.17g}\n"
                )

    def write_summary(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("algorithm,iteration,mean,std,trials\n")
            for algorithm, iteration, mean, std, count in self.summary_rows():
                fh.write(f"{algorithm},{iteration},{mean:.17g},{std:.17g},{count}\n")

    def write_dat(self, path) -> None:
        """Gnuplot-friendly summary: one block of columns per algorithm."""
        summaries = self.summary_rows()
        algorithms = sorted({row[0] for row in summaries})
        by_key = {(alg, it): (mean, std) for alg, it, mean, std, _ in summaries}
        iterations = sorted({row[1] for row in summaries})
        with open(path, "w") as fh:
            cols = " ".join(f"mean_{a} std_{a}" for a in algorithms)
            fh.write(f"# iteration {cols}\n")
            for it in iterations:
                parts = [str(it)]
                for alg in algorithms:
                    mean, std = by_key.get((alg, it), (float("nan"), float("nan")))
                    parts.append(f"{mean:.17g} {std:.17g}")
                fh.write(" ".join(parts) + "\n")


def _run_single_trial(
    experiment: str, cfg: dict, trial: int, seed: int
) -> tuple[list[tuple[str, int, int, float]], float | None]:
    rng = np.random.default_rng(seed)
    truth = None
    if experiment == "linreg-graphic":
        matroid = random_graphic_matroid(cfg["n"], cfg["p"], rng)
        instance = make_linreg_instance(cfg["n"], cfg["p"], matroid, rng, seed=seed)
        make_oracle = lambda: least_squares_loglik(instance.problem)
        truth = instance.ground_truth_value
    elif experiment == "linreg-partition":
        matroid = random_partition_matroid(cfg["p"], cfg["blocks"], rng)
        instance = make_linreg_instance(cfg["n"], cfg["p"], matroid, rng, seed=seed)
        make_oracle = lambda: least_squares_loglik(instance.problem)
        truth = instance.ground_truth_value
    elif experiment == "dpp-interval":
        gram, matroid = make_dpp_instance(
            cfg["n"], cfg["p"], cfg["bandwidth"], cfg["interval"], rng
        )
        make_oracle = lambda: dpp_determinant(gram)
    elif experiment == "logistic-onehot":
        problem, matroid = make_onehot_logistic_instance(
            cfg["n"], cfg["p"] // _ONEHOT_ARITY, _ONEHOT_ARITY, rng
        )
        make_oracle = lambda: logistic_loglik(problem)
    else:
        raise ValueError(f"experiment {experiment!r} has no trial runner")

    rows: list[tuple[str, int, int, float]] = []
    runs = (
        ("rrg", lambda: residual_random_greedy(
            make_oracle(), matroid, np.random.default_rng(trial_seed(seed, 1)))),
        ("greedy", lambda: standard_greedy(make_oracle(), matroid)),
        ("random", lambda: random_baseline(
            matroid, make_oracle(), np.random.default_rng(trial_seed(seed, 2)))),
    )
    for name, run in runs:
        trace = run()
        for iteration, value in enumerate(trace.values()):
            rows.append((name, trial, iteration, value))
    if truth is not None:
        rows.append(("ground-truth", trial, 0, truth))
    return rows, truth


def _worker_count(trials: int, max_workers: int | None) -> int:
    if max_workers is None:
        max_workers = os.cpu_count() or 1
        env_cap = os.environ.get("WSUB_THREADS")
        if env_cap:
            max_workers = min(max_workers, max(1, int(env_cap)))
    return max(1, min(max_workers, trials))


def run_experiment(config: ExperimentConfig, max_workers: int | None = None) -> ResultTable:
    """Run all trials of an experiment and write raw.csv / summary.csv.

    Results are identical for any worker count because each trial's seed is
    derived from (master seed, trial index) alone and rows are sorted before
    writing.
    """
    config = config.resolved()
    if config.experiment == "fixture-verify":
        raise ValueError("fixture-verify has no trial table; use verify_fixtures")
    cfg = {
        "n": config.n,
        "p": config.p,
        "blocks": config.blocks,
        "bandwidth": config.bandwidth,
        "interval": config.interval,
    }
    seeds = [trial_seed(config.master_seed, t) for t in range(config.trials)]
    workers = _worker_count(config.trials, max_workers)
    results = []
    if workers == 1:
        for t, seed in enumerate(seeds):
            results.append(_run_single_trial(config.experiment, cfg, t, seed))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_single_trial, config.experiment, cfg, t, seed)
                for t, seed in enumerate(seeds)
            ]
            results = [f.result() for f in futures]

    rows: list[tuple[str, int, int, float]] = []
    truths = []
    for trial_rows, truth in results:
        rows.extend(trial_rows)
        if truth is not None:
            truths.append(truth)
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    table = ResultTable(
        experiment=config.experiment,
        rows=rows,
        ground_truth=float(np.mean(truths)) if truths else None,
    )
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    table.write_raw(out / "raw.csv")
    table.write_summary(out / "summary.csv")
    if config.write_dat:
        table.write_dat(out / "summary.dat")
    return table


def verify_fixtures(config: ExperimentConfig, stream=None) -> bool:
    """Run the small-instance guarantee battery; prints one line per fixture.

    Returns True when every fixture passes its bound.
    """
    stream = stream or sys.stdout
    lines = []
    all_passed = True
    for fixture in standard_fixtures():
        report = verify_fixture(
            fixture, trials=config.trials, master_seed=config.master_seed
        )
        lines.append(report.summary_line())
        all_passed &= report.passed
    for line in lines:
        print(line, file=stream)
    if config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "fixture_report.txt").write_text("\n".join(lines) + "\n")
    return all_passed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weaksub",
        description="Benchmark runner for matroid-constrained weakly submodular maximization.",
    )
    parser.add_argument("--experiment", choices=EXPERIMENTS)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", type=str)
    parser.add_argument("--n", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--blocks", type=int)
    parser.add_argument("--bandwidth", type=float)
    parser.add_argument("--interval", type=int)
    parser.add_argument("--dat", action="store_true", default=None,
                        help="also write a gnuplot-friendly summary.dat")
    parser.add_argument("--config", type=str, help="JSON config file; flags override it")
    return parser


_CONFIG_KEYS = {
    "experiment": "experiment",
    "trials": "trials",
    "seed": "master_seed",
    "out": "output_dir",
    "n": "n",
    "p": "p",
    "blocks": "blocks",
    "bandwidth": "bandwidth",
    "interval": "interval",
    "dat": "write_dat",
}


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        unknown = set(doc) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, value in doc.items():
            values[_CONFIG_KEYS[key]] = value
    for key, attr in _CONFIG_KEYS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            values[attr] = flag
    if "experiment" not in values:
        raise ValueError("an experiment must be selected (--experiment or config file)")
    if "trials" not in values:
        values["trials"] = 500 if values["experiment"] == "fixture-verify" else 20
    if "master_seed" not in values:
        values["master_seed"] = 0
    if "write_dat" not in values:
        values["write_dat"] = False
    return ExperimentConfig(**values).resolved()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.experiment == "fixture-verify":
        return 0 if verify_fixtures(config) else 2
    try:
        table = run_experiment(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    terminal = table.terminal_means()
    summary = ", ".join(f"{alg}={val:.6g}" for alg, val in sorted(terminal.items()))
    print(f"{config.experiment}: {config.trials} trials done; terminal means: {summary}")
    print(f"results written under {config.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
