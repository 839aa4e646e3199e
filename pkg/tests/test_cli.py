import json

import numpy as np
import pytest

import weaksub.cli as cli
from weaksub.cli import ExperimentConfig, build_config, main, run_experiment
from weaksub.seeding import trial_seed


def tiny_config(tmp_path, **overrides):
    base = dict(
        experiment="linreg-graphic",
        trials=2,
        master_seed=5,
        n=10,
        p=12,
        output_dir=str(tmp_path / "out"),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def read_rows(path):
    lines = path.read_text().strip().split("\n")
    return lines[0], lines[1:]


class TestRunExperiment:
    def test_tiny_run_emits_full_trajectories(self, tmp_path):
        config = tiny_config(tmp_path, trials=1)
        table = run_experiment(config, max_workers=1)
        header, rows = read_rows(tmp_path / "out" / "raw.csv")
        assert header == "experiment,algorithm,trial,iteration,value"
        by_algorithm = {}
        for row in rows:
            experiment, algorithm, trial, iteration, value = row.split(",")
            assert experiment == "linreg-graphic"
            by_algorithm.setdefault(algorithm, []).append(int(iteration))
        for algorithm in ("rrg", "greedy", "random"):
            iterations = by_algorithm[algorithm]
            assert iterations == list(range(len(iterations)))
            assert len(iterations) >= 2
        assert by_algorithm["ground-truth"] == [0]
        assert (tmp_path / "out" / "summary.csv").exists()

    def test_reruns_are_byte_identical(self, tmp_path):
        config_a = tiny_config(tmp_path, output_dir=str(tmp_path / "a"))
        config_b = tiny_config(tmp_path, output_dir=str(tmp_path / "b"))
        run_experiment(config_a, max_workers=1)
        run_experiment(config_b, max_workers=1)
        assert (tmp_path / "a" / "raw.csv").read_bytes() == (
            tmp_path / "b" / "raw.csv"
        ).read_bytes()
        assert (tmp_path / "a" / "summary.csv").read_bytes() == (
            tmp_path / "b" / "summary.csv"
        ).read_bytes()

    def test_worker_count_does_not_change_results(self, tmp_path):
        serial = tiny_config(tmp_path, output_dir=str(tmp_path / "serial"), trials=3)
        pooled = tiny_config(tmp_path, output_dir=str(tmp_path / "pooled"), trials=3)
        run_experiment(serial, max_workers=1)
        run_experiment(pooled, max_workers=2)
        assert (tmp_path / "serial" / "raw.csv").read_bytes() == (
            tmp_path / "pooled" / "raw.csv"
        ).read_bytes()
        assert (tmp_path / "serial" / "summary.csv").read_bytes() == (
            tmp_path / "pooled" / "summary.csv"
        ).read_bytes()

    def test_summary_consistent_with_raw(self, tmp_path):
        config = tiny_config(tmp_path, trials=3)
        table = run_experiment(config, max_workers=1)
        grouped = {}
        for algorithm, _trial, iteration, value in table.rows:
            grouped.setdefault((algorithm, iteration), []).append(value)
        for algorithm, iteration, mean, std, count in table.summary_rows():
            values = grouped[(algorithm, iteration)]
            assert count == len(values)
            assert min(values) - 1e-12 <= mean <= max(values) + 1e-12
            assert abs(mean - np.mean(values)) < 1e-12
            expected_std = np.std(values, ddof=1) if len(values) > 1 else 0.0
            assert abs(std - expected_std) < 1e-12

    def test_ground_truth_only_for_linreg(self, tmp_path):
        dpp = ExperimentConfig(
            experiment="dpp-interval",
            trials=1,
            master_seed=1,
            n=30,
            p=2,
            interval=10,
            output_dir=str(tmp_path / "dpp"),
        )
        table = run_experiment(dpp, max_workers=1)
        assert table.ground_truth is None
        algorithms = {row[0] for row in table.rows}
        assert algorithms == {"rrg", "greedy", "random"}
        linreg = tiny_config(tmp_path, trials=1)
        table = run_experiment(linreg, max_workers=1)
        assert table.ground_truth is not None
        assert any(row[0] == "ground-truth" for row in table.rows)

    def test_partition_and_logistic_experiments_run(self, tmp_path):
        partition = ExperimentConfig(
            experiment="linreg-partition",
            trials=1,
            master_seed=2,
            n=12,
            p=15,
            blocks=4,
            output_dir=str(tmp_path / "part"),
        )
        table = run_experiment(partition, max_workers=1)
        assert table.ground_truth is not None
        logistic = ExperimentConfig(
            experiment="logistic-onehot",
            trials=1,
            master_seed=3,
            n=40,
            p=12,
            output_dir=str(tmp_path / "logit"),
        )
        table = run_experiment(logistic, max_workers=1)
        assert {row[0] for row in table.rows} == {"rrg", "greedy", "random"}

    def test_dat_output(self, tmp_path):
        config = tiny_config(tmp_path, write_dat=True)
        run_experiment(config, max_workers=1)
        dat = (tmp_path / "out" / "summary.dat").read_text().strip().split("\n")
        assert dat[0].startswith("# iteration")
        assert len(dat) > 2

    def test_trial_seeds_are_order_independent(self):
        seeds = [trial_seed(42, t) for t in range(10)]
        assert len(set(seeds)) == 10
        assert seeds[3] == trial_seed(42, 3)

    def test_wsub_threads_caps_workers(self, monkeypatch):
        monkeypatch.setenv("WSUB_THREADS", "1")
        assert cli._worker_count(trials=8, max_workers=None) == 1
        monkeypatch.delenv("WSUB_THREADS")
        assert cli._worker_count(trials=8, max_workers=3) == 3
        assert cli._worker_count(trials=2, max_workers=8) == 2


class TestVerifyFixtures:
    def test_report_printed_and_written(self, tmp_path, capsys):
        config = ExperimentConfig(
            experiment="fixture-verify",
            trials=40,
            master_seed=4,
            output_dir=str(tmp_path / "verify"),
        )
        passed = cli.verify_fixtures(config)
        assert passed
        out = capsys.readouterr().out
        assert out.count("[PASS]") >= 10
        assert "gamma=" in out and "pairs_checked=" in out and "witness=" in out
        written = (tmp_path / "verify" / "fixture_report.txt").read_text()
        assert written.count("[PASS]") >= 10


class TestConfigValidation:
    def test_trials_must_be_positive(self, tmp_path):
        with pytest.raises(ValueError):
            tiny_config(tmp_path, trials=0).resolved()

    def test_unknown_experiment(self):
        with pytest.raises(ValueError):
            ExperimentConfig(experiment="nope").resolved()

    def test_logistic_requires_onehot_multiple(self, tmp_path):
        config = ExperimentConfig(
            experiment="logistic-onehot", n=40, p=10, output_dir=str(tmp_path)
        )
        with pytest.raises(ValueError):
            config.resolved()

    def test_dpp_rank_cap(self, tmp_path):
        config = ExperimentConfig(
            experiment="dpp-interval", n=2000, p=2, interval=1,
            output_dir=str(tmp_path),
        )
        with pytest.raises(ValueError):
            config.resolved()

    def test_defaults_applied_per_experiment(self, tmp_path):
        config = ExperimentConfig(
            experiment="linreg-partition", output_dir=str(tmp_path)
        ).resolved()
        assert (config.n, config.p, config.blocks) == (100, 200, 10)


class TestMainEntry:
    def test_config_file_with_flag_overrides(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(
            json.dumps(
                {
                    "experiment": "linreg-graphic",
                    "trials": 1,
                    "seed": 9,
                    "n": 8,
                    "p": 10,
                    "out": str(tmp_path / "from-file"),
                }
            )
        )
        code = main(["--config", str(path), "--trials", "2", "--out", str(tmp_path / "o")])
        assert code == 0
        _, rows = read_rows(tmp_path / "o" / "raw.csv")
        trials = {row.split(",")[2] for row in rows}
        assert trials == {"0", "1"}

    def test_unknown_config_key_is_a_config_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"experiment": "linreg-graphic", "bogus": 1}))
        assert main(["--config", str(path)]) == 1

    def test_missing_experiment_is_a_config_error(self):
        assert main(["--trials", "3"]) == 1

    def test_invalid_size_is_a_config_error(self, tmp_path):
        assert (
            main(
                [
                    "--experiment", "logistic-onehot",
                    "--n", "40", "--p", "10",
                    "--out", str(tmp_path / "x"),
                ]
            )
            == 1
        )

    def test_fixture_verify_exit_codes(self, monkeypatch, tmp_path):
        monkeypatch.setattr(cli, "verify_fixtures", lambda config: False)
        assert main(["--experiment", "fixture-verify"]) == 2
        monkeypatch.setattr(cli, "verify_fixtures", lambda config: True)
        assert main(["--experiment", "fixture-verify"]) == 0

    def test_build_config_requires_experiment(self):
        args = cli._build_parser().parse_args([])
        with pytest.raises(ValueError):
            build_config(args)
