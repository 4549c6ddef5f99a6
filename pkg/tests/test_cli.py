"""Tests for the command line front end."""

import json

import numpy as np
import pandas as pd
import pytest

from src.cli import effective_config, main, read_config_file
from src.containers import IntervalPartition
from src.data import ModelFile, load_collection, load_csv, load_model, save_model
from src.system import InvalidArgument


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "data.csv"
    assert run("simulate", "--model", "m1", "--n", 40, "--p", 20, "--seed", 5, "--out", path, "--quiet") == 0
    return path


class TestConfig:
    """Layering of defaults, files and flags."""

    def test_precedence(self):
        config = effective_config("fit", {"fit": {"H": 8, "cv_folds": 5}}, {"H": 6, "seed": None})
        assert config["H"] == 6
        assert config["cv_folds"] == 5
        assert config["seed"] == 0

    def test_unknown_key(self):
        with pytest.raises(InvalidArgument):
            effective_config("fit", {"fit": {"lambda": 1.0}})

    def test_bad_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(InvalidArgument):
            read_config_file(path)

    def test_show_config(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"simulate": {"n": 150}}))
        assert run("simulate", "--config", path, "--seed", 3, "--show-config") == 0
        shown = json.loads(capsys.readouterr().out)
        assert (shown["n"], shown["seed"], shown["model"]) == (150, 3, "M1")


class TestUsage:
    """Exit codes and error lines."""

    def test_unknown_flag(self):
        assert run("fit", "--bogus", 1) == 2

    def test_unknown_subcommand(self):
        assert run("train") == 2

    def test_missing_required(self, tmp_path):
        assert run("fit", "--data", tmp_path / "data.csv") == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run("report", "--model", tmp_path / "absent.json") == 1
        assert "error category=io-error" in capsys.readouterr().err

    def test_computation_error(self, tmp_path, dataset, capsys):
        assert run("fit", "--data", dataset, "--h", 50, "--out", tmp_path / "run.json") == 1
        assert "error category=invalid-argument" in capsys.readouterr().err

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("y,0.0,0.5\n1,2,3\n2,abc,4\n")
        assert run("tune", "--data", path, "--out", tmp_path / "t.json") == 1
        assert "error category=parse-error" in capsys.readouterr().err


class TestSimulate:
    """Dataset generation."""

    def test_byte_identical(self, tmp_path, dataset):
        again = tmp_path / "again.csv"
        assert run("simulate", "--model", "m1", "--n", 40, "--p", 20, "--seed", 5, "--out", again) == 0
        assert dataset.read_bytes() == again.read_bytes()
        data = load_csv(dataset)
        assert (data.n, data.p) == (40, 20)

    def test_truth_table(self, tmp_path):
        truth = tmp_path / "truth.csv"
        assert run("simulate", "--model", "m2", "--n", 5, "--p", 30, "--out", tmp_path / "d.csv",
                   "--truth", truth) == 0
        assert list(pd.read_csv(truth).columns) == ["t", "a1", "a2", "a3"]


class TestPipeline:
    """tune, fit, select, project and report on a small simulated dataset."""

    def test_tune(self, tmp_path, dataset, capsys):
        out = tmp_path / "tune.json"
        assert run("tune", "--data", dataset, "--h", 5, "--mu2-grid", "0.1,1,10", "--folds", 3, "--out", out) == 0
        text = capsys.readouterr().out
        assert "mu2* = " in text and "d* = " in text
        cv_err = pd.read_csv(tmp_path / "tune_cv_err.csv")
        np.testing.assert_allclose(cv_err["mu2"], [0.1, 1.0, 10.0])
        assert list(cv_err.columns[1:]) == [f"d{d}" for d in range(1, cv_err.shape[1])]
        assert (tmp_path / "tune_r_hat.csv").exists()

    def test_fit_select_project_report(self, tmp_path, dataset, capsys):
        run_path, model_path = tmp_path / "run.json", tmp_path / "model.json"
        assert run("fit", "--data", dataset, "--h", 5, "--mu2", 1, "--d", 1, "--grid-size", 10,
                   "--cv-folds", 3, "--out", run_path) == 0
        collection = load_collection(run_path)
        trace = pd.read_csv(tmp_path / "run_trace.csv")
        assert len(trace) == len(collection.records)
        assert np.all(np.diff(trace["D"]) < 0)
        assert collection.provenance["seed"] == 0

        assert run("select", "--collection", run_path, "--out", model_path) == 0
        model = load_model(model_path)
        assert model.partition == collection.records[collection.selected].partition

        scores = tmp_path / "scores.csv"
        assert run("project", "--model", model_path, "--data", dataset, "--out", scores) == 0
        frame = pd.read_csv(scores)
        assert list(frame.columns) == ["y"] + [f"e{j}" for j in range(1, model.A_sparse.shape[1] + 1)]
        assert len(frame) == 40

        capsys.readouterr()
        intervals = tmp_path / "intervals.csv"
        assert run("report", "--model", model_path, "--out", intervals) == 0
        assert f"selected intervals: {int(np.count_nonzero(model.selected))}" in capsys.readouterr().out
        table = pd.read_csv(intervals)
        assert table["lo"].iloc[0] == 0 and table["hi"].iloc[-1] == 19
        np.testing.assert_array_equal(table["lo"].to_numpy()[1:], table["hi"].to_numpy()[:-1] + 1)

    def test_fit_is_byte_identical(self, tmp_path, dataset):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            assert run("fit", "--data", dataset, "--h", 5, "--grid-size", 8, "--cv-folds", 3, "--max-iterations", 3,
                       "--out", out) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_fit_from_tune_file(self, tmp_path, dataset):
        tune = tmp_path / "tune.json"
        assert run("tune", "--data", dataset, "--h", 5, "--mu2-grid", "1,10", "--folds", 3, "--out", tune) == 0
        chosen = json.loads(tune.read_text())
        assert run("fit", "--data", dataset, "--h", 5, "--tune", tune, "--grid-size", 8, "--cv-folds", 3,
                   "--max-iterations", 2, "--out", tmp_path / "run.json") == 0
        collection = load_collection(tmp_path / "run.json")
        assert collection.mu2 == chosen["mu2_star"]
        assert collection.d == chosen["d_star"]

    def test_report_on_empty_model(self, tmp_path, capsys):
        grid = np.linspace(0.0, 1.0, 4)
        path = tmp_path / "empty.json"
        save_model(ModelFile(grid=grid, partition=IntervalPartition([0, 2], grid), alpha_star=np.zeros(2),
                             mu1_star=1.0, mu2=1.0, d=1, H=5, A_sparse=np.zeros((4, 0))), path)
        assert run("report", "--model", path) == 0
        assert "selected intervals: 0" in capsys.readouterr().out
