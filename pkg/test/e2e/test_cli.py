"""
End-to-End tests for the command line interface.
"""

from test.e2e.conftest import GENERATE_ARGS, NETWORK_ARGS

import orjson
import pandas as pd
import pytest

from pump_monitor.cli import main


class TestGenerate:
    """Tests for the `generate` command."""

    def test_generate(self, tmp_path, capsys):
        """Test generating a dataset prints its counts."""

        path = tmp_path / "pumps.ndjson"

        assert main(["generate", "-o", str(path), *GENERATE_ARGS]) == 0

        assert "Generated 36 samples of 3 pumps (12 normal, 24 abnormal)" in capsys.readouterr().out
        assert len(path.read_text(encoding="utf-8").splitlines()) == 36

    def test_generate_is_deterministic(self, tmp_path, dataset_path):
        """Test generating with the same seed reproduces the file byte for byte."""

        path = tmp_path / "pumps.ndjson"

        assert main(["generate", "-o", str(path), *GENERATE_ARGS]) == 0

        assert path.read_bytes() == dataset_path.read_bytes()

    def test_generate_with_other_seed(self, tmp_path, dataset_path):
        """Test the seed flag changes the generated data."""

        path = tmp_path / "pumps.ndjson"

        assert main(["--seed", "1", "generate", "-o", str(path), *GENERATE_ARGS]) == 0

        assert path.read_bytes() != dataset_path.read_bytes()

    def test_generate_with_invalid_fraction(self, tmp_path, capsys):
        """Test generating with an abnormal fraction above 1."""

        path = tmp_path / "pumps.ndjson"

        assert main(["generate", "-o", str(path), "--abnormal-fraction", "1.5"]) == 2

        assert "abnormal_fraction" in capsys.readouterr().err
        assert not path.exists()

    def test_generate_with_missing_config_file(self, tmp_path):
        """Test generating with a config file that does not exist."""

        assert main(["--config", str(tmp_path / "missing.env"), "generate", "-o", str(tmp_path / "pumps.ndjson")]) == 2

    def test_generate_with_config_file(self, tmp_path, capsys):
        """Test the values of a config file are used."""

        config_path = tmp_path / "run.env"
        config_path.write_text("PUMP_MONITOR_SYNTHETIC__N_PUMPS=2\nPUMP_MONITOR_SYNTHETIC__SAMPLES_PER_PUMP=3\n")

        assert main(["--config", str(config_path), "generate", "-o", str(tmp_path / "pumps.ndjson")]) == 0

        assert "Generated 6 samples of 2 pumps" in capsys.readouterr().out


class TestTrain:
    """Tests for the `train` command."""

    def test_train(self, ecnn_model_path, dataset_path, tmp_path, capsys):
        """Test training writes a model file of the requested topology."""

        path = tmp_path / "cnn.json"

        assert main(["train", "-d", str(dataset_path), "-o", str(path), "--algo", "cnn", *NETWORK_ARGS]) == 0

        assert "Trained cnn on 36 samples" in capsys.readouterr().out
        document = orjson.loads(path.read_bytes())
        assert document["config"]["enhanced"] is False
        assert orjson.loads(ecnn_model_path.read_bytes())["config"]["enhanced"] is True

    def test_train_is_deterministic(self, ecnn_model_path, dataset_path, tmp_path):
        """Test training with the same seed reproduces the model file byte for byte."""

        path = tmp_path / "ecnn.json"

        assert main(["train", "-d", str(dataset_path), "-o", str(path), "--algo", "ecnn", *NETWORK_ARGS]) == 0

        assert path.read_bytes() == ecnn_model_path.read_bytes()

    def test_train_with_missing_dataset(self, tmp_path):
        """Test training on a dataset file that does not exist."""

        args = ["train", "-d", str(tmp_path / "missing.ndjson"), "-o", str(tmp_path / "model.json"), *NETWORK_ARGS]

        assert main(args) == 2

    def test_train_with_invalid_dataset(self, tmp_path, capsys):
        """Test training on a dataset file with a malformed line."""

        dataset_path = tmp_path / "broken.ndjson"
        dataset_path.write_text("not json\n", encoding="utf-8")

        assert main(["train", "-d", str(dataset_path), "-o", str(tmp_path / "model.json"), *NETWORK_ARGS]) == 1

        assert "Line 1" in capsys.readouterr().err


class TestCrossval:
    """Tests for the `crossval` command."""

    def test_crossval_threshold(self, dataset_path, tmp_path, capsys):
        """Test the results hold one row per pump followed by a single aggregate row."""

        path = tmp_path / "threshold.csv"

        assert main(["crossval", "-d", str(dataset_path), "-o", str(path), "--algo", "threshold"]) == 0

        results = pd.read_csv(path)
        assert list(results["scope"]) == ["pump-000", "pump-001", "pump-002", "aggregate"]
        assert results["depth"].isna().all()
        assert (results["mac_count"] == 0).all()
        assert results["accuracy"].iloc[-1] == pytest.approx(results["accuracy"].iloc[:-1].mean())
        assert "Folds: 3 evaluated, 0 skipped" in capsys.readouterr().out

    def test_crossval_single_pump(self, dataset_path, tmp_path):
        """Test running the fold of one pump."""

        path = tmp_path / "threshold.csv"

        args = ["crossval", "-d", str(dataset_path), "-o", str(path), "--algo", "threshold", "--pumps", "pump-001"]
        assert main(args) == 0

        assert list(pd.read_csv(path)["scope"]) == ["pump-001", "aggregate"]

    def test_crossval_cnn(self, dataset_path, tmp_path):
        """Test the rows of the default CNN carry its topology."""

        path = tmp_path / "cnn.csv"

        assert main(["crossval", "-d", str(dataset_path), "-o", str(path), "--algo", "cnn", *NETWORK_ARGS]) == 0

        results = pd.read_csv(path)
        assert (results["depth"] == 2).all()
        assert (results["policy"] == "none").all()

    def test_crossval_combined(self, dataset_path, tmp_path, capsys):
        """Test the combined approach with FPR based selection evaluates every pump with the ECNN topology."""

        path = tmp_path / "combined.csv"
        args = ["crossval", "-d", str(dataset_path), "-o", str(path), "--algo", "combined", "--policy", "fpr"]

        assert main([*args, *NETWORK_ARGS]) == 0

        results = pd.read_csv(path)
        assert list(results["scope"]) == ["pump-000", "pump-001", "pump-002", "aggregate"]
        assert (results["algorithm"] == "combined").all()
        assert (results["policy"] == "fpr").all()
        assert (results["depth"] == 2).all()
        assert "Folds: 3 evaluated, 0 skipped" in capsys.readouterr().out

    def test_crossval_is_deterministic(self, dataset_path, tmp_path):
        """Test two runs with the same seed, serial and on worker processes, write identical results."""

        args = ["crossval", "-d", str(dataset_path), "--algo", "ecnn", *NETWORK_ARGS]
        paths = [tmp_path / "first.csv", tmp_path / "second.csv", tmp_path / "parallel.csv"]

        assert main([*args, "-o", str(paths[0])]) == 0
        assert main([*args, "-o", str(paths[1])]) == 0
        assert main(["--jobs", "2", *args, "-o", str(paths[2])]) == 0

        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert paths[0].read_bytes() == paths[2].read_bytes()

    def test_crossval_with_unknown_algorithm(self, dataset_path, tmp_path):
        """Test cross-validating an algorithm that does not exist."""

        assert main(["crossval", "-d", str(dataset_path), "-o", str(tmp_path / "out.csv"), "--algo", "svm"]) == 2

    def test_crossval_with_unknown_pump(self, dataset_path, tmp_path):
        """Test running the fold of a pump that does not exist."""

        path = tmp_path / "out.csv"

        args = ["crossval", "-d", str(dataset_path), "-o", str(path), "--algo", "threshold", "--pumps", "pump-9"]
        assert main(args) == 2
        assert not path.exists()

    def test_crossval_with_missing_dataset(self, tmp_path):
        """Test cross-validating on a dataset file that does not exist."""

        args = ["crossval", "-d", str(tmp_path / "missing.ndjson"), "-o", str(tmp_path / "out.csv"), "--algo", "cnn"]

        assert main(args) == 2


class TestDse:
    """Tests for the `dse` command."""

    def test_dse(self, dataset_path, tmp_path):
        """Test exploring a single topology writes it to both CSV files."""

        results_path = tmp_path / "dse.csv"
        pareto_path = tmp_path / "pareto.csv"
        grid_args = ["--depths", "4", "--kernels", "11", "--channel-counts", "5", "--epochs", "1"]

        assert main(["dse", "-d", str(dataset_path), "-o", str(results_path), "-p", str(pareto_path), *grid_args]) == 0

        results = pd.read_csv(results_path)
        assert list(results["mac_count"]) == [616000]
        assert list(results["depth"]) == [4]
        assert pd.read_csv(pareto_path).equals(results)

    def test_dse_is_deterministic(self, dataset_path, tmp_path):
        """Test two explorations with the same seed write identical results and Pareto files."""

        grid_args = ["--depths", "2", "3", "--kernels", "3", "--channel-counts", "2", "--epochs", "1"]
        outputs = []
        for run in ("first", "second"):
            results_path = tmp_path / f"{run}.csv"
            pareto_path = tmp_path / f"{run}-pareto.csv"
            args = ["dse", "-d", str(dataset_path), "-o", str(results_path), "-p", str(pareto_path), *grid_args]
            assert main(args) == 0
            outputs.append((results_path.read_bytes(), pareto_path.read_bytes()))

        assert outputs[0] == outputs[1]
        assert len(pd.read_csv(tmp_path / "first.csv")) == 2

    def test_dse_with_even_kernel(self, dataset_path, tmp_path):
        """Test exploring a grid with an even kernel size."""

        args = ["dse", "-d", str(dataset_path), "-o", str(tmp_path / "dse.csv"), "-p", str(tmp_path / "pareto.csv")]

        assert main([*args, "--kernels", "4"]) == 2


class TestAdapt:
    """Tests for the `adapt` command."""

    def test_adapt_threshold(self, dataset_path, tmp_path, capsys):
        """Test adapting the threshold detector writes a profile."""

        path = tmp_path / "pump-000.json"

        args = ["adapt", "-d", str(dataset_path), "--pump", "pump-000", "-o", str(path), "--algo", "threshold"]
        assert main(args) == 0

        profile = orjson.loads(path.read_bytes())
        assert profile["pump_id"] == "pump-000"
        assert profile["chosen_detector"] == "threshold"
        assert profile["threshold"] > 0.0
        assert "Adaptation FPR: 0.0000 over 2 normal samples" in capsys.readouterr().out

    def test_adapt_combined(self, dataset_path, ecnn_model_path, tmp_path):
        """Test adapting the combined approach with a trained ECNN."""

        path = tmp_path / "pump-001.json"
        args = ["adapt", "-d", str(dataset_path), "-m", str(ecnn_model_path), "--pump", "pump-001", "-o", str(path)]

        assert main(args) == 0

        profile = orjson.loads(path.read_bytes())
        assert profile["chosen_detector"] in ("ecnn", "threshold")

    def test_adapt_with_unknown_pump(self, dataset_path, tmp_path):
        """Test adapting to a pump that does not exist."""

        path = tmp_path / "pump-9.json"

        args = ["adapt", "-d", str(dataset_path), "--pump", "pump-9", "-o", str(path), "--algo", "threshold"]
        assert main(args) == 2
        assert not path.exists()

    def test_adapt_ecnn_without_model(self, dataset_path, tmp_path):
        """Test adapting the ECNN without a model file."""

        path = tmp_path / "pump-000.json"
        args = ["adapt", "-d", str(dataset_path), "--pump", "pump-000", "-o", str(path), "--algo", "ecnn"]

        assert main(args) == 2
