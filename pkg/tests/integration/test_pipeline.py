"""End-to-end tests: learning on synthetic data and reproducible command runs."""

import json

import pytest
import yaml

from har_chain.evaluation import evaluate
from har_chain.ingest import SyntheticSpec, generate_synthetic, synthetic_label_map, write_directory
from har_chain.model import Architecture, ModelSpec, build_model
from har_chain.preprocess import (
    PipelineConfig,
    apply_normalizer_windows,
    fit_normalizer_windows,
)
from har_chain.runner.cli import main
from har_chain.train import TrainConfig, entropy_floor, evaluate_loss, train
from har_chain.validate import build_windows, run_cross_validation

# with five-second bouts one window start in ten straddles two activities
LONG_BOUTS = {"rate": 50.0, "bout_seconds": 5.0, "classes": 3}
PIPELINE = PipelineConfig(target_rate=50.0, window_seconds=1.0, overlap=0.5, labeling="last_sample")


@pytest.fixture
def quick_run_config(tmp_path):
    """Config file for CLI runs that finish in seconds."""
    path = tmp_path / "quick.yaml"
    path.write_text(
        yaml.safe_dump(
            {
                "seed": 7,
                "data": {"synthetic": {"subjects": 3, "classes": 2, "bouts_per_class": 1}},
                "model": {"conv_layers": 1, "filters": 4, "kernel_length": 3, "hidden": 6},
                "train": {"epochs": 2, "batch_size": 16, "maxup": 2, "label_smoothing": 0.1},
                "search": {"budget": 2},
            }
        ),
        encoding="utf-8",
    )
    return path


def read_outputs(directory, skip=("run_manifest.json",)):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.name not in skip}


@pytest.mark.integration
class TestLearning:
    """The default network learns the synthetic activities."""

    @staticmethod
    def normalized_windows(spec: SyntheticSpec):
        dataset = build_windows(generate_synthetic(spec, seed=0), PIPELINE, synthetic_label_map(spec))
        stats = fit_normalizer_windows(dataset.windows, dataset.channels)
        return dataset.with_windows(apply_normalizer_windows(dataset.windows, dataset.channels, stats))

    @pytest.mark.timeout(900)
    def test_default_model_overfits_training_windows(self):
        """Over 600 windows of three subjects reach 99% training accuracy within 50 epochs."""
        dataset = self.normalized_windows(SyntheticSpec(subjects=3, bouts_per_class=7, **LONG_BOUTS))
        assert len(dataset) >= 600

        spec = ModelSpec.from_architecture(
            Architecture(), dataset.num_channels, dataset.window_length, dataset.num_classes
        )
        model, history = train(build_model(spec), dataset, cfg=TrainConfig(epochs=50))

        assert max(r.train_acc for r in history) >= 0.99
        assert evaluate(model, dataset).metrics.accuracy >= 0.99

    @pytest.mark.timeout(900)
    def test_smoothed_loss_stays_above_target_entropy(self):
        """With smoothing 0.1 over eight classes no epoch of a 50-epoch run goes below H(q)."""
        dataset = self.normalized_windows(
            SyntheticSpec(subjects=3, classes=8, bouts_per_class=2, rate=50.0, bout_seconds=5.0)
        )
        assert dataset.num_classes == 8

        spec = ModelSpec.from_architecture(
            Architecture(), dataset.num_channels, dataset.window_length, dataset.num_classes
        )
        cfg = TrainConfig(epochs=50, label_smoothing=0.1)
        model, history = train(build_model(spec), dataset, cfg=cfg)

        floor = entropy_floor(8, 0.1)
        assert all(r.train_loss >= floor - 1e-9 for r in history)
        assert evaluate_loss(model, dataset, label_smoothing=0.1).loss >= floor - 1e-9
        assert history.final.train_loss < history.records[0].train_loss

    @pytest.mark.timeout(900)
    def test_default_model_leave_one_subject_out(self):
        """LOSO on the three-subject data gives disjoint folds and a mean accuracy of at least 0.9."""
        synthetic = SyntheticSpec(subjects=3, bouts_per_class=7, **LONG_BOUTS)
        recordings = generate_synthetic(synthetic, seed=0)
        report = run_cross_validation(
            recordings,
            PIPELINE,
            Architecture(),
            TrainConfig(epochs=20),
            protocol="loso",
            label_map=synthetic_label_map(synthetic),
        )

        subjects = build_windows(recordings, PIPELINE, synthetic_label_map(synthetic)).subject_ids
        assert len(report.folds) == 3
        for result in report.folds:
            held_out = set(subjects[result.fold.test_indices])
            assert held_out == {result.fold.held_out_subject}
            assert held_out.isdisjoint(subjects[result.fold.train_indices])
        assert report.mean_accuracy >= 0.9


@pytest.mark.integration
class TestCommandRuns:
    """CLI runs are reproducible and replayable from their manifest."""

    def test_train_rerun_is_byte_identical(self, tmp_path, quick_run_config):
        """Two runs with one config write identical artifacts."""
        first, second = tmp_path / "first", tmp_path / "second"
        assert main(["train", "--config", str(quick_run_config), "--out", str(first)]) == 0
        assert main(["train", "--config", str(quick_run_config), "--out", str(second)]) == 0
        assert read_outputs(first) == read_outputs(second)

    @pytest.mark.parametrize("command", ["train", "crossval", "tune"])
    def test_manifest_replay(self, tmp_path, quick_run_config, command):
        """Feeding run_manifest.json back as --config reproduces every artifact."""
        original, replay = tmp_path / "original", tmp_path / "replay"
        extra = ["--protocol", "loso"] if command == "crossval" else []
        assert main([command, "--config", str(quick_run_config), "--out", str(original), *extra]) == 0

        manifest = original / "run_manifest.json"
        assert main([command, "--config", str(manifest), "--out", str(replay)]) == 0
        assert read_outputs(original) == read_outputs(replay)

        first = json.loads(manifest.read_text(encoding="utf-8"))
        again = json.loads((replay / "run_manifest.json").read_text(encoding="utf-8"))
        first["config"].pop("out")
        again["config"].pop("out")
        assert first == again

    def test_crossval_outputs(self, tmp_path, quick_run_config):
        """LOSO writes the report plus per-fold history, metrics and confusion files."""
        out = tmp_path / "cv"
        assert main(["crossval", "--config", str(quick_run_config), "--out", str(out), "--protocol", "loso"]) == 0
        report = json.loads((out / "crossval_report.json").read_text(encoding="utf-8"))
        assert report["fold_count"] == 3
        for fold in ("subject_01", "subject_02", "subject_03"):
            for suffix in ("history.csv", "metrics.json", "confusion.csv"):
                assert (out / f"fold_{fold}_{suffix}").exists()

    def test_tune_outputs(self, tmp_path, quick_run_config):
        """tune writes the best configuration and one row per trial."""
        out = tmp_path / "tune"
        assert main(["tune", "--config", str(quick_run_config), "--out", str(out)]) == 0
        best = json.loads((out / "best_config.json").read_text(encoding="utf-8"))
        assert set(best) == {"trial", "val_macro_f1", "train", "model"}
        assert len((out / "trials.csv").read_text(encoding="utf-8").splitlines()) == 3

    def test_directory_source(self, tmp_path):
        """Recordings written as CSV run through crossval from disk."""
        spec = SyntheticSpec(subjects=2, classes=2, bouts_per_class=1)
        data_dir = tmp_path / "recordings"
        write_directory(generate_synthetic(spec, seed=0), data_dir, synthetic_label_map(spec))
        config = tmp_path / "dir.yaml"
        config.write_text(
            yaml.safe_dump(
                {
                    "data": {"labels": list(synthetic_label_map(spec).names)},
                    "model": {"conv_layers": 1, "filters": 3, "kernel_length": 3, "hidden": 4},
                    "train": {"epochs": 1},
                }
            ),
            encoding="utf-8",
        )
        out = tmp_path / "cv"
        code = main(
            ["crossval", "--config", str(config), "--data-dir", str(data_dir), "--protocol", "loso", "--out", str(out)]
        )
        assert code == 0
        assert json.loads((out / "crossval_report.json").read_text(encoding="utf-8"))["fold_count"] == 2

    def test_summarize_empty_directory(self, tmp_path, capsys):
        """An empty data directory fails in the ingest stage with exit code 1."""
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["summarize", "--data-dir", str(empty), "--out", str(tmp_path / "out")]) == 1
        assert "no recordings found" in capsys.readouterr().err
