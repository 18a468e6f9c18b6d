"""Tests for run configuration, artifact writing and the command-line entry point."""

import json

import pandas as pd
import pytest
import yaml
from pydantic import ValidationError

from har_chain.runner import ArtifactWriter, ConfigError, RunConfig, load_run_config
from har_chain.runner.cli import build_parser, collect_overrides, main
from har_chain.runner.config import deep_merge, merge_config, read_config_file


@pytest.fixture
def quick_config(tmp_path):
    """A config file for a tiny synthetic run."""
    path = tmp_path / "quick.yaml"
    path.write_text(
        yaml.safe_dump(
            {
                "data": {"synthetic": {"subjects": 2, "classes": 2, "bouts_per_class": 1}},
                "model": {"conv_layers": 1, "filters": 3, "kernel_length": 3, "hidden": 4},
                "train": {"epochs": 1, "batch_size": 16},
            }
        ),
        encoding="utf-8",
    )
    return path


class TestDeepMerge:
    """Test cases for layered configuration."""

    def test_nested_merge(self):
        """Nested mappings merge, scalars replace."""
        merged = deep_merge({"a": {"x": 1, "y": 2}, "b": 1}, {"a": {"y": 3}, "b": 5})
        assert merged == {"a": {"x": 1, "y": 3}, "b": 5}

    def test_inputs_untouched(self):
        """Merging does not mutate its inputs."""
        base = {"a": {"x": 1}}
        deep_merge(base, {"a": {"x": 2}})
        assert base == {"a": {"x": 1}}

    def test_search_space_replaced_whole(self):
        """A given search space replaces the default one instead of merging into it."""
        base = {"search": {"budget": 3, "space": {"learning_rate": {"uniform": [0, 1]}}}}
        merged = merge_config(base, {"search": {"space": {"hidden": {"choice": [4]}}}})
        assert merged["search"] == {"budget": 3, "space": {"hidden": {"choice": [4]}}}


class TestLoadRunConfig:
    """Test cases for resolving a RunConfig."""

    def test_packaged_defaults(self):
        """Without a file the packaged defaults apply."""
        config = load_run_config()
        assert config.pipeline.window_seconds == 1.0
        assert config.model.filters == 64
        assert config.validation.protocol.value == "holdout"
        assert config.search.space.params["batch_size"].values == [32, 64, 128]

    def test_precedence(self, tmp_path):
        """Flags override the file, the file overrides the defaults."""
        path = tmp_path / "run.yaml"
        path.write_text("seed: 3\ntrain:\n  epochs: 4\n", encoding="utf-8")
        config = load_run_config(path, {"seed": 9})
        assert config.seed == 9
        assert config.train.epochs == 4
        assert config.train.batch_size == 64

    def test_seed_propagates(self):
        """The master seed drives the model and training seeds."""
        config = load_run_config(overrides={"seed": 11, "train": {"seed": 2}})
        assert config.model.seed == 11
        assert config.train.seed == 11

    def test_unknown_key(self, tmp_path):
        """Misspelled keys are rejected."""
        path = tmp_path / "bad.yaml"
        path.write_text("train:\n  epoch: 3\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_run_config(path)

    def test_missing_file(self, tmp_path):
        """A missing config file is a ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.yaml")

    def test_not_a_mapping(self, tmp_path):
        """A config file must hold a mapping."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="mapping"):
            read_config_file(path)

    def test_directory_source_needs_path(self):
        """The directory source requires a directory."""
        with pytest.raises(ValidationError, match="data.directory"):
            load_run_config(overrides={"data": {"source": "directory"}})

    def test_manifest_round_trip(self, tmp_path):
        """A written manifest reloads to the same configuration."""
        config = load_run_config(overrides={"seed": 5, "train": {"label_smoothing": 0.1}})
        writer = ArtifactWriter(tmp_path)
        path = writer.write_manifest("train", "0.0.0", config.model_dump(mode="json"))

        assert read_config_file(path)["seed"] == 5
        assert load_run_config(path) == config


class TestArtifactWriter:
    """Test cases for output files."""

    def test_json_is_canonical(self, tmp_path):
        """JSON has sorted keys, two-space indentation and a trailing newline."""
        writer = ArtifactWriter(tmp_path / "out")
        path = writer.write_json("data.json", {"b": 1, "a": [1.5, 2]})
        assert path.read_text(encoding="utf-8") == '{\n  "a": [\n    1.5,\n    2\n  ],\n  "b": 1\n}\n'

    def test_frame_and_summary(self, tmp_path):
        """Frames are written without index and every file is recorded."""
        writer = ArtifactWriter(tmp_path)
        writer.write_frame("t.csv", pd.DataFrame({"x": [1, 2]}))
        writer.record(tmp_path / "extra.bin")
        assert (tmp_path / "t.csv").read_text(encoding="utf-8") == "x\n1\n2\n"
        assert writer.summary() == ["extra.bin", "t.csv"]

    def test_manifest_layout(self, tmp_path):
        """The manifest names the command, version and configuration."""
        path = ArtifactWriter(tmp_path).write_manifest("crossval", "1.2.3", {"seed": 0})
        assert json.loads(path.read_text(encoding="utf-8")) == {
            "command": "crossval",
            "config": {"seed": 0},
            "version": "1.2.3",
        }


class TestParser:
    """Test cases for argument parsing."""

    def test_overrides_only_given_flags(self):
        """Flags that were not passed do not override anything."""
        args = build_parser().parse_args(["train", "--seed", "4"])
        assert collect_overrides(args) == {"seed": 4}

    def test_crossval_flags(self):
        """Protocol flags land in the validation section."""
        args = build_parser().parse_args(["crossval", "--protocol", "kfold", "--k", "3", "--out", "x"])
        assert collect_overrides(args) == {"out": "x", "validation": {"protocol": "kfold", "k": 3}}

    def test_ablate_flags(self):
        """ablate accepts the same protocol flags as crossval."""
        args = build_parser().parse_args(["ablate", "--protocol", "loso", "--out", "y"])
        assert collect_overrides(args) == {"out": "y", "validation": {"protocol": "loso"}}

    def test_data_dir_selects_directory_source(self):
        """--data-dir switches the data source."""
        args = build_parser().parse_args(["summarize", "--data-dir", "recs"])
        assert collect_overrides(args)["data"] == {"source": "directory", "directory": "recs"}

    def test_space_file(self, tmp_path):
        """--space reads a search space file."""
        path = tmp_path / "space.yaml"
        path.write_text("hidden:\n  choice: [4, 8]\n", encoding="utf-8")
        args = build_parser().parse_args(["tune", "--space", str(path), "--budget", "2"])
        assert collect_overrides(args)["search"] == {"budget": 2, "space": {"hidden": {"choice": [4, 8]}}}


class TestMain:
    """Test cases for exit codes and command dispatch."""

    def test_no_command(self, capsys):
        """Without a subcommand help is printed and the exit code is 2."""
        assert main([]) == 2
        assert "usage" in capsys.readouterr().out

    def test_invalid_overlap(self, tmp_path, capsys):
        """overlap 1.0 is a configuration error (exit 2)."""
        path = tmp_path / "bad.yaml"
        path.write_text("pipeline:\n  overlap: 1.0\n", encoding="utf-8")
        assert main(["train", "--config", str(path), "--out", str(tmp_path / "out")]) == 2
        assert "Error:" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        """A missing config file exits with 2."""
        assert main(["summarize", "--config", str(tmp_path / "nope.yaml")]) == 2

    def test_malformed_yaml(self, tmp_path):
        """Unparsable YAML exits with 2."""
        path = tmp_path / "broken.yaml"
        path.write_text("train: [1, 2\n", encoding="utf-8")
        assert main(["summarize", "--config", str(path)]) == 2

    def test_missing_data_directory(self, tmp_path, capsys):
        """A runtime failure exits with 1 and names the stage."""
        code = main(["summarize", "--data-dir", str(tmp_path / "absent"), "--out", str(tmp_path / "out")])
        assert code == 1
        assert "ingest" in capsys.readouterr().err

    def test_undecodable_recording_names_file(self, tmp_path, capsys):
        """A recording with invalid UTF-8 exits with 1 and the message names the file."""
        data = tmp_path / "data"
        data.mkdir()
        (data / "subject_01.csv").write_bytes(b"subject_id,timestamp,acc_x,label\ns1,0.0,1.0,walk\xff\n")
        code = main(["summarize", "--data-dir", str(data), "--out", str(tmp_path / "out")])
        err = capsys.readouterr().err
        assert code == 1
        assert "subject_01.csv" in err
        assert "invalid UTF-8" in err

    def test_summarize_synthetic(self, tmp_path, quick_config):
        """summarize writes its statistics and a manifest."""
        out = tmp_path / "summary"
        assert main(["summarize", "--config", str(quick_config), "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["num_recordings"] == 2
        assert (out / "class_distribution.csv").exists()
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "summarize"
        assert RunConfig.model_validate(manifest["config"]).out == str(out)

    def test_train_writes_artifacts(self, tmp_path, quick_config):
        """train writes weights, history, metrics, confusion and normalization files."""
        out = tmp_path / "train"
        assert main(["train", "--config", str(quick_config), "--out", str(out), "--synthetic"]) == 0
        for name in (
            "weights.csv",
            "model_spec.json",
            "history.csv",
            "metrics.json",
            "confusion.csv",
            "norm_stats.json",
            "run_manifest.json",
        ):
            assert (out / name).exists(), name

    def test_ablate_writes_comparison(self, tmp_path, quick_config, capsys):
        """ablate writes the comparison table, the per-variant report and a manifest."""
        out = tmp_path / "ablate"
        assert main(["ablate", "--config", str(quick_config), "--out", str(out), "--protocol", "loso"]) == 0
        stdout = capsys.readouterr().out
        assert "label_smoothing+maxup" in stdout
        table = (out / "ablation.csv").read_text(encoding="utf-8").splitlines()
        assert [row.split(",")[0] for row in table[1:]] == [
            "baseline",
            "label_smoothing",
            "maxup",
            "label_smoothing+maxup",
        ]
        report = json.loads((out / "ablation_report.json").read_text(encoding="utf-8"))
        assert report["protocol"] == "loso"
        assert report["fold_count"] == 2
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "ablate"
