"""Command-line interface for the activity recognition chain.

Subcommands ``summarize``, ``train``, ``crossval``, ``ablate`` and ``tune`` each resolve a
:class:`~har_chain.runner.config.RunConfig`, run their part of the chain and write
artifacts plus a ``run_manifest.json`` into the output directory.
"""

import argparse
import logging
import sys
from typing import Any

import yaml
from pydantic import ValidationError

from har_chain.__about__ import __version__
from har_chain.exceptions import HarChainError, StageError
from har_chain.ingest import (
    LabelMap,
    SensorRecording,
    generate_synthetic,
    load_directory,
    summarize,
    synthetic_label_map,
)
from har_chain.model.network import SPEC_FILE, WEIGHTS_FILE
from har_chain.runner.artifacts import ArtifactWriter
from har_chain.runner.config import ConfigError, RunConfig, load_run_config
from har_chain.validate import (
    build_windows,
    run_ablation,
    random_search,
    run_cross_validation,
    spec_for,
    split_train_val,
)
from har_chain.validate.crossval import run_fold
from har_chain.validate.search import SearchSpace, default_search_space

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_CONFIG_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="har-chain", description="Deep learning activity recognition chain for inertial sensor data"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to a YAML or JSON run config (or a run_manifest.json)")
    common.add_argument("--seed", type=int, help="Master seed for every random stream")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--synthetic", action="store_true", help="Use the synthetic data generator")
    common.add_argument("--data-dir", help="Directory of per-subject recording CSVs")
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: INFO)",
    )

    protocol = argparse.ArgumentParser(add_help=False)
    protocol.add_argument("--protocol", choices=["holdout", "kfold", "loso"], help="Validation protocol")
    protocol.add_argument("--k", type=int, help="Number of folds for kfold")

    subparsers.add_parser(
        "summarize", parents=[common], help="Write per-class and per-channel dataset statistics"
    )
    subparsers.add_parser("train", parents=[common], help="Train on a train/validation split")
    subparsers.add_parser(
        "crossval", parents=[common, protocol], help="Run holdout, k-fold or leave-one-subject-out"
    )
    subparsers.add_parser(
        "ablate",
        parents=[common, protocol],
        help="Compare the protocol with and without label smoothing and MaxUp",
    )
    tune_parser = subparsers.add_parser("tune", parents=[common], help="Random-search hyperparameters")
    tune_parser.add_argument("--budget", type=int, help="Number of random trials")
    tune_parser.add_argument("--space", help="Search space YAML/JSON file")
    return parser


def collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Translate flags into a nested override mapping (only flags that were given)."""
    overrides: dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if getattr(args, "data_dir", None):
        overrides["data"] = {"source": "directory", "directory": args.data_dir}
    elif args.synthetic:
        overrides["data"] = {"source": "synthetic"}
    validation = {}
    if getattr(args, "protocol", None):
        validation["protocol"] = args.protocol
    if getattr(args, "k", None) is not None:
        validation["k"] = args.k
    if validation:
        overrides["validation"] = validation
    search: dict[str, Any] = {}
    if getattr(args, "budget", None) is not None:
        search["budget"] = args.budget
    if getattr(args, "space", None):
        with open(args.space, encoding="utf-8") as f:
            search["space"] = yaml.safe_load(f)
    if search:
        overrides["search"] = search
    return overrides


def load_data(config: RunConfig) -> tuple[list[SensorRecording], LabelMap]:
    """Load the configured recordings: a CSV directory or the synthetic generator."""
    data = config.data
    if data.source == "directory":
        label_map = LabelMap.from_names(data.labels) if data.labels else LabelMap.rwhar()
        try:
            recordings = load_directory(data.directory, label_map)
        except (HarChainError, OSError) as e:
            raise StageError("ingest", e) from e
        return recordings, label_map
    recordings = generate_synthetic(data.synthetic, config.seed)
    logger.info(f"Generated {len(recordings)} synthetic recordings (seed {config.seed})")
    return recordings, synthetic_label_map(data.synthetic)


def _manifest(writer: ArtifactWriter, command: str, config: RunConfig) -> None:
    writer.write_manifest(command, __version__, config.model_dump(mode="json"))


def cmd_summarize(config: RunConfig) -> ArtifactWriter:
    """Write ``summary.json`` and ``class_distribution.csv``."""
    recordings, label_map = load_data(config)
    summary = summarize(recordings, label_map)
    writer = ArtifactWriter(config.out)
    writer.write_json("summary.json", summary.to_dict())
    writer.write_frame("class_distribution.csv", summary.class_distribution_frame())
    _manifest(writer, "summarize", config)
    print(f"Recordings: {summary.num_recordings}")
    print(f"Samples: {summary.total_samples}")
    print(f"Classes present: {len(summary.class_counts)}")
    return writer


def cmd_train(config: RunConfig) -> ArtifactWriter:
    """Train on a train/validation split; write weights, history, metrics and statistics."""
    recordings, label_map = load_data(config)
    dataset = build_windows(recordings, config.pipeline, label_map)
    if len(dataset) == 0:
        raise StageError("window", ValueError("no windows produced; recordings shorter than the window"))
    spec = spec_for(dataset, config.model)
    validation = config.validation
    fold = split_train_val(dataset, validation.val_fraction, config.seed, validation.grouping)
    result, model = run_fold(dataset, fold, spec, config.train, config.pipeline)

    writer = ArtifactWriter(config.out)
    model.save(writer.base_path)
    writer.record([writer.path(WEIGHTS_FILE), writer.path(SPEC_FILE)])
    writer.record(result.history.write_csv(writer.path("history.csv")))
    writer.write_json("metrics.json", result.metrics.to_dict())
    writer.record(result.confusion.write_csv(writer.path("confusion.csv")))
    writer.write_json("norm_stats.json", result.norm_stats.to_dict())
    _manifest(writer, "train", config)
    final = result.history.final
    print(f"Windows: {len(dataset)} (train {fold.train_indices.size}, val {fold.test_indices.size})")
    print(f"Final train accuracy: {final.train_acc:.4f}")
    print(f"Validation accuracy: {result.metrics.accuracy:.4f}, macro F1: {result.metrics.macro_f1:.4f}")
    return writer


def cmd_crossval(config: RunConfig) -> ArtifactWriter:
    """Run the configured protocol; write the aggregate report and per-fold files."""
    recordings, label_map = load_data(config)
    validation = config.validation
    report = run_cross_validation(
        recordings,
        config.pipeline,
        config.model,
        config.train,
        protocol=validation.protocol,
        k=validation.k,
        val_fraction=validation.val_fraction,
        grouping=validation.grouping,
        label_map=label_map,
    )
    writer = ArtifactWriter(config.out)
    writer.record(report.write(writer.base_path))
    _manifest(writer, "crossval", config)
    print(f"Protocol: {report.protocol.value} ({len(report.folds)} folds)")
    print(f"Accuracy: {report.mean_accuracy:.4f} +/- {report.std_accuracy:.4f}")
    print(f"Macro F1: {report.mean_macro_f1:.4f} +/- {report.std_macro_f1:.4f}")
    return writer


def cmd_ablate(config: RunConfig) -> ArtifactWriter:
    """Run the protocol per regularizer setting; write ``ablation.csv`` and ``ablation_report.json``."""
    recordings, label_map = load_data(config)
    validation = config.validation
    report = run_ablation(
        recordings,
        config.pipeline,
        config.model,
        config.train,
        protocol=validation.protocol,
        k=validation.k,
        val_fraction=validation.val_fraction,
        grouping=validation.grouping,
        label_map=label_map,
    )
    writer = ArtifactWriter(config.out)
    writer.record(report.write(writer.base_path))
    _manifest(writer, "ablate", config)
    print(f"Protocol: {report.protocol.value} ({len(report.baseline.report.folds)} folds)")
    for variant in report.variants:
        print(
            f"{variant.name:<24} accuracy {variant.report.mean_accuracy:.4f}  "
            f"macro F1 {variant.report.mean_macro_f1:.4f}"
        )
    return writer


def cmd_tune(config: RunConfig) -> ArtifactWriter:
    """Random search; write ``best_config.json`` and ``trials.csv``."""
    recordings, label_map = load_data(config)
    dataset = build_windows(recordings, config.pipeline, label_map)
    space: SearchSpace = config.search.space if config.search else default_search_space()
    budget = config.search.budget if config.search else 10
    validation = config.validation
    result = random_search(
        space,
        budget,
        dataset,
        config.pipeline,
        config.model,
        config.train,
        seed=config.seed,
        val_fraction=validation.val_fraction,
        grouping=validation.grouping,
    )
    writer = ArtifactWriter(config.out)
    writer.write_json(
        "best_config.json",
        {
            "trial": result.best_trial,
            "val_macro_f1": result.best_score,
            "train": result.best_train_config.model_dump(mode="json"),
            "model": result.best_model_spec.architecture.model_dump(mode="json"),
        },
    )
    writer.write_frame("trials.csv", result.to_frame())
    _manifest(writer, "tune", config)
    print(f"Trials: {len(result.trials)}")
    print(f"Best trial: {result.best_trial} (macro F1 {result.best_score:.4f})")
    return writer


COMMANDS = {
    "summarize": cmd_summarize,
    "train": cmd_train,
    "crossval": cmd_crossval,
    "ablate": cmd_ablate,
    "tune": cmd_tune,
}


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point.

    :return: 0 on success, 2 on a configuration error, 1 on any other failure.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG_ERROR

    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_run_config(args.config, collect_overrides(args))
    except (ValidationError, yaml.YAMLError, ConfigError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        writer = COMMANDS[args.command](config)
    except Exception as e:
        logger.debug("Command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    print(f"Artifacts written to {writer.base_path}: {', '.join(writer.summary())}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
