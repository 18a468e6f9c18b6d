"""Cross-validation driver with per-fold normalization."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from har_chain.evaluation import ConfusionMatrix, MetricsReport, evaluate
from har_chain.exceptions import HarChainError, StageError
from har_chain.ingest.models import LabelMap, SensorRecording
from har_chain.ingest.summary import estimate_rate
from har_chain.model.network import Model, build_model
from har_chain.model.spec import Architecture, ModelSpec
from har_chain.preprocess.config import PipelineConfig
from har_chain.preprocess.models import NormStats, WindowedDataset
from har_chain.preprocess.normalize import apply_normalizer_windows, fit_normalizer_windows
from har_chain.preprocess.transforms import prepare_recordings
from har_chain.preprocess.windowing import sliding_windows
from har_chain.train.config import TrainConfig, TrainHistory
from har_chain.train.loop import train
from har_chain.utils.jsonio import write_json
from har_chain.validate.protocols import FoldSpec, Grouping, Protocol, make_folds

logger = logging.getLogger(__name__)


@dataclass
class FoldResult:
    fold: FoldSpec
    metrics: MetricsReport
    confusion: ConfusionMatrix
    history: TrainHistory
    norm_stats: NormStats

    def to_dict(self) -> dict[str, Any]:
        return {**self.fold.to_dict(), "metrics": self.metrics.to_dict()}


@dataclass
class CrossValReport:
    """Per-fold results in fold order plus mean and population std across folds."""

    protocol: Protocol
    folds: list[FoldResult]

    def _scores(self, name: str) -> np.ndarray:
        return np.array([getattr(f.metrics, name) for f in self.folds])

    @property
    def mean_accuracy(self) -> float:
        return float(self._scores("accuracy").mean())

    @property
    def std_accuracy(self) -> float:
        return float(self._scores("accuracy").std())

    @property
    def mean_macro_f1(self) -> float:
        return float(self._scores("macro_f1").mean())

    @property
    def std_macro_f1(self) -> float:
        return float(self._scores("macro_f1").std())

    def to_dict(self) -> dict[str, Any]:
        return {
            "protocol": self.protocol.value,
            "fold_count": len(self.folds),
            "aggregate": {
                "mean_accuracy": self.mean_accuracy,
                "std_accuracy": self.std_accuracy,
                "mean_macro_f1": self.mean_macro_f1,
                "std_macro_f1": self.std_macro_f1,
            },
            "folds": [f.to_dict() for f in self.folds],
        }

    def write(self, directory: str | Path) -> list[Path]:
        """Write ``crossval_report.json`` and the per-fold history, metrics and confusion files."""
        directory = Path(directory)
        written = [write_json(directory / "crossval_report.json", self.to_dict())]
        for f in self.folds:
            fid = f.fold.fold_id
            written.append(f.history.write_csv(directory / f"fold_{fid}_history.csv"))
            written.append(write_json(directory / f"fold_{fid}_metrics.json", f.metrics.to_dict()))
            written.append(f.confusion.write_csv(directory / f"fold_{fid}_confusion.csv"))
        return written


@dataclass
class FoldData:
    train: WindowedDataset
    test: WindowedDataset
    norm_stats: NormStats


def normalize_fold(dataset: WindowedDataset, fold: FoldSpec, scheme) -> FoldData:
    """Fit statistics on the fold's training windows and apply them to both sides."""
    fold.check(len(dataset))
    train_ds = dataset.subset(fold.train_indices)
    test_ds = dataset.subset(fold.test_indices)
    stats = fit_normalizer_windows(train_ds.windows, dataset.channels, scheme)
    return FoldData(
        train=train_ds.with_windows(apply_normalizer_windows(train_ds.windows, dataset.channels, stats)),
        test=test_ds.with_windows(apply_normalizer_windows(test_ds.windows, dataset.channels, stats)),
        norm_stats=stats,
    )


def build_windows(
    recordings: list[SensorRecording],
    pipeline: PipelineConfig,
    label_map: LabelMap | None = None,
) -> WindowedDataset:
    """Interpolate, resample and window raw recordings (normalization happens per fold)."""
    try:
        prepared = prepare_recordings(recordings, pipeline.target_rate)
    except (HarChainError, ValueError) as e:
        raise StageError("preprocess", e) from e
    rate = pipeline.target_rate or estimate_rate(prepared)
    if rate is None:
        raise StageError("window", ValueError("cannot determine a sampling rate"))
    try:
        return sliding_windows(
            prepared,
            pipeline.window_samples(rate),
            pipeline.stride_samples(rate),
            pipeline.labeling,
            label_map,
            rate,
        )
    except (HarChainError, ValueError) as e:
        raise StageError("window", e) from e


def spec_for(dataset: WindowedDataset, base: Architecture) -> ModelSpec:
    """``base`` with input, window and class dimensions taken from ``dataset``."""
    architecture = base.architecture if isinstance(base, ModelSpec) else base
    return ModelSpec.from_architecture(
        architecture, dataset.num_channels, dataset.window_length, dataset.num_classes
    )


def run_fold(
    dataset: WindowedDataset,
    fold: FoldSpec,
    spec: ModelSpec,
    train_cfg: TrainConfig,
    pipeline: PipelineConfig,
) -> tuple[FoldResult, Model]:
    data = normalize_fold(dataset, fold, pipeline.scheme)
    if len(data.test) and np.setdiff1d(data.test.labels, data.train.labels).size:
        logger.warning(f"Fold {fold.fold_id}: test set holds classes never seen in training")
    try:
        model, history = train(build_model(spec), data.train, data.test, train_cfg)
        result = evaluate(model, data.test)
    except (HarChainError, ValueError, FloatingPointError) as e:
        raise StageError("train", e, fold=fold.fold_id) from e
    return (
        FoldResult(
            fold=fold,
            metrics=result.metrics,
            confusion=result.confusion,
            history=history,
            norm_stats=data.norm_stats,
        ),
        model,
    )


def run_cross_validation(
    recordings: list[SensorRecording] | WindowedDataset,
    pipeline: PipelineConfig,
    model_spec: Architecture,
    train_cfg: TrainConfig,
    protocol: Protocol | str = Protocol.LOSO,
    k: int = 5,
    val_fraction: float = 0.2,
    grouping: Grouping | str = Grouping.SUBJECT,
    label_map: LabelMap | None = None,
) -> CrossValReport:
    """Run a validation protocol end to end.

    Windows are cut once; inside every fold the normalizer is fitted on the training
    windows only, a fresh model is built from ``model_spec`` (input, window and class
    dimensions taken from the data), trained and evaluated on the test windows. Folds
    run in order, so the report does not depend on scheduling.

    :raises ProtocolError: If the protocol cannot be applied to the data.
    :raises StageError: If a fold fails; carries the stage name and fold id.
    """
    protocol = Protocol(protocol)
    dataset = (
        recordings
        if isinstance(recordings, WindowedDataset)
        else build_windows(recordings, pipeline, label_map)
    )
    if len(dataset) == 0:
        raise StageError("window", ValueError("no windows produced; recordings shorter than the window"))
    spec = spec_for(dataset, model_spec)
    folds = make_folds(dataset, protocol, k, train_cfg.seed, val_fraction, grouping)
    logger.info(f"Running {protocol.value} with {len(folds)} fold(s) over {len(dataset)} windows")

    results = []
    for fold in folds:
        logger.info(
            f"Fold {fold.fold_id}: {fold.train_indices.size} train / {fold.test_indices.size} test windows"
        )
        result, _ = run_fold(dataset, fold, spec, train_cfg, pipeline)
        logger.info(
            f"Fold {fold.fold_id}: accuracy={result.metrics.accuracy:.4f} macro_f1={result.metrics.macro_f1:.4f}"
        )
        results.append(result)
    return CrossValReport(protocol=protocol, folds=results)
