"""har-chain - a deep learning activity recognition chain for wearable inertial sensors.

The package covers the whole chain from raw recordings to validated classifiers:
ingestion, preprocessing, a from-scratch differentiable DeepConvLSTM, training with
label smoothing and MaxUp, metrics and validation protocols.
"""

from har_chain.__about__ import __version__
from har_chain.evaluation import compute_metrics, confusion_matrix, evaluate
from har_chain.ingest import (
    LabelMap,
    SensorRecording,
    SyntheticSpec,
    generate_synthetic,
    load_recording,
    summarize,
    synthetic_label_map,
)
from har_chain.model import Architecture, Model, ModelSpec, build_model, predict
from har_chain.preprocess import PipelineConfig, WindowedDataset, sliding_windows
from har_chain.train import TrainConfig, train
from har_chain.validate import kfold, loso, random_search, run_cross_validation, split_train_val

__all__ = [
    "__version__",
    "Architecture",
    "LabelMap",
    "Model",
    "ModelSpec",
    "PipelineConfig",
    "SensorRecording",
    "SyntheticSpec",
    "TrainConfig",
    "WindowedDataset",
    "build_model",
    "compute_metrics",
    "confusion_matrix",
    "evaluate",
    "generate_synthetic",
    "kfold",
    "load_recording",
    "loso",
    "predict",
    "random_search",
    "run_cross_validation",
    "sliding_windows",
    "split_train_val",
    "summarize",
    "synthetic_label_map",
    "train",
]
