"""Conditioning of raw recordings and segmentation into labeled windows."""

from har_chain.preprocess.config import PipelineConfig
from har_chain.preprocess.models import LabelingRule, NormScheme, NormStats, WindowedDataset
from har_chain.preprocess.normalize import (
    apply_normalizer,
    apply_normalizer_windows,
    fit_normalizer,
    fit_normalizer_windows,
)
from har_chain.preprocess.transforms import (
    interpolate_missing,
    prepare_recordings,
    resample,
    resample_grid,
)
from har_chain.preprocess.windowing import sliding_windows, window_count, window_labels

__all__ = [
    "LabelingRule",
    "NormScheme",
    "NormStats",
    "PipelineConfig",
    "WindowedDataset",
    "apply_normalizer",
    "apply_normalizer_windows",
    "fit_normalizer",
    "fit_normalizer_windows",
    "interpolate_missing",
    "prepare_recordings",
    "resample",
    "resample_grid",
    "sliding_windows",
    "window_count",
    "window_labels",
]
