"""Per-channel normalization fitted on training data only."""

import numpy as np

from har_chain.ingest.models import SensorRecording
from har_chain.preprocess.models import NormScheme, NormStats

# std / range below this is treated as degenerate and replaced by 1
DEGENERATE_SCALE = 1e-12


def _fit_matrix(values: np.ndarray, channels: tuple[str, ...], scheme: NormScheme) -> NormStats:
    if values.shape[0] == 0:
        raise ValueError("cannot fit normalization statistics on zero samples")
    return NormStats(
        scheme=scheme,
        channels=channels,
        mean=np.nanmean(values, axis=0),
        std=np.nanstd(values, axis=0),
        minimum=np.nanmin(values, axis=0),
        maximum=np.nanmax(values, axis=0),
    )


def _column_order(channels: tuple[str, ...], stats: NormStats) -> np.ndarray:
    if set(channels) != set(stats.channels) or len(channels) != len(stats.channels):
        raise ValueError(f"channel mismatch: data has {channels}, statistics have {stats.channels}")
    return np.array([stats.channels.index(c) for c in channels])


def _apply_matrix(values: np.ndarray, stats: NormStats, order: np.ndarray) -> np.ndarray:
    if stats.scheme is NormScheme.ZSCORE:
        scale = stats.std[order]
        scale = np.where(scale < DEGENERATE_SCALE, 1.0, scale)
        return (values - stats.mean[order]) / scale
    span = stats.maximum[order] - stats.minimum[order]
    span = np.where(span < DEGENERATE_SCALE, 1.0, span)
    return (values - stats.minimum[order]) / span


def fit_normalizer(
    train_recordings: list[SensorRecording], scheme: NormScheme | str = NormScheme.ZSCORE
) -> NormStats:
    """Fit statistics over the concatenation of all training samples.

    Standard deviations are population (not sample) estimates.

    :raises ValueError: On empty input or differing channel sets.
    """
    if not train_recordings:
        raise ValueError("fit_normalizer needs at least one training recording")
    scheme = NormScheme(scheme)
    channels = train_recordings[0].channels
    columns = []
    for r in train_recordings:
        if set(r.channels) != set(channels) or len(r.channels) != len(channels):
            raise ValueError(f"channel mismatch: {r.subject_id} has {r.channels}, expected {channels}")
        columns.append(r.samples[:, [r.channels.index(c) for c in channels]])
    return _fit_matrix(np.concatenate(columns, axis=0), channels, scheme)


def apply_normalizer(recording: SensorRecording, stats: NormStats) -> SensorRecording:
    """Normalize one recording with previously fitted statistics (never refits).

    ``zscore`` maps to ``(x - mean) / std``, ``minmax`` to ``(x - min) / (max - min)``;
    a degenerate std or range is replaced by 1. Timestamps and labels are unchanged.
    """
    order = _column_order(recording.channels, stats)
    return recording.replace(
        samples=_apply_matrix(recording.samples, stats, order), missing=recording.missing
    )


def fit_normalizer_windows(
    windows: np.ndarray, channels: tuple[str, ...], scheme: NormScheme | str = NormScheme.ZSCORE
) -> NormStats:
    """Fit statistics over every sample of an ``(N, W, C)`` window array."""
    windows = np.asarray(windows, dtype=np.float64)
    return _fit_matrix(windows.reshape(-1, windows.shape[-1]), tuple(channels), NormScheme(scheme))


def apply_normalizer_windows(
    windows: np.ndarray, channels: tuple[str, ...], stats: NormStats
) -> np.ndarray:
    """Normalize an ``(N, W, C)`` window array; identical per sample to :func:`apply_normalizer`."""
    order = _column_order(tuple(channels), stats)
    return _apply_matrix(np.asarray(windows, dtype=np.float64), stats, order)
