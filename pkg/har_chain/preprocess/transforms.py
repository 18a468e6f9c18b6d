"""Gap filling and resampling of raw recordings."""

import logging

import numpy as np

from har_chain.exceptions import RecordingFormatError
from har_chain.ingest.models import SensorRecording

logger = logging.getLogger(__name__)

# absorbs float error when (t_last - t_0) * rate lands just below an integer
GRID_TOLERANCE = 1e-9


def interpolate_missing(recording: SensorRecording) -> SensorRecording:
    """Fill missing values per channel.

    Interior gaps are linearly interpolated against the timestamps, leading and
    trailing gaps take the nearest present value. Present values are left untouched.

    :raises RecordingFormatError: If a channel has no present value at all.
    """
    if not recording.has_missing:
        return recording

    filled = np.array(recording.samples, copy=True)
    t = recording.timestamps
    for j, channel in enumerate(recording.channels):
        gaps = recording.missing[:, j]
        if not gaps.any():
            continue
        present = ~gaps
        if not present.any():
            raise RecordingFormatError(
                f"channel '{channel}' of {recording.subject_id} has no present values"
            )
        filled[gaps, j] = np.interp(t[gaps], t[present], recording.samples[present, j])

    logger.debug(
        f"Interpolated {int(recording.missing.sum())} missing values for {recording.subject_id}"
    )
    return recording.replace(samples=filled, missing=np.zeros_like(recording.missing))


def resample_grid(t_first: float, t_last: float, target_rate: float) -> np.ndarray:
    """Uniform grid ``t_0 + k / rate`` for ``k = 0..floor((t_last - t_0) * rate)``."""
    count = int(np.floor((t_last - t_first) * target_rate + GRID_TOLERANCE)) + 1
    return t_first + np.arange(count, dtype=np.float64) / target_rate


def nearest_indices(source: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Index of the nearest source timestamp for every grid point; ties pick the earlier."""
    right = np.clip(np.searchsorted(source, grid, side="left"), 0, source.size - 1)
    left = np.clip(right - 1, 0, source.size - 1)
    take_left = np.abs(grid - source[left]) <= np.abs(source[right] - grid)
    return np.where(take_left, left, right)


def resample(recording: SensorRecording, target_rate: float) -> SensorRecording:
    """Linearly interpolate all channels onto a uniform grid.

    Labels on the grid come from the nearest original sample.

    :raises ValueError: If the recording still has missing values, has fewer than two
        samples, or ``target_rate`` is not positive.
    """
    if target_rate <= 0:
        raise ValueError(f"target_rate must be > 0, got {target_rate}")
    if recording.length < 2:
        raise ValueError(
            f"resampling needs at least 2 samples, {recording.subject_id} has {recording.length}"
        )
    if recording.has_missing:
        raise ValueError(
            f"{recording.subject_id} has missing values; run interpolate_missing first"
        )

    t = recording.timestamps
    grid = resample_grid(float(t[0]), float(t[-1]), target_rate)
    samples = np.column_stack(
        [np.interp(grid, t, recording.samples[:, j]) for j in range(recording.num_channels)]
    )
    labels = recording.labels[nearest_indices(t, grid)]
    return recording.replace(
        timestamps=grid,
        samples=samples,
        labels=labels,
        missing=np.zeros(samples.shape, dtype=bool),
    )


def prepare_recordings(
    recordings: list[SensorRecording], target_rate: float | None
) -> list[SensorRecording]:
    """Interpolate then (optionally) resample every recording."""
    prepared = []
    for recording in recordings:
        recording = interpolate_missing(recording)
        if target_rate is not None:
            recording = resample(recording, target_rate)
        prepared.append(recording)
    return prepared
