"""Sliding-window segmentation."""

import logging

import numpy as np

from har_chain.ingest.models import LabelMap, SensorRecording
from har_chain.ingest.summary import estimate_rate
from har_chain.preprocess.models import LabelingRule, WindowedDataset

logger = logging.getLogger(__name__)


def window_count(length: int, window: int, stride: int) -> int:
    """Number of windows ``floor((T - W) / S) + 1`` when ``T >= W``, else 0."""
    if length < window:
        return 0
    return (length - window) // stride + 1


def window_labels(
    labels: np.ndarray, starts: np.ndarray, window: int, num_classes: int, rule: LabelingRule
) -> np.ndarray:
    """Derive one label per window.

    ``majority`` takes the most frequent label (ties go to the smaller class id),
    ``last_sample`` the label of the window's final sample.
    """
    if starts.size == 0:
        return np.zeros(0, dtype=np.int64)
    if rule is LabelingRule.LAST_SAMPLE:
        return labels[starts + window - 1].astype(np.int64)
    one_hot = np.zeros((labels.size + 1, num_classes), dtype=np.int64)
    one_hot[np.arange(1, labels.size + 1), labels] = 1
    cumulative = np.cumsum(one_hot, axis=0)
    counts = cumulative[starts + window] - cumulative[starts]
    # argmax returns the first maximum, i.e. the smallest class id on ties
    return counts.argmax(axis=1).astype(np.int64)


def sliding_windows(
    recordings: list[SensorRecording],
    window: int,
    stride: int,
    labeling: LabelingRule | str = LabelingRule.MAJORITY,
    label_map: LabelMap | None = None,
    rate: float | None = None,
) -> WindowedDataset:
    """Cut every recording into windows of ``window`` samples advanced by ``stride``.

    Windows start at ``0, S, 2S, ...`` while ``start + W <= T`` and never span two
    recordings; a recording shorter than the window contributes nothing.

    :param recordings: Normalized, uniformly sampled recordings sharing one channel list.
    :param window: Window length ``W`` in samples (>= 1).
    :param stride: Stride ``S`` in samples (>= 1).
    :param labeling: ``majority`` or ``last_sample``.
    :param label_map: Label map of the dataset; derived from the label ids when omitted.
    :param rate: Sampling rate recorded on the dataset; estimated when omitted.
    """
    if window < 1 or stride < 1:
        raise ValueError(f"window and stride must be >= 1, got W={window}, S={stride}")
    rule = LabelingRule(labeling)
    if label_map is None:
        highest = max((int(r.labels.max()) for r in recordings if r.length), default=1)
        label_map = LabelMap.generic(max(2, highest + 1))
    if rate is None and recordings:
        rate = estimate_rate(recordings)

    channels = recordings[0].channels if recordings else ()
    parts: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    subjects: list[np.ndarray] = []
    starts_all: list[np.ndarray] = []
    origin: list[np.ndarray] = []
    for index, r in enumerate(recordings):
        if r.channels != channels:
            raise ValueError(f"channel order of {r.subject_id} differs: {r.channels} vs {channels}")
        r.check_labels(label_map)
        count = window_count(r.length, window, stride)
        if count == 0:
            logger.warning(
                f"Recording {r.subject_id} has {r.length} samples, shorter than window {window}"
            )
            continue
        starts = np.arange(count, dtype=np.int64) * stride
        view = np.lib.stride_tricks.sliding_window_view(r.samples, window, axis=0)[starts]
        parts.append(np.transpose(view, (0, 2, 1)).copy())
        labels.append(window_labels(r.labels, starts, window, label_map.num_classes, rule))
        subjects.append(np.full(count, r.subject_id, dtype=object))
        starts_all.append(starts)
        origin.append(np.full(count, index, dtype=np.int64))

    if parts:
        windows = np.concatenate(parts, axis=0)
    else:
        windows = np.zeros((0, window, len(channels) or 1), dtype=np.float64)
    dataset = WindowedDataset(
        windows=windows,
        labels=np.concatenate(labels) if labels else np.zeros(0, dtype=np.int64),
        subject_ids=np.concatenate(subjects) if subjects else np.zeros(0, dtype=object),
        window_length=window,
        stride=stride,
        rate=rate,
        label_map=label_map,
        channels=channels,
        starts=np.concatenate(starts_all) if starts_all else None,
        recording_index=np.concatenate(origin) if origin else None,
    )
    logger.info(f"Segmented {len(recordings)} recordings into {len(dataset)} windows (W={window}, S={stride})")
    return dataset
