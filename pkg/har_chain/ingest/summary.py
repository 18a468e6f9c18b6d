"""Dataset analysis: label distribution, bouts, channel statistics."""

import numpy as np

from har_chain.ingest.models import DatasetSummary, LabelMap, SensorRecording


def run_lengths(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run-length encode a label sequence.

    :return: ``(values, lengths)`` of every maximal run of identical labels.
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        return labels[:0], np.zeros(0, dtype=np.int64)
    change = np.flatnonzero(labels[1:] != labels[:-1]) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change, [labels.size]))
    return labels[starts], ends - starts


def estimate_rate(recordings: list[SensorRecording]) -> float | None:
    """Nominal sampling rate as the median of ``1/Δt`` over all recordings."""
    steps = [np.diff(r.timestamps) for r in recordings if r.length >= 2]
    if not steps:
        return None
    return float(np.median(1.0 / np.concatenate(steps)))


def summarize(
    recordings: list[SensorRecording], label_map: LabelMap | None = None
) -> DatasetSummary:
    """Summarize a list of recordings.

    A bout is a maximal run of identical consecutive labels within one recording; its
    length in seconds is its sample count times the recording's median sample spacing.

    :param recordings: Non-empty list sharing one channel set.
    :param label_map: Names classes in the result; ids are used as names without it.
    :raises ValueError: On an empty list or a channel-set mismatch.
    """
    if not recordings:
        raise ValueError("summarize needs at least one recording")
    channels = recordings[0].channels
    for r in recordings[1:]:
        if set(r.channels) != set(channels):
            raise ValueError(
                f"channel-set mismatch: {r.subject_id} has {r.channels}, expected {channels}"
            )

    def name(class_id: int) -> str:
        return label_map.name_of(class_id) if label_map is not None else str(class_id)

    rate = estimate_rate(recordings)
    fallback_dt = 1.0 / rate if rate else 1.0

    counts: dict[int, int] = {}
    bouts: dict[int, list[float]] = {}
    subject_samples: dict[str, int] = {}
    durations = []
    for r in recordings:
        dt = float(np.median(np.diff(r.timestamps))) if r.length >= 2 else fallback_dt
        values, lengths = run_lengths(r.labels)
        for value, length in zip(values.tolist(), lengths.tolist(), strict=True):
            counts[value] = counts.get(value, 0) + length
            bouts.setdefault(value, []).append(length * dt)
        subject_samples[r.subject_id] = subject_samples.get(r.subject_id, 0) + r.length
        durations.append(r.length * dt)

    channel_stats: dict[str, dict[str, float | None]] = {}
    for channel in channels:
        column = np.concatenate([r.samples[:, r.channels.index(channel)] for r in recordings])
        present = column[~np.isnan(column)]
        if present.size == 0:
            channel_stats[channel] = {"min": None, "max": None, "mean": None, "std": None}
        else:
            channel_stats[channel] = {
                "min": float(present.min()),
                "max": float(present.max()),
                "mean": float(present.mean()),
                "std": float(present.std()),
            }

    ordered = sorted(counts)
    return DatasetSummary(
        class_counts={name(k): counts[k] for k in ordered},
        bout_counts={name(k): len(bouts[k]) for k in ordered},
        mean_bout_seconds={name(k): float(np.mean(bouts[k])) for k in ordered},
        channel_stats=channel_stats,
        sampling_rate_hz=rate,
        missing_count=int(sum(r.missing.sum() for r in recordings)),
        total_samples=int(sum(r.length for r in recordings)),
        num_recordings=len(recordings),
        subject_samples=subject_samples,
        mean_recording_seconds=float(np.mean(durations)),
    )
