"""Small builders shared by several test modules."""

import numpy as np

from har_chain.ingest import SensorRecording


def make_recording(
    subject_id: str = "s1",
    length: int = 10,
    channels: tuple[str, ...] = ("acc_x", "acc_y"),
    rate: float = 1.0,
    labels=None,
    seed: int = 0,
) -> SensorRecording:
    """Build a small uniformly sampled recording with random samples."""
    generator = np.random.default_rng(seed)
    return SensorRecording(
        subject_id=subject_id,
        timestamps=np.arange(length) / rate,
        channels=channels,
        samples=generator.normal(size=(length, len(channels))),
        labels=np.zeros(length, dtype=np.int64) if labels is None else labels,
    )
