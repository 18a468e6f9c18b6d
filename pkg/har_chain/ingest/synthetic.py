"""Synthetic stand-in for a wearable HAR corpus.

Each class emits a sinusoid of a class-specific frequency on every channel, with
subject-specific phase and gain plus Gaussian noise, so classes are separable
independently of the subject.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from har_chain.ingest.models import LabelMap, SensorRecording
from har_chain.utils.seeding import derive_rng

logger = logging.getLogger(__name__)


class SyntheticSpec(BaseModel):
    """Shape of a synthetic corpus."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    subjects: int = Field(3, ge=1)
    classes: int = Field(3, ge=2)
    rate: float = Field(50.0, gt=0)
    bout_seconds: float = Field(2.0, gt=0)
    bouts_per_class: int = Field(3, ge=1)
    channel_count: int = Field(3, ge=1)
    noise: float = Field(0.1, ge=0)
    missing_fraction: float = Field(0.0, ge=0, lt=1)

    @property
    def bout_samples(self) -> int:
        return max(1, round(self.bout_seconds * self.rate))

    @property
    def samples_per_recording(self) -> int:
        return self.bouts_per_class * self.classes * self.bout_samples


def channel_names(count: int) -> tuple[str, ...]:
    """``acc_x, acc_y, acc_z`` followed by ``ch_3, ch_4, ...``."""
    axes = ("acc_x", "acc_y", "acc_z")
    return tuple(axes[j] if j < len(axes) else f"ch_{j}" for j in range(count))


def class_frequency(class_id: int) -> float:
    """Signal frequency (Hz) emitted by a class."""
    return 1.0 + class_id


def generate_synthetic(spec: SyntheticSpec, seed: int) -> list[SensorRecording]:
    """Generate one recording per subject.

    Deterministic for a fixed ``(spec, seed)``; each recording has
    ``bouts_per_class * classes * round(bout_seconds * rate)`` samples.

    :param spec: Corpus shape.
    :param seed: Master seed.
    :return: Recordings ordered by subject id.
    """
    bout = spec.bout_samples
    channels = channel_names(spec.channel_count)
    recordings = []
    for s in range(spec.subjects):
        rng = derive_rng(seed, "synthetic", s)
        order = rng.permutation(np.repeat(np.arange(spec.classes), spec.bouts_per_class))
        labels = np.repeat(order, bout)
        total = labels.shape[0]
        t = np.arange(total, dtype=np.float64) / spec.rate

        phase = rng.uniform(0.0, 2.0 * np.pi, size=spec.channel_count)
        gain = rng.uniform(0.8, 1.2, size=spec.channel_count)
        freq = np.array([class_frequency(k) for k in labels])
        amplitude = gain * (1.0 + 0.1 * np.arange(spec.channel_count))
        signal = np.sin(2.0 * np.pi * freq[:, None] * t[:, None] + phase[None, :]) * amplitude
        samples = signal + rng.normal(0.0, spec.noise, size=signal.shape)

        missing = None
        if spec.missing_fraction > 0:
            missing = rng.random(samples.shape) < spec.missing_fraction
            # keep at least one present value per channel
            missing[0, missing.all(axis=0)] = False

        recordings.append(
            SensorRecording(
                subject_id=f"subject_{s + 1:02d}",
                timestamps=t,
                channels=channels,
                samples=samples,
                labels=labels,
                missing=missing,
            )
        )
    logger.info(
        f"Generated {spec.subjects} synthetic recordings: {spec.classes} classes, "
        f"T={spec.samples_per_recording}, C={spec.channel_count}, rate={spec.rate} Hz"
    )
    return recordings


def synthetic_label_map(spec: SyntheticSpec) -> LabelMap:
    """Label map matching a synthetic corpus (RWHAR names for 8 classes)."""
    return LabelMap.generic(spec.classes)
