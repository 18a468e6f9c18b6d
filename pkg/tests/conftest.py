"""
Pytest configuration and fixtures for har-chain tests.
"""

from pathlib import Path

import numpy as np
import pytest

from har_chain.ingest import LabelMap, SyntheticSpec, generate_synthetic, synthetic_label_map
from har_chain.model import Architecture, ModelSpec
from har_chain.preprocess import sliding_windows
from har_chain.train import TrainConfig


@pytest.fixture
def rng():
    """Seeded generator for property-style loops."""
    return np.random.default_rng(1234)


@pytest.fixture
def abc_label_map():
    """Three-class label map with short names."""
    return LabelMap.from_names(["A", "B", "C"])


@pytest.fixture
def write_csv(tmp_path):
    """Write raw CSV text to a file and return its path."""

    def _write(text: str, name: str = "subject.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def small_synthetic_spec():
    """Three subjects, three classes, short bouts."""
    return SyntheticSpec(subjects=3, classes=3, rate=50.0, bout_seconds=2.0, bouts_per_class=2)


@pytest.fixture
def synthetic_recordings(small_synthetic_spec):
    """Recordings generated from the small synthetic spec with seed 0."""
    return generate_synthetic(small_synthetic_spec, seed=0)


@pytest.fixture
def synthetic_labels(small_synthetic_spec):
    return synthetic_label_map(small_synthetic_spec)


@pytest.fixture
def synthetic_windows(synthetic_recordings, synthetic_labels):
    """One-second windows with half overlap at 50 Hz."""
    return sliding_windows(synthetic_recordings, 50, 25, "majority", synthetic_labels, 50.0)


@pytest.fixture
def small_architecture():
    """A narrow architecture that trains in seconds."""
    return Architecture(conv_layers=2, filters=8, kernel_length=5, hidden=16)


@pytest.fixture
def fast_train_config():
    """Few epochs, no regularization."""
    return TrainConfig(epochs=3, batch_size=16, learning_rate=3e-3)


@pytest.fixture
def tiny_spec():
    """The gradient-check architecture: C=2, W=12, L=1, F=3, Kt=3, H=4, K=2."""
    return ModelSpec(
        input_channels=2,
        window_length=12,
        num_classes=2,
        conv_layers=1,
        filters=3,
        kernel_length=3,
        hidden=4,
    )
