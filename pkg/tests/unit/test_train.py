"""Tests for augmentation, label smoothing, MaxUp and the training loop."""

import logging

import numpy as np
import pytest
from pydantic import ValidationError

from har_chain.exceptions import NonFiniteLossError
from har_chain.ingest import LabelMap
from har_chain.model import build_model, model_forward
from har_chain.numcore import softmax_cross_entropy
from har_chain.preprocess import WindowedDataset
from har_chain.train import (
    EpochRecord,
    TrainConfig,
    TrainHistory,
    augment,
    batch_maxup_loss,
    entropy_floor,
    evaluate_loss,
    make_copies,
    maxup_loss,
    smooth_label_matrix,
    smooth_labels,
    train,
)


def separable_dataset(size: int, seed: int = 0) -> WindowedDataset:
    """Windows of shape (12, 2) whose class shifts the mean of every sample."""
    generator = np.random.default_rng(seed)
    labels = np.arange(size) % 2
    windows = generator.normal(size=(size, 12, 2)) + 1.5 * labels[:, None, None]
    subjects = [f"s{i % 3}" for i in range(size)]
    return WindowedDataset(windows, labels, subjects, 12, 6, 1.0, LabelMap.generic(2), ("x", "y"))


class TestLabelSmoothing:
    """Test cases for smoothed targets."""

    def test_eight_class_constants(self):
        """eps=0.1, K=8 gives 0.9125 on the true class and 0.0125 elsewhere."""
        target = smooth_labels(3, 8, 0.1)
        assert target[3] == pytest.approx(0.9125)
        assert np.delete(target, 3) == pytest.approx([0.0125] * 7)
        assert target.sum() == pytest.approx(1.0)

    def test_zero_is_one_hot(self):
        """eps=0 reproduces one-hot targets."""
        assert smooth_labels(1, 3, 0.0).tolist() == [0.0, 1.0, 0.0]

    def test_matrix_matches_rows(self):
        """The matrix form stacks the per-label vectors."""
        matrix = smooth_label_matrix(np.array([2, 0]), 4, 0.2)
        np.testing.assert_array_equal(matrix[0], smooth_labels(2, 4, 0.2))
        np.testing.assert_array_equal(matrix[1], smooth_labels(0, 4, 0.2))

    @pytest.mark.parametrize("epsilon", [-0.1, 1.0])
    def test_invalid_epsilon(self, epsilon):
        """eps must lie in [0, 1)."""
        with pytest.raises(ValueError):
            smooth_labels(0, 3, epsilon)

    def test_entropy_floor(self):
        """The floor is the entropy of the smoothed target."""
        target = smooth_labels(0, 8, 0.1)
        assert entropy_floor(8, 0.1) == pytest.approx(float(-(target * np.log(target)).sum()))
        assert entropy_floor(8, 0.0) == 0.0


class TestAugment:
    """Test cases for jitter, scaling and copy generation."""

    def test_jitter_statistics(self):
        """Jitter adds zero-mean noise with the configured std."""
        window = np.ones((5000, 3))
        noise = augment(window, "jitter", np.random.default_rng(0), jitter_sigma=0.05) - window
        assert abs(noise.mean()) < 0.005
        assert noise.std() == pytest.approx(0.05, rel=0.05)

    def test_scale_is_per_channel(self):
        """Scaling multiplies every sample of a channel by the same factor."""
        window = np.random.default_rng(1).uniform(1, 2, size=(40, 3))
        scaled = augment(window, "scale", np.random.default_rng(0), scale_sigma=0.1)
        ratios = scaled / window
        np.testing.assert_allclose(ratios, np.broadcast_to(ratios[0], ratios.shape))

    def test_input_untouched(self):
        """Augmentation returns a new array."""
        window = np.zeros((4, 2))
        augment(window, "jitter", np.random.default_rng(0))
        assert np.all(window == 0)

    def test_copies_start_with_identity(self):
        """Copy 0 is the unmodified window."""
        window = np.random.default_rng(0).normal(size=(10, 2))
        copies = make_copies(window, 4, np.random.default_rng(5))
        assert copies.shape == (4, 10, 2)
        np.testing.assert_array_equal(copies[0], window)
        assert not np.array_equal(copies[1], window)

    def test_copies_are_nested(self):
        """The copies for m are a prefix of the copies for m + 1 on the same stream."""
        window = np.random.default_rng(0).normal(size=(10, 2))
        shorter = make_copies(window, 3, np.random.default_rng(9))
        longer = make_copies(window, 4, np.random.default_rng(9))
        np.testing.assert_array_equal(shorter, longer[:3])

    def test_invalid_m(self):
        """At least one copy is required."""
        with pytest.raises(ValueError):
            make_copies(np.zeros((3, 1)), 0, np.random.default_rng(0))


class TestMaxUp:
    """Test cases for the worst-of-m loss."""

    def test_single_copy_equals_plain_loss(self, tiny_spec, rng):
        """m=1 is exactly the plain cross entropy."""
        model = build_model(tiny_spec)
        windows = rng.normal(size=(5, 12, 2))
        targets = smooth_label_matrix(np.array([0, 1, 1, 0, 1]), 2, 0.1)

        loss, _ = batch_maxup_loss(model, windows, targets, 1, np.random.default_rng(0))
        plain = softmax_cross_entropy(model_forward(model, windows), targets)
        assert loss.item() == plain.item()

    def test_more_copies_never_lower(self, tiny_spec, rng):
        """With a shared stream, loss(m + 1) >= loss(m) for every window."""
        model = build_model(tiny_spec)
        for _ in range(100):
            window = rng.normal(size=(12, 2))
            target = smooth_labels(int(rng.integers(2)), 2, 0.0)
            seed = int(rng.integers(2**31))
            losses = [
                maxup_loss(model, window, target, m, np.random.default_rng(seed)).item()
                for m in range(1, 5)
            ]
            assert all(b >= a - 1e-12 for a, b in zip(losses, losses[1:]))

    def test_batched_matches_single_window(self, tiny_spec, rng):
        """The batched loss is the mean of the per-window worst copies."""
        model = build_model(tiny_spec)
        windows = rng.normal(size=(3, 12, 2))
        targets = smooth_label_matrix(np.array([0, 1, 0]), 2, 0.0)

        batched, identity = batch_maxup_loss(model, windows, targets, 3, np.random.default_rng(4))
        stream = np.random.default_rng(4)
        single = [maxup_loss(model, windows[i], targets[i], 3, stream).item() for i in range(3)]
        assert batched.item() == pytest.approx(np.mean(single), abs=1e-12)
        np.testing.assert_allclose(identity, model_forward(model, windows).values, atol=1e-12)

    def test_only_worst_copy_gets_gradient(self, tiny_spec, rng):
        """The gradient equals the gradient of the plain loss on the maximizing copy."""
        model = build_model(tiny_spec)
        window = rng.normal(size=(12, 2))
        target = smooth_labels(1, 2, 0.0)

        maxup_loss(model, window, target, 4, np.random.default_rng(2)).backward()
        maxup_grad = {n: p.grad.copy() for n, p in model.parameters().items()}

        copies = make_copies(window, 4, np.random.default_rng(2))
        model.zero_grad()
        rows = [
            softmax_cross_entropy(model_forward(model, c[None]), target[None]).item() for c in copies
        ]
        model.zero_grad()
        worst = copies[int(np.argmax(rows))]
        softmax_cross_entropy(model_forward(model, worst[None]), target[None]).backward()
        for name, p in model.parameters().items():
            np.testing.assert_allclose(maxup_grad[name], p.grad, rtol=1e-9, atol=1e-12)


class TestTrainHistory:
    """Test cases for the history container."""

    def test_frame_and_csv(self, tmp_path):
        """Absent validation values are written as empty cells."""
        history = TrainHistory()
        history.append(EpochRecord(epoch=1, train_loss=0.5, train_acc=0.75))
        path = history.write_csv(tmp_path / "history.csv")
        assert path.read_text(encoding="utf-8").splitlines() == [
            "epoch,train_loss,train_acc,val_loss,val_acc,val_macro_f1",
            "1,0.5,0.75,,,",
        ]

    def test_rejects_non_finite(self):
        """A non-finite training loss cannot be recorded."""
        with pytest.raises(ValueError):
            TrainHistory().append(EpochRecord(epoch=1, train_loss=float("nan"), train_acc=0.0))

    def test_dict_round_trip(self):
        """to_dict/from_dict preserve the records."""
        history = TrainHistory([EpochRecord(1, 0.5, 0.5, 0.6, 0.4, 0.3)])
        assert TrainHistory.from_dict(history.to_dict()).records == history.records

    def test_final_on_empty(self):
        """An empty history has no final record."""
        with pytest.raises(IndexError):
            TrainHistory().final


class TestTrainConfig:
    """Test cases for TrainConfig validation."""

    @pytest.mark.parametrize(
        "kwargs", [{"epochs": 0}, {"label_smoothing": 1.0}, {"maxup": -1}, {"learning_rate": 0}]
    )
    def test_invalid_values(self, kwargs):
        """Out-of-range settings are rejected."""
        with pytest.raises(ValidationError):
            TrainConfig(**kwargs)


class TestTrain:
    """Test cases for the training loop."""

    def test_history_length_and_columns(self, tiny_spec):
        """One record per epoch, validation columns filled when a val set is given."""
        _, history = train(
            build_model(tiny_spec),
            separable_dataset(20),
            separable_dataset(10, seed=1),
            TrainConfig(epochs=3, batch_size=8, learning_rate=1e-2),
        )
        assert [r.epoch for r in history] == [1, 2, 3]
        assert all(r.val_acc is not None and r.val_macro_f1 is not None for r in history)

    def test_no_validation_set(self, tiny_spec):
        """Without a validation set the val columns stay empty."""
        _, history = train(build_model(tiny_spec), separable_dataset(10), cfg=TrainConfig(epochs=2))
        assert history.final.val_loss is None

    def test_deterministic(self, tiny_spec):
        """Same inputs and seed give bit-identical weights and history."""
        cfg = TrainConfig(epochs=2, batch_size=4, maxup=2, label_smoothing=0.1, seed=3)
        model_a, history_a = train(build_model(tiny_spec), separable_dataset(12), cfg=cfg)
        model_b, history_b = train(build_model(tiny_spec), separable_dataset(12), cfg=cfg)

        assert history_a.to_dict() == history_b.to_dict()
        state_a, state_b = model_a.state_dict(), model_b.state_dict()
        assert all(np.array_equal(state_a[n], state_b[n]) for n in state_a)

    def test_input_model_unchanged(self, tiny_spec):
        """train() works on a copy of the model."""
        model = build_model(tiny_spec)
        before = model.state_dict()
        trained, _ = train(model, separable_dataset(10), cfg=TrainConfig(epochs=1, learning_rate=0.1))
        assert all(np.array_equal(before[n], model.params[n].values) for n in before)
        assert not np.array_equal(before["classifier.weight"], trained.params["classifier.weight"].values)

    def test_loss_above_entropy_floor(self, tiny_spec):
        """With smoothing the training loss never drops below the target entropy."""
        cfg = TrainConfig(epochs=15, batch_size=8, learning_rate=5e-2, label_smoothing=0.2)
        _, history = train(build_model(tiny_spec), separable_dataset(32), cfg=cfg)
        floor = entropy_floor(2, 0.2)
        assert all(r.train_loss >= floor - 1e-9 for r in history)

    def test_partial_final_batch_is_kept(self, tiny_spec, caplog):
        """10 windows with batch size 4 make three updates per epoch."""
        with caplog.at_level(logging.DEBUG, logger="har_chain.train.loop"):
            train(build_model(tiny_spec), separable_dataset(10), cfg=TrainConfig(epochs=1, batch_size=4))
        batches = [r for r in caplog.records if r.getMessage().startswith("epoch 1 batch")]
        assert len(batches) == 3

    def test_learns_separable_data(self, tiny_spec):
        """A mean shift between classes is learned within a few epochs."""
        cfg = TrainConfig(epochs=20, batch_size=8, learning_rate=2e-2)
        _, history = train(build_model(tiny_spec), separable_dataset(40), separable_dataset(20, seed=5), cfg)
        assert history.final.train_loss < history.records[0].train_loss
        assert history.final.val_acc >= 0.8

    def test_non_finite_loss(self, tiny_spec):
        """A NaN input surfaces as NonFiniteLossError with epoch and batch."""
        dataset = separable_dataset(8)
        dataset.windows[:] = np.nan
        with pytest.raises(NonFiniteLossError) as excinfo:
            train(build_model(tiny_spec), dataset, cfg=TrainConfig(epochs=2, batch_size=4))
        assert (excinfo.value.epoch, excinfo.value.batch) == (1, 1)

    def test_empty_training_set(self, tiny_spec):
        """An empty training set is rejected."""
        with pytest.raises(ValueError, match="empty"):
            train(build_model(tiny_spec), separable_dataset(4).subset([]))

    def test_wrong_input_shape(self, tiny_spec):
        """Windows that do not fit the model are rejected before training."""
        dataset = WindowedDataset(np.zeros((2, 10, 2)), [0, 1], ["a", "b"], 10, 5, 1.0, LabelMap.generic(2))
        with pytest.raises(ValueError, match="do not match"):
            train(build_model(tiny_spec), dataset)


class TestEvaluateLoss:
    """Test cases for inference-mode evaluation."""

    def test_matches_manual_computation(self, tiny_spec):
        """The reported loss is the mean cross entropy against smoothed targets."""
        model = build_model(tiny_spec)
        dataset = separable_dataset(6)
        report = evaluate_loss(model, dataset, label_smoothing=0.1)

        logits = model_forward(model, dataset.windows)
        expected = softmax_cross_entropy(logits, smooth_label_matrix(dataset.labels, 2, 0.1)).item()
        assert report.loss == pytest.approx(expected, abs=1e-12)
        assert report.predictions.tolist() == logits.values.argmax(axis=1).tolist()
        assert report.accuracy == pytest.approx(np.mean(report.predictions == dataset.labels))

    def test_empty_dataset(self, tiny_spec):
        """Evaluation needs at least one window."""
        with pytest.raises(ValueError):
            evaluate_loss(build_model(tiny_spec), separable_dataset(2).subset([]))
