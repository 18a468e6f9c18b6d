"""The seeded mini-batch training loop."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from har_chain.evaluation.metrics import compute_metrics, confusion_matrix
from har_chain.exceptions import NonFiniteLossError
from har_chain.model.network import Model, model_forward, predict_logits
from har_chain.numcore import nn
from har_chain.numcore.optim import Adam
from har_chain.preprocess.models import WindowedDataset
from har_chain.train.config import EpochRecord, TrainConfig, TrainHistory
from har_chain.train.losses import batch_maxup_loss, smooth_label_matrix
from har_chain.utils.seeding import derive_rng

logger = logging.getLogger(__name__)


@dataclass
class LossReport:
    loss: float
    accuracy: float
    macro_f1: float
    predictions: np.ndarray


def _check_dataset(model: Model, dataset: WindowedDataset, role: str) -> None:
    spec = model.spec
    if dataset.windows.shape[1:] != (spec.window_length, spec.input_channels):
        raise ValueError(
            f"{role} windows {dataset.windows.shape[1:]} do not match the model input "
            f"({spec.window_length}, {spec.input_channels})"
        )
    if len(dataset) and dataset.labels.max() >= spec.num_classes:
        raise ValueError(f"{role} set has class id {dataset.labels.max()} >= {spec.num_classes}")


def evaluate_loss(
    model: Model, dataset: WindowedDataset, label_smoothing: float = 0.0, batch_size: int = 256
) -> LossReport:
    """Inference-mode loss, accuracy and macro F1 (no augmentation).

    :param label_smoothing: Smoothing applied to the reported loss only.
    """
    if len(dataset) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    _check_dataset(model, dataset, "evaluation")
    logits = predict_logits(model, dataset.windows, batch_size)
    target = smooth_label_matrix(dataset.labels, model.spec.num_classes, label_smoothing)
    loss = float(-(target * nn.log_softmax(logits)).sum(axis=1).mean())
    predictions = logits.argmax(axis=1).astype(np.int64)
    report = compute_metrics(confusion_matrix(dataset.labels, predictions, model.spec.num_classes))
    return LossReport(loss=loss, accuracy=report.accuracy, macro_f1=report.macro_f1, predictions=predictions)


def train(
    model: Model,
    train_set: WindowedDataset,
    val_set: WindowedDataset | None = None,
    cfg: TrainConfig | None = None,
) -> tuple[Model, TrainHistory]:
    """Train a copy of ``model`` and return it with its per-epoch history.

    Every epoch shuffles the window order with the ``shuffle`` stream and walks it in
    batches of ``cfg.batch_size`` (the final partial batch is kept). Each batch loss is
    the mean over windows of the plain or MaxUp cross entropy against smoothed targets,
    followed by one Adam step. Augmentation draws from its own stream, so enabling it
    leaves the shuffle order unchanged.

    :raises ValueError: If the training set is empty or does not fit the model.
    :raises NonFiniteLossError: If a batch loss is NaN or infinite.
    """
    cfg = cfg or TrainConfig()
    if len(train_set) == 0:
        raise ValueError("training set is empty")
    _check_dataset(model, train_set, "training")
    if val_set is not None and len(val_set) == 0:
        val_set = None

    model = model.copy()
    optimizer = Adam(model.parameters(), cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.eps)
    shuffle_rng = derive_rng(cfg.seed, "shuffle")
    augment_rng = derive_rng(cfg.seed, "augment")
    num_classes = model.spec.num_classes
    targets = smooth_label_matrix(train_set.labels, num_classes, cfg.label_smoothing)
    n = len(train_set)
    history = TrainHistory()

    logger.info(
        f"Training on {n} windows for {cfg.epochs} epochs "
        f"(batch={cfg.batch_size}, lr={cfg.learning_rate}, smoothing={cfg.label_smoothing}, maxup={cfg.maxup})"
    )
    for epoch in range(1, cfg.epochs + 1):
        order = shuffle_rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        for batch, start in enumerate(range(0, n, cfg.batch_size), start=1):
            idx = order[start : start + cfg.batch_size]
            windows = train_set.windows[idx]
            optimizer.zero_grad()
            if cfg.maxup >= 1:
                loss, logits = batch_maxup_loss(
                    model, windows, targets[idx], cfg.maxup, augment_rng, cfg.jitter_sigma, cfg.scale_sigma
                )
            else:
                out = model_forward(model, windows)
                loss = nn.softmax_cross_entropy(out, targets[idx])
                logits = out.values
            value = loss.item()
            if not math.isfinite(value):
                raise NonFiniteLossError(epoch, batch, value)
            loss.backward()
            optimizer.step()
            loss_sum += value * idx.size
            correct += int((logits.argmax(axis=1) == train_set.labels[idx]).sum())
            logger.debug(f"epoch {epoch} batch {batch}: loss={value:.6f}")

        record = EpochRecord(epoch=epoch, train_loss=loss_sum / n, train_acc=correct / n)
        if val_set is not None:
            val = evaluate_loss(model, val_set)
            record.val_loss, record.val_acc, record.val_macro_f1 = val.loss, val.accuracy, val.macro_f1
        history.append(record)
        logger.info(
            f"epoch {epoch}/{cfg.epochs}: train_loss={record.train_loss:.4f} train_acc={record.train_acc:.4f}"
            + ("" if record.val_acc is None else f" val_acc={record.val_acc:.4f} val_f1={record.val_macro_f1:.4f}")
        )
    return model, history
