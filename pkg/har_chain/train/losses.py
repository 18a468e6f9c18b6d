"""Target smoothing and the MaxUp worst-of-m loss."""

import numpy as np

from har_chain.model.network import Model, model_forward
from har_chain.numcore import nn, ops
from har_chain.numcore.tensor import Tensor
from har_chain.train.augment import make_copies


def smooth_labels(class_id: int, num_classes: int, epsilon: float) -> np.ndarray:
    """``(1 - eps) + eps / K`` at ``class_id`` and ``eps / K`` elsewhere."""
    if not 0 <= epsilon < 1:
        raise ValueError(f"label smoothing must be in [0, 1), got {epsilon}")
    if not 0 <= class_id < num_classes:
        raise ValueError(f"class id {class_id} out of range for {num_classes} classes")
    target = np.full(num_classes, epsilon / num_classes)
    target[class_id] += 1.0 - epsilon
    return target


def smooth_label_matrix(labels: np.ndarray, num_classes: int, epsilon: float) -> np.ndarray:
    """Row-wise :func:`smooth_labels` for a vector of class ids."""
    labels = np.asarray(labels, dtype=np.int64)
    if not 0 <= epsilon < 1:
        raise ValueError(f"label smoothing must be in [0, 1), got {epsilon}")
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise ValueError(f"class ids must lie in [0, {num_classes})")
    target = np.full((labels.size, num_classes), epsilon / num_classes)
    target[np.arange(labels.size), labels] += 1.0 - epsilon
    return target


def entropy_floor(num_classes: int, epsilon: float) -> float:
    """Entropy of the smoothed target, the lowest cross entropy any logits can reach."""
    if epsilon == 0:
        return 0.0
    high = 1.0 - epsilon + epsilon / num_classes
    low = epsilon / num_classes
    return float(-(high * np.log(high) + (num_classes - 1) * low * np.log(low)))


def batch_maxup_loss(
    model: Model,
    windows: np.ndarray,
    targets: np.ndarray,
    m: int,
    rng: np.random.Generator,
    jitter_sigma: float = 0.05,
    scale_sigma: float = 0.1,
) -> tuple[Tensor, np.ndarray]:
    """Mean over windows of the worst copy's loss, in one batched forward pass.

    Copies are drawn window by window in batch order. Ties between copies go to the
    lowest copy index.

    :return: The scalar loss and the logits of each window's identity copy.
    """
    size = windows.shape[0]
    copies = np.concatenate(
        [make_copies(w, m, rng, jitter_sigma, scale_sigma) for w in windows], axis=0
    )  # window-major: row b * m + j
    logits = model_forward(model, copies)
    rows = nn.cross_entropy_rows(logits, np.repeat(targets, m, axis=0))
    worst = rows.values.reshape(size, m).argmax(axis=1)
    chosen = ops.gather(rows, np.arange(size) * m + worst)
    identity_logits = logits.values.reshape(size, m, -1)[:, 0, :]
    return ops.mean_all(chosen), identity_logits


def maxup_loss(
    model: Model,
    window: np.ndarray,
    target: np.ndarray,
    m: int,
    rng: np.random.Generator,
    jitter_sigma: float = 0.05,
    scale_sigma: float = 0.1,
) -> Tensor:
    """Worst-of-``m`` cross entropy for a single ``(W, C)`` window.

    Only the maximizing copy receives gradient.
    """
    loss, _ = batch_maxup_loss(
        model,
        np.asarray(window, dtype=np.float64)[None],
        np.asarray(target, dtype=np.float64)[None],
        m,
        rng,
        jitter_sigma,
        scale_sigma,
    )
    return loss
