"""Label-preserving window augmentations and the MaxUp copy generator."""

from enum import Enum

import numpy as np


class AugmentKind(str, Enum):
    JITTER = "jitter"
    SCALE = "scale"


def augment(
    window: np.ndarray,
    kind: AugmentKind | str,
    rng: np.random.Generator,
    jitter_sigma: float = 0.05,
    scale_sigma: float = 0.1,
) -> np.ndarray:
    """Return an augmented copy of a ``(W, C)`` window.

    ``jitter`` adds i.i.d. Gaussian noise with std ``jitter_sigma`` to every element;
    ``scale`` multiplies each channel by a factor drawn from N(1, ``scale_sigma``).
    """
    if jitter_sigma < 0 or scale_sigma < 0:
        raise ValueError(f"augmentation sigmas must be >= 0, got {jitter_sigma}, {scale_sigma}")
    window = np.asarray(window, dtype=np.float64)
    kind = AugmentKind(kind)
    if kind is AugmentKind.JITTER:
        return window + rng.normal(0.0, jitter_sigma, size=window.shape)
    return window * rng.normal(1.0, scale_sigma, size=window.shape[-1])


def make_copies(
    window: np.ndarray,
    m: int,
    rng: np.random.Generator,
    jitter_sigma: float = 0.05,
    scale_sigma: float = 0.1,
) -> np.ndarray:
    """Stack ``m`` copies of a window into ``(m, W, C)``.

    Copy 0 is the window itself; every further copy applies jitter then scaling.
    Copies draw from ``rng`` in order, so the copies for ``m`` are a prefix of the
    copies for ``m + 1`` on the same stream.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    window = np.asarray(window, dtype=np.float64)
    copies = [window.copy()]
    for _ in range(1, m):
        jittered = augment(window, AugmentKind.JITTER, rng, jitter_sigma, scale_sigma)
        copies.append(augment(jittered, AugmentKind.SCALE, rng, jitter_sigma, scale_sigma))
    return np.stack(copies)
