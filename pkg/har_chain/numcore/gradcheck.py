"""Central finite-difference verification of analytic gradients."""

from collections.abc import Callable

import numpy as np

from har_chain.numcore.tensor import Tensor


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """``max|a - n| / max(max|a|, max|n|, 1e-12)``."""
    scale = max(float(np.max(np.abs(analytic), initial=0.0)), float(np.max(np.abs(numeric), initial=0.0)), 1e-12)
    return float(np.max(np.abs(analytic - numeric), initial=0.0)) / scale


def numeric_gradient(
    fn: Callable[[], Tensor],
    tensor: Tensor,
    eps: float = 1e-5,
    indices: np.ndarray | None = None,
) -> np.ndarray:
    """Central differences of the scalar ``fn()`` w.r.t. ``tensor`` at flat ``indices``."""
    if not tensor.values.flags.c_contiguous:
        tensor.values = tensor.values.copy()
    flat = tensor.values.reshape(-1)
    positions = np.arange(flat.size) if indices is None else np.asarray(indices)
    result = np.zeros(positions.size)
    for n, i in enumerate(positions):
        original = flat[i]
        flat[i] = original + eps
        upper = fn().item()
        flat[i] = original - eps
        lower = fn().item()
        flat[i] = original
        result[n] = (upper - lower) / (2.0 * eps)
    return result


def check_gradients(
    fn: Callable[[], Tensor],
    inputs: list[Tensor],
    eps: float = 1e-5,
    max_checks: int | None = None,
    rng: np.random.Generator | None = None,
) -> list[float]:
    """Compare backward() against central finite differences.

    :param fn: Builds a fresh scalar output from ``inputs`` on every call.
    :param inputs: Tensors with ``requires_grad`` set.
    :param eps: Finite-difference step.
    :param max_checks: Check at most this many random coordinates per input.
    :param rng: Generator for picking coordinates (required with ``max_checks``).
    :return: Relative error per input.
    """
    for t in inputs:
        t.zero_grad()
    fn().backward()
    analytic = [np.zeros_like(t.values) if t.grad is None else t.grad.copy() for t in inputs]

    errors = []
    for t, grad in zip(inputs, analytic, strict=True):
        indices = None
        if max_checks is not None and t.size > max_checks:
            rng = rng or np.random.default_rng(0)
            indices = np.sort(rng.choice(t.size, size=max_checks, replace=False))
        numeric = numeric_gradient(fn, t, eps, indices)
        chosen = grad.reshape(-1) if indices is None else grad.reshape(-1)[indices]
        errors.append(relative_error(chosen, numeric))
    return errors
