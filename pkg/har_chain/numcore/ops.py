"""Differentiable elementwise and structural primitives.

Binary elementwise ops require identical shapes; there is no general broadcasting.
"""

import numpy as np

from har_chain.exceptions import ShapeError
from har_chain.numcore.tensor import Tensor


def _same_shape(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} differ")


def rowwise_matmul(rows: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """``rows @ matrix`` as one ``[1, D] @ [D, K]`` product per row.

    A row's result does not depend on how many other rows are in the batch.
    """
    return np.matmul(rows[:, None, :], matrix)[:, 0, :]


def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape(a, b, "add")

    def backward(g: np.ndarray) -> None:
        a.accumulate(g)
        b.accumulate(g)

    return Tensor.from_op(a.values + b.values, (a, b), backward, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    _same_shape(a, b, "sub")

    def backward(g: np.ndarray) -> None:
        a.accumulate(g)
        b.accumulate(-g)

    return Tensor.from_op(a.values - b.values, (a, b), backward, "sub")


def mul(a: Tensor, b: Tensor) -> Tensor:
    _same_shape(a, b, "mul")

    def backward(g: np.ndarray) -> None:
        a.accumulate(g * b.values)
        b.accumulate(g * a.values)

    return Tensor.from_op(a.values * b.values, (a, b), backward, "mul")


def scale(x: Tensor, factor: float) -> Tensor:
    """Multiply by a constant."""

    def backward(g: np.ndarray) -> None:
        x.accumulate(g * factor)

    return Tensor.from_op(x.values * factor, (x,), backward, "scale")


def tanh(x: Tensor) -> Tensor:
    out_values = np.tanh(x.values)

    def backward(g: np.ndarray) -> None:
        x.accumulate(g * (1.0 - out_values * out_values))

    return Tensor.from_op(out_values, (x,), backward, "tanh")


def logistic_values(values: np.ndarray) -> np.ndarray:
    # tanh form does not overflow for large |x|
    return 0.5 * (1.0 + np.tanh(0.5 * values))


def sigmoid(x: Tensor) -> Tensor:
    """Logistic function ``1 / (1 + exp(-x))``."""
    out_values = logistic_values(x.values)

    def backward(g: np.ndarray) -> None:
        x.accumulate(g * out_values * (1.0 - out_values))

    return Tensor.from_op(out_values, (x,), backward, "sigmoid")


def relu(x: Tensor) -> Tensor:
    mask = x.values > 0

    def backward(g: np.ndarray) -> None:
        x.accumulate(np.where(mask, g, 0.0))

    return Tensor.from_op(np.where(mask, x.values, 0.0), (x,), backward, "relu")


def reshape(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    try:
        out_values = x.values.reshape(shape)
    except ValueError as e:
        raise ShapeError(f"reshape: cannot reshape {x.shape} to {shape}") from e

    def backward(g: np.ndarray) -> None:
        x.accumulate(g.reshape(x.shape))

    return Tensor.from_op(out_values, (x,), backward, "reshape")


def transpose(x: Tensor, axes: tuple[int, ...]) -> Tensor:
    if sorted(axes) != list(range(x.ndim)):
        raise ShapeError(f"transpose: axes {axes} invalid for {x.ndim} dimensions")
    inverse = tuple(np.argsort(axes))

    def backward(g: np.ndarray) -> None:
        x.accumulate(np.ascontiguousarray(np.transpose(g, inverse)))

    return Tensor.from_op(np.ascontiguousarray(np.transpose(x.values, axes)), (x,), backward, "transpose")


def slice_axis(x: Tensor, axis: int, start: int, stop: int) -> Tensor:
    """Elements ``start:stop`` along ``axis`` (the slice-along-time primitive)."""
    axis = axis % x.ndim
    if not 0 <= start < stop <= x.shape[axis]:
        raise ShapeError(f"slice_axis: [{start}:{stop}] out of range for axis of size {x.shape[axis]}")
    index = [slice(None)] * x.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)

    def backward(g: np.ndarray) -> None:
        full = np.zeros_like(x.values)
        full[index] = g
        x.accumulate(full)

    return Tensor.from_op(x.values[index].copy(), (x,), backward, "slice")


def concat(tensors: list[Tensor], axis: int) -> Tensor:
    if not tensors:
        raise ShapeError("concat: nothing to concatenate")
    axis = axis % tensors[0].ndim
    try:
        out_values = np.concatenate([t.values for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeError(f"concat: {e}") from e
    bounds = np.cumsum([0] + [t.shape[axis] for t in tensors])

    def backward(g: np.ndarray) -> None:
        for t, lo, hi in zip(tensors, bounds[:-1], bounds[1:], strict=True):
            index = [slice(None)] * g.ndim
            index[axis] = slice(int(lo), int(hi))
            t.accumulate(np.ascontiguousarray(g[tuple(index)]))

    return Tensor.from_op(out_values, tuple(tensors), backward, "concat")


def sum_all(x: Tensor) -> Tensor:
    """Sum of all elements as a scalar tensor."""

    def backward(g: np.ndarray) -> None:
        x.accumulate(np.full(x.shape, float(g.reshape(-1)[0])))

    return Tensor.from_op(np.array(x.values.sum()), (x,), backward, "sum")


def mean_all(x: Tensor) -> Tensor:
    """Mean of all elements as a scalar tensor."""
    count = x.size

    def backward(g: np.ndarray) -> None:
        x.accumulate(np.full(x.shape, float(g.reshape(-1)[0]) / count))

    return Tensor.from_op(np.array(x.values.mean()), (x,), backward, "mean")


def matmul_t(x: Tensor, w: Tensor) -> Tensor:
    """``x @ w.T`` for ``x`` of shape ``[B, D]`` and ``w`` of shape ``[K, D]``."""
    if x.ndim != 2 or w.ndim != 2 or x.shape[1] != w.shape[1]:
        raise ShapeError(f"matmul_t: incompatible shapes {x.shape} and {w.shape}")

    def backward(g: np.ndarray) -> None:
        x.accumulate(g @ w.values)
        w.accumulate(g.T @ x.values)

    return Tensor.from_op(rowwise_matmul(x.values, w.values.T), (x, w), backward, "matmul_t")


def gather(x: Tensor, indices: np.ndarray) -> Tensor:
    """Select elements of a 1-D tensor; gradients scatter back to the chosen positions."""
    if x.ndim != 1:
        raise ShapeError(f"gather: expected a 1-D tensor, got shape {x.shape}")
    indices = np.asarray(indices, dtype=np.int64)

    def backward(g: np.ndarray) -> None:
        full = np.zeros_like(x.values)
        np.add.at(full, indices, g)
        x.accumulate(full)

    return Tensor.from_op(x.values[indices].copy(), (x,), backward, "gather")
