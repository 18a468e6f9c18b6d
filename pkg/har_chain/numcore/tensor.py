"""Reverse-mode automatic differentiation over ``float64`` numpy buffers.

A :class:`Tensor` produced by a primitive remembers its parents and a closure that
pushes the output gradient back to them. :meth:`Tensor.backward` walks the graph in
reverse topological order, visiting every node exactly once, then releases it.

Graph recording is switched per thread (and per asyncio task): a :func:`no_grad` block
in one thread does not affect forward passes running in another.
"""

import contextlib
import contextvars
from collections.abc import Callable, Iterator

import numpy as np

from har_chain.exceptions import GraphReleasedError, ShapeError

_grad_enabled: contextvars.ContextVar[bool] = contextvars.ContextVar("grad_enabled", default=True)


@contextlib.contextmanager
def no_grad() -> Iterator[None]:
    """Disable graph recording inside the block (inference mode)."""
    token = _grad_enabled.set(False)
    try:
        yield
    finally:
        _grad_enabled.reset(token)


def is_grad_enabled() -> bool:
    return _grad_enabled.get()


class Tensor:
    """An n-dimensional ``float64`` array participating in a differentiation graph."""

    __slots__ = ("values", "requires_grad", "grad", "op", "_parents", "_backward", "_released")

    def __init__(self, values, requires_grad: bool = False):
        """Create a leaf tensor.

        :param values: Array-like data, converted to ``float64``.
        :param requires_grad: Whether gradients should be accumulated into ``grad``.
        """
        self.values = np.asarray(values, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self.op = "leaf"
        self._parents: tuple[Tensor, ...] = ()
        self._backward: Callable[[np.ndarray], None] | None = None
        self._released = False

    @classmethod
    def from_op(
        cls,
        values: np.ndarray,
        parents: tuple["Tensor", ...],
        backward: Callable[[np.ndarray], None],
        op: str,
    ) -> "Tensor":
        """Create the output of a primitive; records the graph only when needed."""
        out = cls(values)
        if _grad_enabled.get() and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out.op = op
            out._parents = parents
            out._backward = backward
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def size(self) -> int:
        return int(self.values.size)

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def is_leaf(self) -> bool:
        return not self._parents

    def item(self) -> float:
        if self.size != 1:
            raise ShapeError(f"item() needs a single element, tensor has shape {self.shape}")
        return float(self.values.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        """A copy of the values."""
        return self.values.copy()

    def zero_grad(self) -> None:
        self.grad = None

    def accumulate(self, gradient: np.ndarray) -> None:
        """Add ``gradient`` into ``grad`` (no-op for tensors that do not require it)."""
        if not self.requires_grad:
            return
        if gradient.shape != self.values.shape:
            raise ShapeError(f"gradient shape {gradient.shape} does not match {self.shape}")
        if self.grad is None:
            self.grad = np.array(gradient, dtype=np.float64, copy=True)
        else:
            self.grad += gradient

    def backward(self) -> None:
        """Back-propagate from this scalar through the recorded graph.

        Gradients accumulate (``+=``) along all paths. The graph is released afterwards;
        calling backward again on the same output raises :class:`GraphReleasedError`.
        """
        if self.size != 1:
            raise ShapeError(f"backward needs a scalar output, got shape {self.shape}")
        if self._released:
            raise GraphReleasedError("graph already released by a previous backward()")
        if not self.requires_grad:
            return

        order = topological_order(self)
        self.accumulate(np.ones_like(self.values))
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)
        for node in order:
            if node._parents:
                node._parents = ()
                node._backward = None
                node._released = True

    def __add__(self, other: "Tensor") -> "Tensor":
        from har_chain.numcore import ops

        return ops.add(self, other)

    def __sub__(self, other: "Tensor") -> "Tensor":
        from har_chain.numcore import ops

        return ops.sub(self, other)

    def __mul__(self, other: "Tensor") -> "Tensor":
        from har_chain.numcore import ops

        return ops.mul(self, other)

    def __neg__(self) -> "Tensor":
        from har_chain.numcore import ops

        return ops.scale(self, -1.0)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, op={self.op!r}, requires_grad={self.requires_grad})"


def parameter(values) -> Tensor:
    """A trainable leaf tensor (owns a copy of ``values``)."""
    return Tensor(np.array(values, dtype=np.float64, copy=True), requires_grad=True)


def topological_order(root: Tensor) -> list[Tensor]:
    """Nodes reachable from ``root``, parents before children (iterative DFS)."""
    order: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in visited and parent.requires_grad:
                stack.append((parent, False))
    return order
