"""Parameter dump/restore as CSV rows ``name,shape,values...``.

Shapes are written as ``x``-joined dimensions (``64x1x5x1``); values use the shortest
representation that round-trips exactly.
"""

from pathlib import Path

import numpy as np

from har_chain.numcore.tensor import Tensor


def _format_shape(shape: tuple[int, ...]) -> str:
    return "x".join(str(d) for d in shape)


def _parse_shape(text: str) -> tuple[int, ...]:
    return tuple(int(d) for d in text.split("x")) if text else ()


def save_parameters(params: dict[str, Tensor | np.ndarray], path: str | Path) -> Path:
    """Write parameters in insertion order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for name, value in params.items():
        array = value.values if isinstance(value, Tensor) else np.asarray(value, dtype=np.float64)
        cells = [name, _format_shape(array.shape)] + [repr(float(v)) for v in array.reshape(-1)]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_parameters(path: str | Path) -> dict[str, np.ndarray]:
    """Read a parameter dump back into ordered arrays.

    :raises ValueError: If a row's value count does not match its shape.
    """
    params: dict[str, np.ndarray] = {}
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        name, shape_text, *cells = line.split(",")
        shape = _parse_shape(shape_text)
        values = np.array([float(c) for c in cells], dtype=np.float64)
        if values.size != int(np.prod(shape, dtype=np.int64)):
            raise ValueError(f"{path}: row {number} ({name}) has {values.size} values for shape {shape}")
        params[name] = values.reshape(shape)
    return params
