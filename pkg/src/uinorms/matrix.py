"""Dense complex matrices and the block algebra used to build every comparison.

Matrices are plain ``complex128`` numpy arrays. Every function here returns a
fresh array and never writes to its inputs, so values can be shared freely
between trials.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from .exceptions import DimensionError, NonFiniteError

__all__ = [
    "as_matrix",
    "identity",
    "zeros",
    "adjoint",
    "multiply",
    "add",
    "scale",
    "direct_sum",
    "assemble",
    "pad_top_left",
    "matrix_from_json",
    "matrix_to_json",
    "load_matrix",
    "save_matrix",
]


def _finite(a: np.ndarray) -> np.ndarray:
    if not np.isfinite(a).all():
        raise NonFiniteError("matrix has NaN or infinite entries")
    return a


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite 2-D matrix and return it as ``complex128``.

    A copy is always made, so the caller's buffer is never aliased.
    """
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    return _finite(arr)


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


def zeros(rows: int, cols: int | None = None) -> np.ndarray:
    return np.zeros((rows, rows if cols is None else cols), dtype=np.complex128)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    a = np.asarray(a, dtype=np.complex128)
    return np.ascontiguousarray(a.conj().T)


def multiply(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return _finite(a @ b)


def add(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return _finite(a + b)


def scale(a, c: complex) -> np.ndarray:
    return _finite(complex(c) * np.asarray(a, dtype=np.complex128))


def direct_sum(parts: Sequence) -> np.ndarray:
    """Block-diagonal matrix with ``parts`` along the diagonal, in order."""
    if len(parts) == 0:
        raise DimensionError("direct_sum needs at least one block")
    parts = [np.asarray(p, dtype=np.complex128) for p in parts]
    rows = sum(p.shape[0] for p in parts)
    cols = sum(p.shape[1] for p in parts)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for p in parts:
        out[r : r + p.shape[0], c : c + p.shape[1]] = p
        r += p.shape[0]
        c += p.shape[1]
    return out


def assemble(grid: Sequence[Sequence]) -> np.ndarray:
    """Flatten a rectangular grid of blocks into one matrix.

    Blocks in the same grid row must share a height and blocks in the same
    grid column must share a width.

    >>> assemble([[np.eye(1), np.zeros((1, 2))], [np.zeros((2, 1)), np.eye(2)]]).shape
    (3, 3)
    """
    if len(grid) == 0 or len(grid[0]) == 0:
        raise DimensionError("block grid is empty")
    blocks = [[np.asarray(b, dtype=np.complex128) for b in row] for row in grid]
    ncols = len(blocks[0])
    if any(len(row) != ncols for row in blocks):
        raise DimensionError("block grid rows have different lengths")
    heights = [row[0].shape[0] for row in blocks]
    widths = [b.shape[1] for b in blocks[0]]
    for i, row in enumerate(blocks):
        for j, b in enumerate(row):
            if b.ndim != 2 or b.shape != (heights[i], widths[j]):
                raise DimensionError(
                    f"block ({i}, {j}) has shape {b.shape}, expected {(heights[i], widths[j])}"
                )
    out = np.zeros((sum(heights), sum(widths)), dtype=np.complex128)
    r = 0
    for i, row in enumerate(blocks):
        c = 0
        for j, b in enumerate(row):
            out[r : r + heights[i], c : c + widths[j]] = b
            c += widths[j]
        r += heights[i]
    return out


def pad_top_left(a, rows: int, cols: int) -> np.ndarray:
    """Embed ``a`` in the top-left corner of a ``rows x cols`` zero matrix."""
    a = np.asarray(a, dtype=np.complex128)
    if rows < a.shape[0] or cols < a.shape[1]:
        raise DimensionError(f"cannot pad {a.shape} into ({rows}, {cols})")
    out = np.zeros((rows, cols), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    return out


# -- JSON file format: {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major


def _reject_constant(name):
    raise NonFiniteError(f"non-finite literal {name} in matrix file")


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text, parse_constant=_reject_constant)
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1:
        raise DimensionError(f"rows and cols must be positive, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
    values = []
    for e in entries:
        if isinstance(e, (int, float)):
            re, im = float(e), 0.0
        elif len(e) == 2:
            re, im = float(e[0]), float(e[1])
        else:
            raise DimensionError(f"entry {e!r} is not a [re, im] pair")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NonFiniteError("matrix file holds a non-finite entry")
        values.append(complex(re, im))
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def matrix_to_json(a) -> str:
    a = as_matrix(a)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return json.dumps({"rows": a.shape[0], "cols": a.shape[1], "entries": entries})


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(Path(path).read_text())


def save_matrix(path, a) -> None:
    Path(path).write_text(matrix_to_json(a) + "\n")
