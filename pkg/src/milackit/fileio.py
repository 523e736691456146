"""Matrix serialization: complex-capable CSV and a binary checkpoint format.

CSV cells use the ``re+imj`` syntax (Python complex literal without
parentheses); real matrices write bare floats. Cells are emitted with repr()
so round-trips are bit-exact, including signed zeros.

The binary format is a 16-byte header of two little-endian uint64 values
(rows, cols) followed by the matrix as row-major little-endian float64 pairs,
real part then imaginary part for each entry.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

__all__ = [
    "format_complex",
    "matrix_to_csv_text",
    "matrix_from_csv_text",
    "save_matrix_csv",
    "load_matrix_csv",
    "load_real_matrix_csv",
    "save_matrix_bin",
    "load_matrix_bin",
]

_HEADER_BYTES = 16


def format_complex(z: complex) -> str:
    """Render a complex number as ``re+imj`` with round-trip-exact parts."""
    re, im = float(z.real), float(z.imag)
    sign = "+" if math.copysign(1.0, im) > 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}j"


def _format_cell(value, complex_cells: bool) -> str:
    if complex_cells:
        return format_complex(value)
    return repr(float(value))


def matrix_to_csv_text(a: np.ndarray) -> str:
    """Serialize a 2-d matrix to CSV text; complex dtypes get re+imj cells."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    complex_cells = np.issubdtype(arr.dtype, np.complexfloating)
    rows = (",".join(_format_cell(v, complex_cells) for v in row) for row in arr)
    return "\n".join(rows) + "\n"


def matrix_from_csv_text(text: str) -> np.ndarray:
    """Parse CSV text into a complex matrix (real-only files parse too)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty matrix CSV")
    data = []
    for ln in lines:
        try:
            data.append([complex(cell) for cell in ln.split(",")])
        except ValueError as exc:
            raise ValueError(f"unparseable matrix CSV line {ln!r}") from exc
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise ValueError(f"ragged matrix CSV: row widths {sorted(widths)}")
    return np.array(data, dtype=complex)


def save_matrix_csv(path: str | os.PathLike, a: np.ndarray) -> None:
    Path(path).write_text(matrix_to_csv_text(a))


def load_matrix_csv(path: str | os.PathLike) -> np.ndarray:
    return matrix_from_csv_text(Path(path).read_text())


def load_real_matrix_csv(path: str | os.PathLike) -> np.ndarray:
    """Load a CSV matrix that must be purely real; returns float array."""
    z = load_matrix_csv(path)
    if z.size and np.max(np.abs(z.imag)) != 0.0:
        raise ValueError(f"{path}: expected a real matrix, found imaginary parts")
    return z.real.copy()


def save_matrix_bin(path: str | os.PathLike, a: np.ndarray) -> None:
    arr = np.ascontiguousarray(np.asarray(a, dtype="<c16"))
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    header = np.asarray(arr.shape, dtype="<u8").tobytes()
    Path(path).write_bytes(header + arr.tobytes(order="C"))


def load_matrix_bin(path: str | os.PathLike) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER_BYTES:
        raise ValueError(f"{path}: truncated header")
    rows, cols = (int(v) for v in np.frombuffer(raw[:_HEADER_BYTES], dtype="<u8"))
    expected = _HEADER_BYTES + rows * cols * 16
    if len(raw) != expected:
        raise ValueError(
            f"{path}: payload length {len(raw) - _HEADER_BYTES} does not match "
            f"{rows}x{cols} complex entries"
        )
    return np.frombuffer(raw[_HEADER_BYTES:], dtype="<c16").reshape(rows, cols).astype(complex)
