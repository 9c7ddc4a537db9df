"""Field snapshots and CSV time series.

Snapshot layout (all little-endian)::

    b"GPE1"
    3 x uint64      dims (n1, n2, n3)
    3 x float64     box half-lengths (L1, L2, L3)
    n1*n2*n3 x (float64 re, float64 im), x1 varying fastest
"""

from __future__ import annotations

import struct

import numpy as np

from .spectral import make_grid

__all__ = ["SNAPSHOT_MAGIC", "write_snapshot", "read_snapshot", "write_csv", "format_float"]

SNAPSHOT_MAGIC = b"GPE1"
_HEADER = struct.Struct("<4s3Q3d")


def write_snapshot(path, grid, field):
    grid.check(field)
    payload = np.empty(grid.size, dtype="<c16")
    payload[...] = np.asarray(field, dtype=complex).ravel(order="F")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(SNAPSHOT_MAGIC, *grid.dims, *grid.box_half_lengths))
        fh.write(payload.tobytes())


def read_snapshot(path):
    """Return ``(grid, field)`` from a snapshot file."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated snapshot header")
        magic, n1, n2, n3, L1, L2, L3 = _HEADER.unpack(head)
        if magic != SNAPSHOT_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        grid = make_grid((n1, n2, n3), (L1, L2, L3))
        data = fh.read()
    if len(data) != 16 * grid.size:
        raise ValueError(f"{path}: expected {16 * grid.size} payload bytes, got {len(data)}")
    flat = np.frombuffer(data, dtype="<c16").astype(complex)
    return grid, np.ascontiguousarray(flat.reshape(grid.shape, order="F"))


def format_float(x):
    return f"{x:.17g}"


def write_csv(path, header, columns):
    """Write equal-length columns with 17 significant digits and LF endings."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    if len({len(c) for c in columns}) > 1:
        raise ValueError("CSV columns must have equal length")
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(format_float(v) for v in row) + "\n")
