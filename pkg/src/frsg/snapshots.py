"""Binary field-snapshot files: magic ``FRSG0001``, JSON header, float64 payload.

Layout (little-endian throughout):

    bytes 0..7    magic ``b"FRSG0001"``
    bytes 8..11   header length L (uint32)
    bytes 12..12+L-1   UTF-8 JSON header
    remainder     8 * prod(N_i) bytes of float64 samples, row-major

Header keys: ``version`` (1), ``dim``, ``N`` (per-axis counts), ``a``/``b``
(per-axis interval ends), ``alpha``, ``epsilon``, ``time``, ``field`` (one
of ``"u" | "v" | "phi_re" | "phi_im"``), ``layout`` (``"row-major"``).
Round trips are bitwise exact.
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .spectral import Field, GridSpec, Space

MAGIC = b"FRSG0001"
FIELD_KINDS = ("u", "v", "phi_re", "phi_im")


@dataclass
class SnapshotMeta:
    """Header contents of one snapshot file."""

    dim: int
    N: list[int]
    a: list[float]
    b: list[float]
    alpha: float
    epsilon: float
    time: float
    field: str
    version: int = 1
    layout: str = "row-major"

    def grid(self) -> GridSpec:
        return GridSpec(tuple(zip(self.a, self.b)), tuple(self.N))


class SnapshotError(IOError):
    """Malformed or truncated snapshot file."""


def snapshot_meta(
    field: Field, alpha: float, epsilon: float, time: float, kind: str
) -> SnapshotMeta:
    if kind not in FIELD_KINDS:
        raise ValueError(f"field kind must be one of {FIELD_KINDS}, got {kind!r}")
    grid = field.grid
    return SnapshotMeta(
        dim=grid.dim,
        N=list(grid.points),
        a=[a for a, _ in grid.intervals],
        b=[b for _, b in grid.intervals],
        alpha=float(alpha),
        epsilon=float(epsilon),
        time=float(time),
        field=kind,
    )


def write_snapshot(path: str | Path, field: Field, meta: SnapshotMeta) -> None:
    """Write real-valued physical samples; imaginary parts are not stored."""
    if field.space is not Space.PHYSICAL:
        raise ValueError("snapshots hold physical-space samples")
    if list(field.grid.points) != meta.N:
        raise ValueError("metadata resolution does not match the field")
    payload = np.ascontiguousarray(field.values.real, dtype="<f8")
    header = json.dumps(asdict(meta), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(payload.tobytes())


def read_snapshot(path: str | Path) -> tuple[Field, SnapshotMeta]:
    """Read one snapshot; rejects wrong magic and truncated payloads."""
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + 4:
        raise SnapshotError(f"{path}: file shorter than the fixed preamble")
    if raw[: len(MAGIC)] != MAGIC:
        raise SnapshotError(f"{path}: bad magic {raw[:8]!r}, expected {MAGIC!r}")
    (header_len,) = struct.unpack_from("<I", raw, len(MAGIC))
    header_start = len(MAGIC) + 4
    if len(raw) < header_start + header_len:
        raise SnapshotError(f"{path}: truncated header (declared {header_len} bytes)")
    try:
        header = json.loads(raw[header_start : header_start + header_len])
        meta = SnapshotMeta(**header)
    except (ValueError, TypeError) as exc:
        raise SnapshotError(f"{path}: unreadable header: {exc}") from exc
    if meta.field not in FIELD_KINDS:
        raise SnapshotError(f"{path}: unknown field kind {meta.field!r}")
    grid = meta.grid()
    expected = 8 * grid.size
    payload = raw[header_start + header_len :]
    if len(payload) != expected:
        raise SnapshotError(
            f"{path}: payload holds {len(payload)} bytes at offset "
            f"{header_start + header_len}, expected {expected}"
        )
    samples = np.frombuffer(payload, dtype="<f8").reshape(grid.shape)
    return Field(grid, Space.PHYSICAL, samples), meta
