"""Legacy VTK structured-points export of field snapshots.

Produces the ASCII ``DATASET STRUCTURED_POINTS`` format (DIMENSIONS /
ORIGIN / SPACING headers, then POINT_DATA with one scalar array) readable
by the common scientific visualization tools.  Point order is x fastest,
then y, then z; 2D fields export with a third dimension of 1.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .snapshots import read_snapshot

QUANTITIES = ("u", "sin(u/2)")


def export_structured_grid(
    snapshot_path: str | Path, out_path: str | Path, quantity: str = "u"
) -> Path:
    """Convert one snapshot file to a VTK structured-points text file."""
    if quantity not in QUANTITIES:
        raise ValueError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    field, meta = read_snapshot(snapshot_path)
    grid = field.grid
    if grid.dim > 3:
        raise ValueError(f"cannot export {grid.dim}-dimensional data")

    values = field.values.real
    if quantity == "sin(u/2)":
        values = np.sin(0.5 * values)
        name = "sin_u_half"
    else:
        name = "u"

    dims = list(grid.points) + [1] * (3 - grid.dim)
    origin = [a for a, _ in grid.intervals] + [0.0] * (3 - grid.dim)
    spacing = list(grid.spacing) + [1.0] * (3 - grid.dim)

    # VTK expects x to vary fastest; our storage has the last axis fastest.
    flat = np.transpose(values).ravel()

    lines = [
        "# vtk DataFile Version 3.0",
        f"frsg {meta.field} snapshot t={meta.time:.10g}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        "DIMENSIONS {} {} {}".format(*dims),
        "ORIGIN {:.17g} {:.17g} {:.17g}".format(*origin),
        "SPACING {:.17g} {:.17g} {:.17g}".format(*spacing),
        f"POINT_DATA {grid.size}",
        f"SCALARS {name} double 1",
        "LOOKUP_TABLE default",
    ]
    lines.extend(f"{v:.17g}" for v in flat)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text("\n".join(lines) + "\n")
    return out_path
