"""Named initial-condition catalog for the solver's standard experiments.

Every entry fixes a domain, a default resolution (128 per axis in 2D, 64 in
3D), a default model variant and closed-form initial displacement/rate
profiles sampled at the grid nodes.  The catalog is hard-coded: no
expression parsing, so scenario definitions are bit-reproducible.

The ring-soliton profiles are not periodic at the domain edges but decay to
numerically constant tails there; the periodic solver supplies the mirror
images seen in collision runs.  The quartic/quadratic polynomial data of
``osc-complex-2d`` are only C0-periodic, which can limit the observable
spatial accuracy for that scenario.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import Variant
from .spectral import Field, GridSpec, Space

DEFAULT_TAU = 1e-3

SCENARIO_NAMES = (
    "smooth2d",
    "smooth3d",
    "osc-complex-2d",
    "elliptic-ring-2d",
    "two-circular-2d",
    "two-circular-3d",
    "four-circular-3d",
    "bandlimited2d",  # synthetic trig-polynomial data, exact on any grid N >= 4
)


@dataclass(frozen=True)
class ScenarioSpec:
    """Resolved scenario: grid, variant and data properties."""

    name: str
    grid: GridSpec
    variant: Variant
    complex_data: bool
    default_tau: float = DEFAULT_TAU


@dataclass(frozen=True)
class _Entry:
    intervals: tuple[tuple[float, float], ...]
    variant: Variant
    complex_data: bool
    u0: Callable[..., np.ndarray]
    u1: Callable[..., np.ndarray]


def _bandlimited_u0(x, y):
    return np.cos(2.0 * np.pi * x) + np.cos(y)


def _bandlimited_u1(x, y):
    return np.sin(2.0 * np.pi * x) + 0.5 * np.cos(y)


def _smooth2d_u0(x, y):
    return 2.0 / (2.0 + np.cos(2.0 * np.pi * x + y) ** 2)


def _smooth2d_u1(x, y):
    return 2.0 / (2.0 + 2.0 * np.cos(2.0 * np.pi * x + y) ** 2)


def _smooth3d_u0(x, y, z):
    return 1.0 / (1.0 + np.sin(2.0 * np.pi * x + y + z) ** 2)


def _smooth3d_u1(x, y, z):
    return 2.0 / (1.0 + np.sin(2.0 * np.pi * x + y + z) ** 2)


def _osc_u0(x, y):
    return x**2 * (x - 1.0) ** 2 + y * (y - 1.0) + 6.0j


def _osc_u1(x, y):
    return (
        x * (x - 1.0) * (2.0 * x - 1.0)
        + y**2 * (y - 1.0) ** 2
        + 1.0j * np.cos(2.0 * np.pi * (x + y))
    )


def _elliptic_u0(x, y):
    rho = np.sqrt((x - y) ** 2 / 3.0 + (x + y) ** 2 / 2.0)
    return 4.0 * np.arctan(np.exp(3.0 - rho))


def _ring_profile(r):
    return 4.0 * np.arctan(np.exp((4.0 - r) / 0.436))


def _ring_rate(r):
    return 4.13 / np.cosh((4.0 - r) / 0.436)


def _two_circ2d_r(x, y):
    return np.sqrt((x + 3.0) ** 2 + (y + 7.0) ** 2)


def _two_circ3d_r(x, y, z):
    return np.sqrt((x + 3.0) ** 2 + (y + 7.0) ** 2 + (z + 7.0) ** 2)


def _four_circ3d_r(x, y, z):
    return np.sqrt((x + 3.0) ** 2 + y**2 + (z + 3.0) ** 2)


_CATALOG: dict[str, _Entry] = {
    "smooth2d": _Entry(
        ((0.0, 1.0), (0.0, 2.0 * np.pi)),
        Variant.REAL,
        False,
        _smooth2d_u0,
        _smooth2d_u1,
    ),
    "smooth3d": _Entry(
        ((0.0, 2.0), (0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi)),
        Variant.REAL,
        False,
        _smooth3d_u0,
        _smooth3d_u1,
    ),
    "osc-complex-2d": _Entry(
        ((0.0, 1.0), (0.0, 1.0)),
        Variant.OSCILLATORY,
        True,
        _osc_u0,
        _osc_u1,
    ),
    "elliptic-ring-2d": _Entry(
        ((-7.0, 7.0), (-7.0, 7.0)),
        Variant.REAL,
        False,
        _elliptic_u0,
        lambda x, y: np.zeros_like(x),
    ),
    "two-circular-2d": _Entry(
        ((-30.0, 10.0), (-21.0, 7.0)),
        Variant.REAL,
        False,
        lambda x, y: _ring_profile(_two_circ2d_r(x, y)),
        lambda x, y: _ring_rate(_two_circ2d_r(x, y)),
    ),
    "two-circular-3d": _Entry(
        ((-30.0, 10.0), (-21.0, 7.0), (-21.0, 7.0)),
        Variant.REAL,
        False,
        lambda x, y, z: _ring_profile(_two_circ3d_r(x, y, z)),
        lambda x, y, z: _ring_rate(_two_circ3d_r(x, y, z)),
    ),
    "four-circular-3d": _Entry(
        ((-30.0, 10.0), (-30.0, 10.0), (-30.0, 10.0)),
        Variant.REAL,
        False,
        lambda x, y, z: _ring_profile(_four_circ3d_r(x, y, z)),
        lambda x, y, z: _ring_rate(_four_circ3d_r(x, y, z)),
    ),
    "bandlimited2d": _Entry(
        ((0.0, 1.0), (0.0, 2.0 * np.pi)),
        Variant.REAL,
        False,
        _bandlimited_u0,
        _bandlimited_u1,
    ),
}


def make_scenario(
    name: str, override_points: int | Sequence[int] | None = None
) -> tuple[ScenarioSpec, Field, Field]:
    """Build a catalog scenario, optionally overriding the per-axis resolution."""
    if name not in _CATALOG:
        known = ", ".join(sorted(_CATALOG))
        raise ValueError(f"unknown scenario {name!r}; known: {known}")
    entry = _CATALOG[name]
    dim = len(entry.intervals)
    if override_points is None:
        points: tuple[int, ...] = (128,) * dim if dim == 2 else (64,) * dim
    elif isinstance(override_points, int):
        points = (override_points,) * dim
    else:
        points = tuple(int(n) for n in override_points)
        if len(points) != dim:
            raise ValueError(f"expected {dim} point counts, got {len(points)}")
    grid = GridSpec(entry.intervals, points)
    coords = grid.meshgrid()
    u0_vals = np.asarray(entry.u0(*coords), dtype=np.complex128)
    u1_vals = np.asarray(entry.u1(*coords), dtype=np.complex128)
    for label, vals in (("u0", u0_vals), ("u1", u1_vals)):
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"scenario {name}: {label} has non-finite samples")
    spec = ScenarioSpec(name, grid, entry.variant, entry.complex_data)
    u0 = Field(grid, Space.PHYSICAL, np.broadcast_to(u0_vals, grid.shape).copy())
    u1 = Field(grid, Space.PHYSICAL, np.broadcast_to(u1_vals, grid.shape).copy())
    return spec, u0, u1


def boundary_band_variation(f: Field) -> float:
    """Value variation over the outermost sample frame, relative to the range.

    Quantifies how close a non-periodic profile comes to a constant tail at
    the domain edges (small means safe to evolve periodically).
    """
    vals = f.values.real
    mask = np.zeros(f.grid.shape, dtype=bool)
    for axis, n in enumerate(f.grid.points):
        idx: list[slice | int] = [slice(None)] * f.grid.dim
        idx[axis] = 0
        mask[tuple(idx)] = True
        idx[axis] = n - 1
        mask[tuple(idx)] = True
    band = vals[mask]
    full_range = float(vals.max() - vals.min())
    if full_range == 0.0:
        return 0.0
    return float(band.max() - band.min()) / full_range
