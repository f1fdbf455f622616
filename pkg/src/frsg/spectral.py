"""Periodic tensor grids, discrete Fourier transforms and diagonal multipliers.

Conventions
-----------
Frequencies on an axis with ``N`` points over ``(a, b)`` are the integer
modes ``k = -N/2, ..., N/2 - 1`` with angular wavenumber
``mu_k = 2*pi*k / (b - a)``.  Arrays are stored in standard FFT bin order,
with the bijection

    bins 0 .. N/2-1    <->  k = 0 .. N/2-1
    bins N/2 .. N-1    <->  k = -N/2 .. -1

so any FFT backend can be used without copying.  The Nyquist mode
``k = -N/2`` is kept and treated like every other mode.

The forward transform carries the full ``1/prod(N_i)`` normalization, so a
coefficient equals the trigonometric-interpolation coefficient

    c_k = (1/prod N_i) * sum_p f_p * exp(-i * mu_k . (x_p - a)),

and the inverse is the plain (unnormalized) exponential sum.  All arithmetic
is complex binary64.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


class Space(enum.Enum):
    """Tag for which representation a Field currently holds."""

    PHYSICAL = "physical"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class GridSpec:
    """Periodic rectangular tensor grid in 2 or 3 dimensions.

    Attributes:
        intervals: per-dimension ``(a_i, b_i)`` with ``b_i > a_i``.
        points: per-dimension even sample count ``N_i >= 4``.

    Nodes along axis ``i`` are ``x_p = a_i + p*h_i`` for ``p = 0..N_i-1``
    with ``h_i = (b_i - a_i)/N_i``; index ``N_i`` wraps to index 0.
    """

    intervals: tuple[tuple[float, float], ...]
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "intervals",
            tuple((float(a), float(b)) for a, b in self.intervals),
        )
        object.__setattr__(self, "points", tuple(int(n) for n in self.points))
        if len(self.intervals) != len(self.points):
            raise ValueError("intervals and points must have equal length")
        if self.dim not in (2, 3):
            raise ValueError(f"grid must be 2- or 3-dimensional, got dim={self.dim}")
        for (a, b), n in zip(self.intervals, self.points):
            if not b > a:
                raise ValueError(f"interval ({a}, {b}) is empty")
            if n < 4 or n % 2 != 0:
                raise ValueError(f"point count must be even and >= 4, got {n}")

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in self.intervals)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / n for (a, b), n in zip(self.intervals, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def domain_volume(self) -> float:
        return float(np.prod(self.lengths))

    def axes(self) -> tuple[np.ndarray, ...]:
        """1D node arrays, one per dimension."""
        return tuple(
            a + h * np.arange(n)
            for (a, _), h, n in zip(self.intervals, self.spacing, self.points)
        )

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Shaped coordinate arrays (``indexing='ij'``)."""
        return tuple(np.meshgrid(*self.axes(), indexing="ij"))


@dataclass
class Field:
    """Complex binary64 samples on a grid, tagged physical or spectral.

    ``values`` has shape ``grid.shape`` and is C-contiguous, i.e. flattening
    gives the row-major layout over the dimension order.
    """

    grid: GridSpec
    space: Space
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            if vals.size == self.grid.size:
                vals = vals.reshape(self.grid.shape)
            else:
                raise ValueError(
                    f"values shape {vals.shape} does not match grid {self.grid.shape}"
                )
        self.values = vals

    def copy(self) -> "Field":
        return Field(self.grid, self.space, self.values.copy())

    def max_imag_ratio(self) -> float:
        """max |imag| relative to max |value| (0 for an all-zero field)."""
        scale = float(np.max(np.abs(self.values)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.values.imag))) / scale


def require_real(f: Field, tol: float = 1e-12) -> np.ndarray:
    """Check a physical field is numerically real and return its real part."""
    ratio = f.max_imag_ratio()
    if ratio > tol:
        raise ValueError(f"field is not real-valued: max|imag|/max|value| = {ratio:.3e}")
    return f.values.real


@lru_cache(maxsize=None)
def wavenumber_axes(grid: GridSpec) -> tuple[np.ndarray, ...]:
    """Per-axis angular wavenumbers ``2*pi*k/(b-a)`` in FFT bin order."""
    out = []
    for (a, b), n in zip(grid.intervals, grid.points):
        k = np.fft.fftfreq(n, d=1.0 / n)  # exact integers 0..N/2-1, -N/2..-1
        out.append(2.0 * np.pi * k / (b - a))
    return tuple(out)


@lru_cache(maxsize=None)
def squared_wavenumbers(grid: GridSpec) -> np.ndarray:
    """Shaped array of ``|mu_k|^2 = sum_i mu_{k_i}^2`` in bin order."""
    total = np.zeros(grid.shape)
    for axis, mu in enumerate(wavenumber_axes(grid)):
        shape = [1] * grid.dim
        shape[axis] = mu.size
        total = total + (mu**2).reshape(shape)
    return total


@dataclass(frozen=True, eq=False)
class SymbolSet:
    """Precomputed diagonal Fourier multipliers for one (grid, alpha).

    Attributes:
        wavenumbers: per-axis ``mu_k`` arrays in bin order.
        frac_laplacian: ``|mu_k|^alpha = (sum mu^2)^(alpha/2)`` (0 at k=0).
        dispersion: ``sqrt(1 + |mu_k|^alpha)`` (exactly 1 at k=0, >= 1).
    """

    grid: GridSpec
    alpha: float
    wavenumbers: tuple[np.ndarray, ...]
    frac_laplacian: np.ndarray
    dispersion: np.ndarray

    @property
    def inverse_dispersion(self) -> np.ndarray:
        return 1.0 / self.dispersion

    @property
    def half_frac_laplacian(self) -> np.ndarray:
        """Multiplier of the quarter-power Laplacian, ``|mu_k|^(alpha/2)``."""
        return np.sqrt(self.frac_laplacian)


def build_symbols(grid: GridSpec, alpha: float) -> SymbolSet:
    """Construct the multiplier arrays for the fractional operators."""
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    mu2 = squared_wavenumbers(grid)
    frac = mu2 ** (alpha / 2.0)
    dispersion = np.sqrt(1.0 + frac)
    return SymbolSet(
        grid=grid,
        alpha=float(alpha),
        wavenumbers=wavenumber_axes(grid),
        frac_laplacian=frac,
        dispersion=dispersion,
    )


def forward_transform(f: Field) -> Field:
    """Physical samples -> interpolation coefficients (1/prod(N) normalized)."""
    if f.space is not Space.PHYSICAL:
        raise ValueError("forward_transform expects a physical-space field")
    return Field(f.grid, Space.SPECTRAL, np.fft.fftn(f.values) / f.grid.size)


def inverse_transform(c: Field) -> Field:
    """Coefficients -> physical samples by the unnormalized exponential sum."""
    if c.space is not Space.SPECTRAL:
        raise ValueError("inverse_transform expects a spectral-space field")
    return Field(c.grid, Space.PHYSICAL, np.fft.ifftn(c.values) * c.grid.size)


def to_spectral(f: Field) -> Field:
    return f if f.space is Space.SPECTRAL else forward_transform(f)


def to_physical(f: Field) -> Field:
    return f if f.space is Space.PHYSICAL else inverse_transform(f)


def apply_symbol(c: Field, multiplier: np.ndarray | complex | float) -> Field:
    """Pointwise product with a diagonal multiplier in coefficient space."""
    if c.space is not Space.SPECTRAL:
        raise ValueError("apply_symbol expects a spectral-space field")
    m = np.asarray(multiplier)
    if m.ndim != 0 and m.shape != c.grid.shape:
        raise ValueError(f"multiplier shape {m.shape} does not match grid {c.grid.shape}")
    return Field(c.grid, Space.SPECTRAL, c.values * m)


def _resample_coefficients(values: np.ndarray, target_points: tuple[int, ...]) -> np.ndarray:
    out = values
    for axis, nt in enumerate(target_points):
        ns = out.shape[axis]
        if nt == ns:
            continue
        out = np.fft.fftshift(out, axes=axis)
        if nt < ns:
            lo = (ns - nt) // 2
            out = np.take(out, np.arange(lo, lo + nt), axis=axis)
        else:
            pad = [(0, 0)] * out.ndim
            lo = (nt - ns) // 2
            pad[axis] = (lo, nt - ns - lo)
            out = np.pad(out, pad)
        out = np.fft.ifftshift(out, axes=axis)
    return out


def resample(f: Field, target: GridSpec) -> Field:
    """Spectral zero-padding (up) or mode truncation (down) onto ``target``.

    Exact on band-limited fields; truncation equals restriction to the
    shared modes.  The input's physical/spectral tag is preserved.
    """
    if target.intervals != f.grid.intervals:
        raise ValueError(
            f"grids do not share intervals: {f.grid.intervals} vs {target.intervals}"
        )
    if target.points == f.grid.points:
        return f.copy()
    spectral = to_spectral(f)
    out_vals = _resample_coefficients(spectral.values, target.points)
    out = Field(target, Space.SPECTRAL, out_vals)
    if f.space is Space.PHYSICAL:
        out = inverse_transform(out)
    return out


def mode_bins(grid: GridSpec, mode: tuple[int, ...]) -> tuple[int, ...]:
    """Storage bin of an integer multi-index ``k`` (each in -N/2..N/2-1)."""
    bins = []
    for k, n in zip(mode, grid.points):
        if not -n // 2 <= k <= n // 2 - 1:
            raise ValueError(f"mode {k} outside representable range for N={n}")
        bins.append(k % n)
    return tuple(bins)


def coefficient_at(c: Field, mode: tuple[int, ...]) -> complex:
    """Coefficient of one integer multi-index in a spectral field."""
    if c.space is not Space.SPECTRAL:
        raise ValueError("coefficient_at expects a spectral-space field")
    return complex(c.values[mode_bins(c.grid, mode)])


def single_mode(grid: GridSpec, mode: tuple[int, ...], amplitude: complex = 1.0) -> Field:
    """Spectral field with one nonzero coefficient (handy for tests)."""
    vals = np.zeros(grid.shape, dtype=np.complex128)
    vals[mode_bins(grid, mode)] = amplitude
    return Field(grid, Space.SPECTRAL, vals)
