"""Sobolev norms, reference-error functional, discrete energy, twisted diagnostic.

Norms are computed from interpolation coefficients with weights
``(1 + |mu_k|^2)^s``; ``s = 0`` is the plain coefficient l2 norm.  The
discrete energy is the grid quadrature of

    |v|^2 + |(-Lap)^(alpha/4) u|^2 + (2/eps^2) * (1 - cos(eps*u)),

which the continuous flow conserves.  The twisted increment measures how far
one step moves the interaction-picture variable ``exp(-i*t*D) * phi`` and is
the direct observable for the slow (eps^2 * tau) drift of weakly nonlinear
runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import State, linear_phase, reconstruct_uv
from .spectral import Field, GridSpec, SymbolSet, resample, squared_wavenumbers, to_spectral


@lru_cache(maxsize=None)
def _sobolev_weights(grid: GridSpec, s: float) -> np.ndarray:
    return (1.0 + squared_wavenumbers(grid)) ** s


def sobolev_norm(f: Field, s: float) -> float:
    """H^s norm from coefficients; transforms physical input automatically."""
    c = to_spectral(f)
    w = _sobolev_weights(f.grid, float(s))
    return float(np.sqrt(np.sum(w * np.abs(c.values) ** 2)))


def error_norm(num: Field, ref: Field, s: float) -> float:
    """H^s norm of the difference, resampling the coarser grid to the finer."""
    if num.grid.intervals != ref.grid.intervals:
        raise ValueError("fields live on different domains")
    if num.grid.size < ref.grid.size:
        num = resample(num, ref.grid)
    elif ref.grid.size < num.grid.size:
        ref = resample(ref, num.grid)
    a = to_spectral(num).values
    b = to_spectral(ref).values
    w = _sobolev_weights(num.grid, float(s))
    return float(np.sqrt(np.sum(w * np.abs(a - b) ** 2)))


def cosine_potential(u: np.ndarray, epsilon: float, threshold: float = 1e-4) -> np.ndarray:
    """Pointwise ``(2/eps^2) * (1 - cos(eps*u))`` with a small-argument series.

    For ``eps*|u| < threshold`` uses ``u^2 - eps^2 u^4/12 + eps^4 u^6/360``,
    avoiding the cancellation of ``1 - cos`` near zero.
    """
    u = np.asarray(u)
    e2 = epsilon * epsilon
    direct = (2.0 / e2) * (1.0 - np.cos(epsilon * u))
    u2 = u * u
    series = u2 - e2 * u2 * u2 / 12.0 + e2 * e2 * u2 * u2 * u2 / 360.0
    return np.where(epsilon * np.abs(u) >= threshold, direct, series)


def _real_samples(f: Field, scale: float, name: str) -> np.ndarray:
    im = float(np.max(np.abs(f.values.imag)))
    if im > 1e-10 * scale:
        raise ValueError(f"{name} must be real-valued: max|imag| = {im:.3e}")
    return f.values.real


def discrete_energy(
    u: Field,
    v: Field,
    symbols: SymbolSet,
    epsilon: float,
    threshold: float = 1e-4,
) -> float:
    """Grid quadrature of the conserved kinetic + fractional + cosine energy."""
    if u.grid != v.grid or u.grid != symbols.grid:
        raise ValueError("energy inputs must share one grid")
    scale = max(
        1.0, float(np.max(np.abs(u.values))), float(np.max(np.abs(v.values)))
    )
    ur = _real_samples(u, scale, "u")
    vr = _real_samples(v, scale, "v")
    size = u.grid.size
    u_hat = np.fft.fftn(ur) / size
    grad = np.fft.ifftn(symbols.half_frac_laplacian * u_hat) * size
    density = vr**2 + np.abs(grad) ** 2 + cosine_potential(ur, epsilon, threshold)
    return float(u.grid.cell_volume * np.sum(density))


@dataclass
class EnergySample:
    """One discrete-energy reading along a trajectory."""

    step_index: int
    time: float
    value: float
    drift: float


class EnergyTracker:
    """Trajectory observer recording the discrete energy every ``stride`` steps.

    Only meaningful for real-variant states (the energy needs real u, v).
    """

    def __init__(self, stride: int = 1):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.stride = stride
        self.samples: list[EnergySample] = []
        self._reference: float | None = None

    def __call__(self, step_index: int, state: State) -> None:
        if step_index % self.stride != 0:
            return
        u, v = reconstruct_uv(state)
        e = discrete_energy(
            u, v, state.symbols, state.params.epsilon, state.params.taylor_threshold
        )
        if self._reference is None:
            self._reference = e
        self.samples.append(
            EnergySample(step_index, state.time, e, e - self._reference)
        )

    @property
    def max_abs_drift(self) -> float:
        return max(abs(s.drift) for s in self.samples)


def twisted_increment(before: State, after: State, s: float) -> float:
    """H^s distance between the interaction-picture variables of two states.

    With the nonlinearity switched off the quantity vanishes identically;
    along real runs it scales like eps^2 * tau per step.
    """
    if not after.time > before.time:
        raise ValueError("states must be strictly time-ordered")
    if after.grid != before.grid:
        raise ValueError("states live on different grids")
    xb = linear_phase(before.symbols, -before.time) * before.primary_coefficients()
    xa = linear_phase(after.symbols, -after.time) * after.primary_coefficients()
    w = _sobolev_weights(before.grid, float(s))
    return float(np.sqrt(np.sum(w * np.abs(xa - xb) ** 2)))
