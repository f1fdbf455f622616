"""Norm, energy and twisted-diagnostic checks against closed forms."""

import numpy as np
import pytest

from frsg.dynamics import ModelParams, evolve, initial_state, strang_step
from frsg.observables import (
    EnergyTracker,
    cosine_potential,
    discrete_energy,
    error_norm,
    sobolev_norm,
    twisted_increment,
)
from frsg.scenarios import make_scenario
from frsg.spectral import (
    Field,
    GridSpec,
    Space,
    build_symbols,
    forward_transform,
    single_mode,
)

TWO_PI = 2.0 * np.pi


def square_grid(n=8):
    return GridSpec(((0.0, TWO_PI), (0.0, TWO_PI)), (n, n))


class TestSobolevNorm:
    def test_constant(self):
        g = square_grid()
        f = Field(g, Space.PHYSICAL, np.full(g.shape, -2.5 + 0j))
        for s in (0.0, 1.0, 0.75):
            assert sobolev_norm(f, s) == pytest.approx(2.5, rel=1e-12)

    def test_single_exponential(self):
        g = square_grid()
        x, _ = g.meshgrid()
        f = Field(g, Space.PHYSICAL, np.exp(1j * x))
        assert sobolev_norm(f, 1.0) == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_zero(self):
        g = square_grid()
        f = Field(g, Space.SPECTRAL, np.zeros(g.shape))
        assert sobolev_norm(f, 0.6) == 0.0

    def test_l2_matches_coefficient_norm(self):
        g = square_grid()
        rng = np.random.default_rng(2)
        c = Field(g, Space.SPECTRAL, rng.standard_normal(g.shape) + 0j)
        assert sobolev_norm(c, 0.0) == pytest.approx(
            np.linalg.norm(c.values), rel=1e-12
        )

    def test_monotone_in_exponent(self):
        g = square_grid()
        rng = np.random.default_rng(1)
        f = Field(
            g,
            Space.SPECTRAL,
            rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape),
        )
        norms = [sobolev_norm(f, s) for s in (0.0, 0.5, 1.0, 1.5)]
        assert all(b >= a for a, b in zip(norms, norms[1:]))


class TestErrorNorm:
    def test_identical(self):
        g = square_grid()
        f = single_mode(g, (1, 1), 2.0)
        assert error_norm(f, f, 1.0) == 0.0

    def test_single_mode_perturbation(self):
        g = square_grid()
        x, _ = g.meshgrid()
        ref = Field(g, Space.PHYSICAL, np.cos(x) + 0j)
        num = Field(g, Space.PHYSICAL, ref.values + 1e-3 * np.exp(1j * x))
        assert error_norm(num, ref, 1.0) == pytest.approx(np.sqrt(2.0) * 1e-3, rel=1e-10)

    def test_cross_resolution_band_limited(self):
        g8, g16 = square_grid(8), square_grid(16)
        x8, y8 = g8.meshgrid()
        x16, y16 = g16.meshgrid()
        f8 = Field(g8, Space.PHYSICAL, np.cos(x8) + np.sin(2 * y8))
        f16 = Field(g16, Space.PHYSICAL, np.cos(x16) + np.sin(2 * y16))
        assert error_norm(f8, f16, 1.0) < 1e-12
        assert error_norm(f16, f8, 1.0) < 1e-12  # symmetric up to resampling

    def test_interval_mismatch(self):
        a = single_mode(square_grid(), (0, 0))
        b = single_mode(GridSpec(((0, 1), (0, TWO_PI)), (8, 8)), (0, 0))
        with pytest.raises(ValueError):
            error_norm(a, b, 0.5)


class TestDiscreteEnergy:
    def test_zero_fields(self):
        g = square_grid()
        s = build_symbols(g, 2.0)
        zero = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        assert discrete_energy(zero, zero, s, 1.0) == 0.0

    def test_constant_displacement(self):
        # 2*(1 - cos(pi)) * (2*pi)^2 = 16*pi^2: potential term only
        g = square_grid()
        s = build_symbols(g, 2.0)
        u = Field(g, Space.PHYSICAL, np.full(g.shape, np.pi, dtype=complex))
        v = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        assert discrete_energy(u, v, s, 1.0) == pytest.approx(16 * np.pi**2, rel=1e-12)

    def test_unit_rate(self):
        g = square_grid()
        s = build_symbols(g, 1.5)
        u = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        v = Field(g, Space.PHYSICAL, np.ones(g.shape) + 0j)
        assert discrete_energy(u, v, s, 0.5) == pytest.approx(TWO_PI**2, rel=1e-12)

    def test_fractional_gradient_term(self):
        # u = cos(x): |(-Lap)^(alpha/4) u|^2 integrates to |mu|^alpha * 2*pi^2
        g = square_grid(16)
        alpha = 1.5
        s = build_symbols(g, alpha)
        x, _ = g.meshgrid()
        u = Field(g, Space.PHYSICAL, np.cos(x).astype(complex))
        v = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        # potential for eps -> small: (2/e^2)(1-cos(e*u)) ~ u^2, so subtract it
        eps = 1e-3
        e = discrete_energy(u, v, s, eps)
        # gradient: 1.0^alpha * ||cos||^2 = 2*pi^2; potential ~ ||u||^2 = 2*pi^2
        assert e == pytest.approx(2 * np.pi**2 + 2 * np.pi**2, rel=1e-5)

    def test_cosine_branch_agreement(self):
        u = np.array([1.0])
        for z, tol in [(5e-3, 1e-10), (1e-4, 3e-7)]:
            direct = cosine_potential(u, z, threshold=z / 2)
            series = cosine_potential(u, z, threshold=2 * z)
            assert direct[0] == pytest.approx(series[0], rel=tol)

    def test_complex_input_rejected(self):
        g = square_grid()
        s = build_symbols(g, 2.0)
        u = Field(g, Space.PHYSICAL, 1j * np.ones(g.shape))
        v = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        with pytest.raises(ValueError):
            discrete_energy(u, v, s, 1.0)


class TestEnergyTracker:
    def test_initial_drift_zero_and_stride(self):
        _, u0, u1 = make_scenario("smooth2d", 16)
        params = ModelParams(alpha=2.0, epsilon=0.5)
        state = initial_state(params, u0.grid, u0, u1)
        tracker = EnergyTracker(stride=2)
        evolve(state, 0.01, 6, observers=(tracker,))
        assert [s.step_index for s in tracker.samples] == [0, 2, 4, 6]
        assert tracker.samples[0].drift == 0.0
        assert tracker.max_abs_drift < 1e-3  # small for this short run


class TestTwistedIncrement:
    def _states(self, epsilon, tau, hook=None):
        _, u0, u1 = make_scenario("smooth2d", 32)
        params = ModelParams(alpha=2.0, epsilon=epsilon, nonlinearity=hook)
        before = initial_state(params, u0.grid, u0, u1)
        after = strang_step(before, tau)
        return before, after

    def test_zero_for_linear_flow(self):
        before, after = self._states(0.5, 0.02, hook=lambda u: np.zeros_like(u))
        assert twisted_increment(before, after, 1.0) < 1e-12

    def test_tau_scaling(self):
        eps = 0.5
        b1, a1 = self._states(eps, 0.02)
        b2, a2 = self._states(eps, 0.01)
        r = twisted_increment(b1, a1, 1.0) / twisted_increment(b2, a2, 1.0)
        assert 1.7 <= r <= 2.3

    def test_epsilon_scaling(self):
        tau = 0.02
        b1, a1 = self._states(0.5, tau)
        b2, a2 = self._states(0.25, tau)
        r = twisted_increment(b1, a1, 1.0) / twisted_increment(b2, a2, 1.0)
        assert 3.0 <= r <= 5.5

    def test_time_order_enforced(self):
        before, after = self._states(0.5, 0.02)
        with pytest.raises(ValueError):
            twisted_increment(after, before, 1.0)
