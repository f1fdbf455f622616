"""Grid, transform, multiplier and resampling checks.

Expected values come from closed forms or from a direct O(N^4) DFT sum that
never touches the FFT path.
"""

import numpy as np
import pytest

from frsg.spectral import (
    Field,
    GridSpec,
    Space,
    apply_symbol,
    build_symbols,
    coefficient_at,
    forward_transform,
    inverse_transform,
    mode_bins,
    require_real,
    resample,
    single_mode,
    wavenumber_axes,
)

TWO_PI = 2.0 * np.pi


def square_grid(n=8, length=TWO_PI):
    return GridSpec(((0.0, length), (0.0, length)), (n, n))


def dft2_oracle(grid, samples):
    """Direct O(N^4) evaluation of the interpolation coefficients."""
    mu_x, mu_y = wavenumber_axes(grid)
    x, y = grid.meshgrid()
    ax, ay = grid.intervals[0][0], grid.intervals[1][0]
    out = np.zeros(grid.shape, dtype=np.complex128)
    for i, mx in enumerate(mu_x):
        for j, my in enumerate(mu_y):
            phase = np.exp(-1j * (mx * (x - ax) + my * (y - ay)))
            out[i, j] = np.sum(samples * phase) / grid.size
    return out


class TestGridSpec:
    def test_nodes_and_spacing(self):
        g = GridSpec(((0.0, 1.0), (0.0, TWO_PI)), (8, 16))
        assert g.spacing == (1.0 / 8, TWO_PI / 16)
        x, y = g.axes()
        assert x[0] == 0.0 and np.allclose(np.diff(x), 1.0 / 8)
        assert y.shape == (16,)
        assert g.size == 128
        assert g.domain_volume == pytest.approx(TWO_PI)

    @pytest.mark.parametrize(
        "intervals,points",
        [
            (((0, 1), (0, 1)), (7, 8)),       # odd count
            (((0, 1), (0, 1)), (2, 8)),       # too few points
            (((1, 0), (0, 1)), (8, 8)),       # empty interval
            (((0, 1),), (8,)),                # 1D unsupported
            (((0, 1),) * 4, (8,) * 4),        # 4D unsupported
        ],
    )
    def test_invalid_grids_rejected(self, intervals, points):
        with pytest.raises(ValueError):
            GridSpec(intervals, points)

    def test_field_shape_validation(self):
        g = square_grid(4)
        with pytest.raises(ValueError):
            Field(g, Space.PHYSICAL, np.zeros((4, 5)))
        f = Field(g, Space.PHYSICAL, np.zeros(16))
        assert f.values.shape == (4, 4)

    def test_require_real(self):
        g = square_grid(4)
        ok = Field(g, Space.PHYSICAL, np.ones(g.shape) + 0j)
        assert np.all(require_real(ok) == 1.0)
        bad = Field(g, Space.PHYSICAL, np.ones(g.shape) + 1e-6j)
        with pytest.raises(ValueError):
            require_real(bad)


class TestSymbols:
    def test_zero_mode_identity(self):
        s = build_symbols(square_grid(), 2.0)
        assert s.dispersion[0, 0] == 1.0
        assert s.frac_laplacian[0, 0] == 0.0

    def test_first_mode_alpha2(self):
        s = build_symbols(square_grid(), 2.0)
        bins = mode_bins(s.grid, (1, 0))
        assert s.dispersion[bins] == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_diagonal_mode_alpha15(self):
        # sqrt(1 + (1^2 + 1^2)^(1.5/2)) evaluated independently
        s = build_symbols(square_grid(), 1.5)
        bins = mode_bins(s.grid, (1, 1))
        assert s.dispersion[bins] == pytest.approx(np.sqrt(1.0 + 2.0**0.75), rel=1e-12)

    def test_alpha_range_enforced(self):
        for alpha in (1.0, 0.5, 2.1):
            with pytest.raises(ValueError):
                build_symbols(square_grid(), alpha)

    def test_dispersion_bounds_and_symmetry(self):
        g = GridSpec(((0.0, 1.0), (0.0, TWO_PI)), (12, 8))
        s = build_symbols(g, 1.7)
        assert np.all(s.dispersion >= 1.0)
        for k in [(1, 2), (3, -3), (-5, 1), (2, -3)]:
            minus = tuple(-c for c in k)
            assert (
                s.dispersion[mode_bins(g, k)] == s.dispersion[mode_bins(g, minus)]
            )  # bit exact


class TestTransforms:
    def test_constant_is_dc_only(self):
        g = square_grid()
        f = Field(g, Space.PHYSICAL, np.full(g.shape, 3.5 + 0j))
        c = forward_transform(f)
        assert coefficient_at(c, (0, 0)) == pytest.approx(3.5, abs=1e-13)
        rest = c.values.copy()
        rest[0, 0] = 0.0
        assert np.max(np.abs(rest)) < 1e-13

    def test_single_exponential(self):
        g = square_grid(8)
        x, _ = g.meshgrid()
        f = Field(g, Space.PHYSICAL, np.exp(1j * x))
        c = forward_transform(f)
        assert coefficient_at(c, (1, 0)) == pytest.approx(1.0, abs=1e-13)
        picked = c.values.copy()
        picked[mode_bins(g, (1, 0))] = 0.0
        assert np.max(np.abs(picked)) < 1e-13

    def test_cosine_against_direct_dft(self):
        g = square_grid(6)
        x, _ = g.meshgrid()
        f = Field(g, Space.PHYSICAL, np.cos(x).astype(np.complex128))
        c = forward_transform(f)
        assert coefficient_at(c, (1, 0)) == pytest.approx(0.5, abs=1e-13)
        assert coefficient_at(c, (-1, 0)) == pytest.approx(0.5, abs=1e-13)
        oracle = dft2_oracle(g, f.values)
        assert np.max(np.abs(c.values - oracle)) < 1e-12

    def test_random_field_against_direct_dft(self):
        g = GridSpec(((0.0, 1.0), (-2.0, 3.0)), (6, 4))
        rng = np.random.default_rng(7)
        vals = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        f = Field(g, Space.PHYSICAL, vals)
        c = forward_transform(f)
        oracle = dft2_oracle(g, vals)
        assert np.max(np.abs(c.values - oracle)) < 1e-12 * np.max(np.abs(oracle))

    def test_inverse_examples(self):
        g = square_grid(8)
        zero = Field(g, Space.SPECTRAL, np.zeros(g.shape))
        assert np.all(inverse_transform(zero).values == 0.0)

        dc = single_mode(g, (0, 0), 1.0)
        assert np.allclose(inverse_transform(dc).values, 1.0, atol=1e-14)

        pair = Field(g, Space.SPECTRAL, np.zeros(g.shape, dtype=np.complex128))
        pair.values[mode_bins(g, (1, 0))] = 0.5
        pair.values[mode_bins(g, (-1, 0))] = 0.5
        x, _ = g.meshgrid()
        assert np.max(np.abs(inverse_transform(pair).values - np.cos(x))) < 1e-13

    def test_round_trip(self):
        g = GridSpec(((0.0, 1.0), (0.0, TWO_PI)), (16, 12))
        rng = np.random.default_rng(3)
        vals = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        f = Field(g, Space.PHYSICAL, vals)
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - vals)) < 1e-12 * np.max(np.abs(vals))

    def test_space_tags_enforced(self):
        g = square_grid(4)
        phys = Field(g, Space.PHYSICAL, np.zeros(g.shape))
        spec = Field(g, Space.SPECTRAL, np.zeros(g.shape))
        with pytest.raises(ValueError):
            forward_transform(spec)
        with pytest.raises(ValueError):
            inverse_transform(phys)

    def test_parseval(self):
        rng = np.random.default_rng(11)
        for shape in [(8, 8), (16, 6), (6, 8, 4)]:
            intervals = tuple((0.0, 1.0 + i) for i in range(len(shape)))
            g = GridSpec(intervals, shape)
            vals = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            f = Field(g, Space.PHYSICAL, vals)
            c = forward_transform(f)
            lhs = g.cell_volume * np.sum(np.abs(vals) ** 2)
            rhs = g.domain_volume * np.sum(np.abs(c.values) ** 2)
            assert lhs == pytest.approx(rhs, rel=1e-10)


class TestApplySymbol:
    def test_identity_multiplier(self):
        g = square_grid()
        c = single_mode(g, (2, -1), 0.3 + 0.4j)
        out = apply_symbol(c, 1.0)
        assert np.array_equal(out.values, c.values)

    def test_inverse_pair(self):
        g = square_grid()
        s = build_symbols(g, 1.5)
        rng = np.random.default_rng(5)
        c = Field(g, Space.SPECTRAL, rng.standard_normal(g.shape) + 0j)
        out = apply_symbol(apply_symbol(c, s.inverse_dispersion), s.dispersion)
        assert np.max(np.abs(out.values - c.values)) < 1e-12

    def test_phase_on_single_mode(self):
        g = square_grid()
        s = build_symbols(g, 2.0)
        c = single_mode(g, (1, 0), 1.0)
        t = 0.5
        out = apply_symbol(c, np.exp(1j * t * s.dispersion))
        expected = np.exp(1j * 0.5 * np.sqrt(2.0))
        assert coefficient_at(out, (1, 0)) == pytest.approx(expected, abs=1e-14)

    def test_phase_is_unitary(self):
        g = square_grid()
        s = build_symbols(g, 1.3)
        rng = np.random.default_rng(9)
        c = Field(
            g,
            Space.SPECTRAL,
            rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape),
        )
        out = apply_symbol(c, np.exp(1j * 0.37 * s.dispersion))
        assert np.max(np.abs(np.abs(out.values) - np.abs(c.values))) < 1e-14

    def test_shape_mismatch_rejected(self):
        g = square_grid()
        c = single_mode(g, (0, 0))
        with pytest.raises(ValueError):
            apply_symbol(c, np.ones((3, 3)))


class TestResample:
    def test_same_grid_identity(self):
        g = square_grid(8)
        c = single_mode(g, (2, 1), 1.5)
        out = resample(c, g)
        assert np.array_equal(out.values, c.values)

    def test_band_limited_upsample(self):
        g8, g16 = square_grid(8), square_grid(16)
        c = single_mode(g8, (1, 0), 2.0 - 1.0j)
        up = resample(c, g16)
        assert coefficient_at(up, (1, 0)) == pytest.approx(2.0 - 1.0j, abs=1e-14)
        assert np.sum(np.abs(up.values) > 1e-14) == 1

    def test_truncation_drops_unresolved_mode(self):
        g16, g4 = square_grid(16), square_grid(4)
        x, _ = g16.meshgrid()
        f = Field(g16, Space.PHYSICAL, np.cos(3.0 * x).astype(complex))
        down = resample(f, g4)
        assert np.max(np.abs(down.values)) < 1e-13

    def test_up_down_round_trip(self):
        g8, g16 = square_grid(8), square_grid(16)
        rng = np.random.default_rng(13)
        f = Field(g8, Space.PHYSICAL, rng.standard_normal(g8.shape) + 0j)
        back = resample(resample(f, g16), g8)
        assert np.max(np.abs(back.values - f.values)) < 1e-12

    def test_nyquist_handling(self):
        g8, g16 = square_grid(8), square_grid(16)
        c = single_mode(g8, (-4, 0), 1.0)  # Nyquist on the coarse grid
        up = resample(c, g16)
        assert coefficient_at(up, (-4, 0)) == pytest.approx(1.0, abs=1e-14)

    def test_interval_mismatch_rejected(self):
        g = square_grid(8)
        other = GridSpec(((0.0, 1.0), (0.0, TWO_PI)), (8, 8))
        with pytest.raises(ValueError):
            resample(single_mode(g, (0, 0)), other)

    def test_physical_round_trip_preserves_tag(self):
        g8, g16 = square_grid(8), square_grid(16)
        x, y = g8.meshgrid()
        f = Field(g8, Space.PHYSICAL, np.cos(x) + np.sin(y))
        up = resample(f, g16)
        assert up.space is Space.PHYSICAL
        xf, yf = g16.meshgrid()
        assert np.max(np.abs(up.values - (np.cos(xf) + np.sin(yf)))) < 1e-12
