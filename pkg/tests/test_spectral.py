import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkp.spectral import (
    Grid,
    GridFunction,
    Symbol,
    apply_symbol,
    bessel_symbol,
    bump_phi,
    bump_profile,
    bump_psi,
    evaluate_bump,
    fractional_op,
    gradient,
    lp_project,
    make_grid,
    random_bandlimited,
)


def plane_wave(grid, k_index):
    """exp(i xi0 . x) with xi0 the grid frequency of integer index k_index."""
    xi0 = 2 * np.pi * np.asarray(k_index, dtype=float) / grid.side_length
    phase = sum(x * w for x, w in zip(grid.mesh, xi0))
    return GridFunction(grid, np.exp(1j * phase)), xi0


def reference_phi(r):
    """Scalar transcription of the bump used as an oracle."""
    r = abs(r)
    if r <= 1:
        return 1.0
    if r >= 2:
        return 0.0
    q = lambda t: math.exp(-1.0 / t) if t > 0 else 0.0  # noqa: E731
    return q(2 - r) / (q(2 - r) + q(r - 1))


class TestGrid:
    def test_coordinates_and_frequencies(self):
        g = make_grid(1, 2 * np.pi, 8)
        np.testing.assert_allclose(g.coords, -np.pi + np.pi / 4 * np.arange(8))
        k = np.sort(np.round(g.freqs * g.side_length / (2 * np.pi)))
        np.testing.assert_array_equal(k, np.arange(-4, 4))

    def test_sizes_and_nyquist(self):
        g = make_grid(2, 32.0, 256)
        assert g.size == 65536
        assert g.nyquist == pytest.approx(8 * np.pi)

    @pytest.mark.parametrize("args", [(1, 2.0, 7), (1, 0.0, 8), (1, -1.0, 8), (4, 1.0, 8), (1, 1.0, 6)])
    def test_rejects_bad_parameters(self, args):
        with pytest.raises(ValueError):
            make_grid(*args)

    def test_grid_function_length_checked(self):
        g = make_grid(1, 1.0, 8)
        with pytest.raises(ValueError):
            GridFunction(g, np.zeros(9))


class TestBump:
    @pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 1.2, 1.5, 1.77, 1.999, 2.0, 3.0])
    def test_phi_matches_formula(self, r):
        assert bump_phi(np.array([r]))[0] == pytest.approx(reference_phi(r), abs=1e-15)

    @pytest.mark.parametrize(
        "kind, r, expected", [("Phi", 0.5, 1.0), ("Phi", 3.0, 0.0), ("Psi", 1.0, 1.0), ("Psi", 0.25, 0.0)]
    )
    def test_documented_values(self, kind, r, expected):
        assert evaluate_bump(kind, r) == expected

    def test_vector_argument_is_radial(self):
        assert evaluate_bump("Phi", np.array([0.9, 0.9])) == pytest.approx(reference_phi(math.hypot(0.9, 0.9)))

    def test_monotone_and_bounded(self):
        r = np.linspace(0, 3, 3001)
        phi = bump_phi(r)
        assert np.all(np.diff(phi) <= 0)
        psi = bump_psi(r)
        assert psi.min() >= 0 and psi.max() <= 1
        assert np.all(psi[(r <= 0.5) | (r >= 2)] == 0)

    @pytest.mark.parametrize("K", [1, 3, 6, 10])
    def test_partition_of_unity(self, K):
        r = np.linspace(0, 2.0**K, 20001)
        total = bump_phi(r) + sum(bump_psi(2.0 ** (-j) * r) for j in range(1, K + 1))
        assert np.max(np.abs(total - 1)) <= 1e-14

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            evaluate_bump("Chi", 1.0)


class TestApplySymbol:
    def test_transform_round_trip(self, grid1d, rng):
        f = GridFunction(grid1d, rng.standard_normal(grid1d.shape) + 1j * rng.standard_normal(grid1d.shape))
        back = GridFunction.from_spectrum(grid1d, f.spectrum())
        assert np.max(np.abs(back.samples - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))

    def test_identity_symbol(self, grid1d, rng):
        f = random_bandlimited(grid1d, 5.0, rng)
        out = apply_symbol(f, Symbol(lambda xi: np.ones(xi.shape[1:])))
        assert np.max(np.abs(out.samples - f.samples)) <= 1e-12

    @pytest.mark.parametrize("kidx", [(0,), (3,), (-17,), (50,)])
    def test_plane_wave_eigenfunction(self, grid1d, kidx):
        f, xi0 = plane_wave(grid1d, kidx)
        m = bessel_symbol(1.7)
        out = apply_symbol(f, m)
        expected = (1 + xi0 @ xi0) ** 0.85 * f.samples
        np.testing.assert_allclose(out.samples, expected, rtol=1e-12, atol=1e-12)

    def test_plane_wave_2d(self, grid2d):
        f, xi0 = plane_wave(grid2d, (3, -5))
        out = fractional_op(f, "D", 2.0)
        np.testing.assert_allclose(out.samples, (xi0 @ xi0) * f.samples, rtol=1e-11, atol=1e-11)

    @pytest.mark.parametrize("s", [0.5, 1.5, 2.0, 3.7])
    def test_bessel_inverse(self, grid1d, rng, s):
        f = random_bandlimited(grid1d, 20.0, rng)
        back = fractional_op(fractional_op(f, "J", s), "J", -s)
        assert np.max(np.abs(back.samples - f.samples)) <= 1e-10 * np.max(np.abs(f.samples))

    def test_nonfinite_symbol_names_frequency(self, grid1d, rng):
        f = random_bandlimited(grid1d, 5.0, rng)
        bad = Symbol(lambda xi: np.divide(1.0, xi[0], out=np.full(xi.shape[1:], np.inf), where=xi[0] != 0))
        with pytest.raises(ValueError, match=r"frequency \(0\.0"):
            apply_symbol(f, bad)

    @settings(max_examples=30, deadline=None)
    @given(
        alpha=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        beta=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        s=st.floats(-3, 3),
        seed=st.integers(0, 2**31),
    )
    def test_linearity(self, alpha, beta, s, seed):
        grid = make_grid(1, 16.0, 64)
        rng = np.random.default_rng(seed)
        f = random_bandlimited(grid, 4.0, rng)
        g = random_bandlimited(grid, 4.0, rng)
        m = bessel_symbol(s)
        lhs = apply_symbol(f * alpha + g * beta, m)
        rhs = apply_symbol(f, m) * alpha + apply_symbol(g, m) * beta
        scale = 1 + abs(alpha) + abs(beta)
        assert np.max(np.abs(lhs.samples - rhs.samples)) <= 1e-12 * scale * max(1.0, np.max(np.abs(lhs.samples)))

    @settings(max_examples=20, deadline=None)
    @given(s1=st.floats(-2, 2), s2=st.floats(-2, 2), seed=st.integers(0, 2**31))
    def test_composition(self, s1, s2, seed):
        grid = make_grid(1, 16.0, 64)
        f = random_bandlimited(grid, 4.0, np.random.default_rng(seed))
        two_step = apply_symbol(apply_symbol(f, bessel_symbol(s1)), bessel_symbol(s2))
        one_step = apply_symbol(f, bessel_symbol(s1) * bessel_symbol(s2))
        assert np.max(np.abs(two_step.samples - one_step.samples)) <= 1e-12 * max(1.0, np.max(np.abs(one_step.samples)))


class TestFractionalOp:
    def test_constant_is_fixed_by_bessel(self, grid1d):
        c = GridFunction.constant(grid1d, 2.5)
        out = fractional_op(c, "J", 7.3)
        np.testing.assert_allclose(out.samples, 2.5, rtol=1e-12)

    def test_j_equals_j_delta_at_one(self, grid1d, rng):
        f = random_bandlimited(grid1d, 10.0, rng)
        a = fractional_op(f, "J", 1.3)
        b = fractional_op(f, "J_delta", 1.3, 1.0)
        np.testing.assert_array_equal(a.samples, b.samples)

    @pytest.mark.parametrize("s", [0.0, -0.5])
    def test_riesz_needs_positive_order(self, grid1d, s):
        with pytest.raises(ValueError):
            fractional_op(GridFunction.constant(grid1d, 1.0), "D", s)

    @pytest.mark.parametrize("delta", [0.0, 1.5, None])
    def test_j_delta_range(self, grid1d, delta):
        with pytest.raises(ValueError):
            fractional_op(GridFunction.constant(grid1d, 1.0), "J_delta", 1.0, delta)

    def test_riesz_kills_constants(self, grid1d):
        out = fractional_op(GridFunction.constant(grid1d, 1.0), "D", 0.7)
        assert np.max(np.abs(out.samples)) <= 1e-14


class TestGradient:
    def test_constant(self, grid2d):
        for comp in gradient(GridFunction.constant(grid2d, 3.0)):
            assert np.max(np.abs(comp.samples)) <= 1e-14

    def test_sine(self):
        g = make_grid(1, 5.0, 64)
        x = g.coords
        f = GridFunction(g, np.sin(2 * np.pi * x / 5.0))
        (df,) = gradient(f)
        np.testing.assert_allclose(df.samples, (2 * np.pi / 5.0) * np.cos(2 * np.pi * x / 5.0), atol=1e-12)

    def test_plane_wave(self, grid1d):
        f, xi0 = plane_wave(grid1d, (9,))
        (df,) = gradient(f)
        np.testing.assert_allclose(df.samples, 1j * xi0[0] * f.samples, atol=1e-12)


class TestLittlewoodPaley:
    @pytest.mark.parametrize("j", [2, 3, 4])
    def test_annulus_mode_unchanged(self, j):
        grid = make_grid(1, 2 * np.pi, 128)  # integer frequencies
        f, _ = plane_wave(grid, (2**j,))
        out = lp_project(f, "Delta", j)
        np.testing.assert_allclose(out.samples, f.samples, atol=1e-13)

    @pytest.mark.parametrize("K", [2, 4, 5])
    def test_reproducing_formula(self, rng, K):
        grid = make_grid(1, 32.0, 512)
        f = random_bandlimited(grid, 2.0**K, rng)
        total = lp_project(f, "S", 0)
        for j in range(1, K + 2):
            total = total + lp_project(f, "Delta", j)
        assert np.max(np.abs(total.samples - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))

    def test_low_pass_at_nyquist(self, grid1d, rng):
        f = GridFunction(grid1d, rng.standard_normal(grid1d.shape))
        j = int(np.ceil(np.log2(grid1d.nyquist * np.sqrt(grid1d.dim)))) + 1
        out = lp_project(f, "S", j)
        np.testing.assert_allclose(out.samples, f.samples, atol=1e-13)

    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_delta_spectral_support(self, rng, j):
        grid = make_grid(1, 32.0, 512)
        f = GridFunction(grid, rng.standard_normal(grid.shape))
        spec = np.abs(lp_project(f, "Delta", j).spectrum())
        r = grid.freq_radius
        outside = (r < 2.0 ** (j - 1)) | (r > 2.0 ** (j + 1))
        assert spec[outside].max(initial=0) <= 1e-14 * spec.max()

    def test_delta_tilde_sums_five_pieces(self, grid1d, rng):
        f = random_bandlimited(grid1d, 20.0, rng)
        direct = sum((lp_project(f, "Delta", k) for k in range(0, 5)), GridFunction.constant(grid1d, 0.0))
        tilde = lp_project(f, "DeltaTilde", 2)
        np.testing.assert_allclose(tilde.samples, direct.samples, atol=1e-13)

    def test_negative_index(self, grid1d):
        f, _ = plane_wave(grid1d, (0,))
        np.testing.assert_allclose(lp_project(f, "S", -3).samples, f.samples, atol=1e-14)


class TestProfiles:
    def test_phi_hat_matches_quadrature(self):
        from scipy import integrate

        # A long box keeps the periodic images of the slowly decaying
        # transform below the comparison tolerance.
        grid = make_grid(1, 256.0, 4096)
        prof = bump_profile(grid, "Phi")
        for x in (0.0, 0.75, 3.125):
            i = int(np.argmin(np.abs(grid.coords - x)))
            assert grid.coords[i] == x
            ref = 2 * integrate.quad(lambda t: reference_phi(t) * math.cos(x * t), 0, 2, limit=200, epsabs=1e-13)[0]
            assert prof.samples[i] == pytest.approx(ref, abs=1e-8)

    def test_modulation(self):
        grid = make_grid(1, 16 * np.pi, 1024)
        base = bump_profile(grid, "Phi")
        mod = bump_profile(grid, "Phi", shift=8.0)
        np.testing.assert_allclose(mod.samples, np.exp(8j * grid.coords) * base.samples, atol=1e-10)

    def test_band_guard(self):
        grid = make_grid(1, 8.0, 32)
        with pytest.raises(ValueError, match="Nyquist"):
            bump_profile(grid, "Phi", shift=5.0)

    def test_random_bandlimited_band(self, grid1d, rng):
        f = random_bandlimited(grid1d, 6.0, rng)
        spec = np.abs(f.spectrum())
        assert spec[grid1d.freq_radius > 6.0].max() <= 1e-14 * spec.max()
        assert np.max(np.abs(f.samples.imag)) == 0.0
