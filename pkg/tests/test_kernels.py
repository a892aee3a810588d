import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from wkp import _kernels_py
from wkp._backend import BACKEND
from wkp.kernels import (
    jsdelta_kernel_constant,
    jsdelta_tail_profile,
    kernel_ball_integral,
    kernel_bound_check,
    kernel_convolution_oracle,
    kernel_ks_delta,
    kernel_values,
    tail_exponent_fit,
)
from wkp.quadrature import QuadratureError, tanh_sinh
from wkp.spectral import GridFunction, fractional_op, make_grid, random_bandlimited


def bessel_k_closed_form(y, s, delta, n):
    """int_0^inf t^{nu-1} e^{-y^2/t - delta^2 t} dt = 2 (y/delta)^nu K_nu(2 delta y), nu = -(s+n)/2."""
    nu = -0.5 * (s + n)
    return 2.0 * (y / delta) ** nu * special.kv(nu, 2.0 * delta * y)


class TestTanhSinh:
    @pytest.mark.parametrize(
        "f, a, b, exact",
        [
            (np.exp, 0.0, 1.0, math.e - 1),
            (lambda x: x**-0.5, 0.0, 1.0, 2.0),
            (lambda x: np.log(x), 0.0, 1.0, -1.0),
            (lambda x: 1 / (1 + x * x), -1.0, 1.0, math.pi / 2),
        ],
    )
    def test_known_integrals(self, f, a, b, exact):
        val, err = tanh_sinh(f, a, b, rtol=1e-12)
        assert val == pytest.approx(exact, rel=1e-12)
        assert err <= 1e-10

    def test_failure_raises(self):
        with pytest.raises(QuadratureError):
            tanh_sinh(lambda x: np.sin(1e4 * x), 0.0, 1.0, rtol=1e-14)


class TestKernelValues:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("s", [-2.5, -1.0, -0.3, 0.5, 2.0])
    @pytest.mark.parametrize("delta", [1.0, 0.25, 1e-3])
    @pytest.mark.parametrize("y", [1e-3, 0.1, 1.0, 7.5, 40.0])
    def test_matches_bessel_closed_form(self, n, s, delta, y):
        ref = bessel_k_closed_form(y, s, delta, n)
        if not ref > 1e-290:
            pytest.skip("reference underflows")
        assert kernel_ks_delta(y, s, delta, n).value == pytest.approx(ref, rel=1e-8)

    @pytest.mark.parametrize("s, n", [(-0.5, 1), (0.5, 1), (-1.5, 3), (1.0, 2)])
    def test_small_delta_gamma_limit(self, s, n):
        # delta -> 0 limit: Gamma((s+n)/2) |y|^{-(s+n)}, approached like delta^{s+n}
        y = 2.0
        ref = special.gamma(0.5 * (s + n)) * y ** (-(s + n))
        assert kernel_ks_delta(y, s, 1e-12, n).value == pytest.approx(ref, rel=1e-4)

    def test_mpmath_high_precision(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 30
        y, s, delta, n = 3.3, -0.7, 0.4, 2
        ref = mpmath.quad(
            lambda t: mpmath.exp(-y * y / t - delta * delta * t) * t ** (-(s + n) / 2) / t, [0, y * y, 1 / delta**2, mpmath.inf]
        )
        assert kernel_ks_delta(y, s, delta, n).value == pytest.approx(float(ref), rel=1e-10)

    def test_monotone_in_radius(self):
        r = np.linspace(0.05, 30, 200)
        v, _ = kernel_values(r, -0.8, 0.3, 2)
        assert np.all(np.diff(v) < 0)

    def test_error_estimates_reported(self):
        ev = kernel_ks_delta(1.5, -0.5, 0.5, 1)
        assert 0 <= ev.quad_error_estimate <= 1e-8 * ev.value

    @pytest.mark.parametrize(
        "args", [(0.0, -0.5, 0.5, 1), (1.0, -0.5, 0.0, 1), (1.0, -0.5, 1.5, 1), (1.0, -0.5, 0.5, 4), (1.0, math.nan, 0.5, 1)]
    )
    def test_rejects_bad_arguments(self, args):
        with pytest.raises(ValueError):
            kernel_ks_delta(*args)

    @settings(max_examples=40, deadline=None)
    @given(
        y=st.floats(0.01, 50),
        s=st.floats(-2.9, 3.0),
        delta=st.floats(1e-3, 1.0),
        n=st.sampled_from([1, 2, 3]),
    )
    def test_closed_form_property(self, y, s, delta, n):
        ref = bessel_k_closed_form(y, s, delta, n)
        if not 1e-280 < ref < 1e280:
            return
        assert kernel_ks_delta(y, s, delta, n).value == pytest.approx(ref, rel=1e-8)


class TestBackends:
    def test_backends_agree(self):
        radii = np.geomspace(1e-3, 80, 300)
        py, _ = _kernels_py.kernel_batch(radii, -0.6, 0.2, 2, 1e-10)
        cur, _ = kernel_values(radii, -0.6, 0.2, 2)
        np.testing.assert_allclose(cur, py, rtol=1e-13)

    def test_compiled_core_is_default_when_built(self):
        try:
            from wkp import _ckernels  # noqa: F401
        except ImportError:
            assert BACKEND == "python"
        else:
            if os.environ.get("WKP_PURE_PYTHON", "") in ("1", "true", "yes"):
                assert BACKEND == "python"
            else:
                assert BACKEND == "cython"

    def test_environment_forces_fallback(self):
        env = dict(os.environ, WKP_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", "import wkp; print(wkp.BACKEND)"], env=env, capture_output=True, text=True, check=True
        )
        assert out.stdout.strip() == "python"


class TestEnvelope:
    @pytest.mark.parametrize("y", [1.0, 2.0, 5.0, 20.0])
    @pytest.mark.parametrize("delta", [1.0, 0.5, 0.1])
    @pytest.mark.parametrize("s, n", [(-0.5, 1), (-1.0, 2), (-0.2, 3)])
    def test_within_envelope(self, y, delta, s, n):
        value, env, ok = kernel_bound_check(y, s, delta, n)
        assert ok, (value, env)

    def test_anchor_is_exact(self):
        value, env, ok = kernel_bound_check(1.0, -0.5, 1.0, 1)
        assert value == pytest.approx(env, rel=1e-14) and ok

    def test_positive_order_rejected(self):
        with pytest.raises(ValueError, match="s < 0"):
            kernel_bound_check(2.0, 0.5, 0.5, 1)

    def test_small_radius_rejected(self):
        with pytest.raises(ValueError):
            kernel_bound_check(0.5, -0.5, 0.5, 1)


class TestTailFit:
    @pytest.mark.parametrize("exponent", [-1.3, -2.0, -5.0, 0.5])
    def test_exact_power_law(self, exponent):
        r = np.geomspace(1, 100, 7)
        fit = tail_exponent_fit(r, 3.0 * r**exponent)
        assert fit.fitted_exponent == pytest.approx(exponent, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
        assert fit.fit_residual < 1e-12

    @pytest.mark.parametrize(
        "r, v",
        [([1, 2, 3], [1, 1, 1]), ([1, 2, 2, 3], [1, 1, 1, 1]), ([1, 2, 3, 4], [1, 0, 1, 1]), ([1, 2, 3, 4], [1, 1, np.nan, 1])],
    )
    def test_rejects_invalid(self, r, v):
        with pytest.raises(ValueError):
            tail_exponent_fit(np.array(r, float), np.array(v, float))

    def test_smooth_function_has_fast_tail(self):
        # J^2 of a Gaussian is a Gaussian times a polynomial
        grid = make_grid(1, 64.0, 512)
        f = GridFunction(grid, np.exp(-grid.coords**2 / 2))
        fit = jsdelta_tail_profile(f, 2.0, 1.0, np.geomspace(4, 8, 5), pad_factor=4)
        assert fit.fitted_exponent < -10


class TestConvolutionOracle:
    def test_constant_converges_first_order(self):
        # the multiplier at xi = 0 is delta^s = 2; the origin-cell
        # treatment limits the oracle to O(h) accuracy
        errs = []
        for N in (256, 1024):
            grid = make_grid(1, 64.0, N)
            out = kernel_convolution_oracle(GridFunction.constant(grid, 1.0), -1.0, 0.5)
            np.testing.assert_allclose(out.samples.real, out.samples.real[0], rtol=1e-12)
            errs.append(abs(out.samples.real[0] / 2.0 - 1.0))
        assert errs[1] < 2e-3
        assert 3.0 < errs[0] / errs[1] < 5.0

    def test_zero_function(self):
        grid = make_grid(1, 16.0, 64)
        out = kernel_convolution_oracle(GridFunction.constant(grid, 0.0), -0.5, 0.5)
        assert np.all(out.samples == 0)

    @pytest.mark.parametrize("s", [-0.7, -1.5])
    def test_agrees_with_spectral_route(self, s):
        grid = make_grid(1, 32.0, 1024)
        f = random_bandlimited(grid, 3.0, np.random.default_rng(3), window=1.0)
        spec = fractional_op(f, "J_delta", s, 0.5)
        oracle = kernel_convolution_oracle(f, s, 0.5)
        err = np.max(np.abs(oracle.samples - spec.samples)) / np.max(np.abs(spec.samples))
        assert err < 5e-3

    def test_positive_order_rejected(self):
        grid = make_grid(1, 16.0, 64)
        with pytest.raises(ValueError):
            kernel_convolution_oracle(GridFunction.constant(grid, 1.0), 0.5, 0.5)

    def test_kernel_integrates_to_multiplier_at_zero(self):
        # c * int K_s^{delta/2} = delta^s  (Fourier transform at the origin)
        s, delta, n = -1.2, 0.6, 1
        c = jsdelta_kernel_constant(s, n)
        total = 2 * integrate.quad(lambda y: bessel_k_closed_form(y, s, delta / 2, n), 0, np.inf, limit=400)[0]
        assert c * total == pytest.approx(delta**s, rel=1e-7)

    @pytest.mark.parametrize("rho, s, n", [(0.1, -0.5, 1), (0.3, -1.5, 2), (0.2, -1.0, 3)])
    def test_ball_integral(self, rho, s, n):
        delta = 0.4
        area = 2 * math.pi ** (n / 2) / special.gamma(n / 2)
        ref = area * integrate.quad(
            lambda r: r ** (n - 1) * bessel_k_closed_form(r, s, delta, n), 0, rho, limit=200, epsrel=1e-11
        )[0]
        assert kernel_ball_integral(rho, s, delta, n) == pytest.approx(ref, rel=1e-8)
