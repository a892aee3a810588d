"""Bessel kernel quadrature, decay envelopes and a convolution oracle.

The kernel studied here is

.. math::

    K_s^\\delta(y) = \\int_0^\\infty e^{-|y|^2/t} e^{-\\delta^2 t}
    t^{-(s+n)/2} \\frac{dt}{t},

evaluated by segmented tanh-sinh quadrature in ``u = log t`` (see
:mod:`wkp._kernels_py`).  The integral converges for every real ``s`` when
``delta > 0``; only its ``delta -> 0`` limit needs ``s > -n``.  For ``s < 0``
the operator
``(delta^2 - Laplacian)^{s/2}`` is convolution with
``2^s pi^{-n/2} / Gamma(-s/2) * K_s^{delta/2}``, which gives an independent
route to the spectral multiplier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from . import _backend
from .spectral import Grid, GridFunction, bessel_delta_symbol, apply_symbol

__all__ = [
    "KernelEval",
    "DecayFit",
    "kernel_values",
    "kernel_ks_delta",
    "kernel_bound_check",
    "tail_exponent_fit",
    "jsdelta_tail_profile",
    "jsdelta_kernel_constant",
    "kernel_ball_integral",
    "kernel_convolution_oracle",
]

KERNEL_RTOL = 1e-8
ENVELOPE_SLACK = 10.0


@dataclass(frozen=True)
class KernelEval:
    radius: float
    s: float
    delta: float
    dim: int
    value: float
    quad_error_estimate: float


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power law ``value ~ C * radius**fitted_exponent``."""

    radii: tuple[float, ...]
    values: tuple[float, ...]
    fitted_exponent: float
    fit_residual: float
    intercept: float = field(default=0.0)


def _check_kernel_args(s: float, delta: float, n: int):
    if n not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got n={n}")
    if not math.isfinite(s):
        raise ValueError(f"s must be finite, got {s}")
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")


def kernel_values(radii, s: float, delta: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched ``K_s^delta`` at positive radii with per-point error estimates."""
    _check_kernel_args(s, delta, n)
    radii = np.asarray(radii, dtype=float)
    if np.any(~(radii > 0)):
        raise ValueError("kernel radii must be strictly positive")
    flat = radii.ravel()
    values, errors = _backend.kernel_batch(flat, float(s), float(delta), int(n), 1e-10)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmin(np.isfinite(values)))
        raise ArithmeticError(f"kernel value is not finite at y={flat[bad]:.6g} (s={s}, delta={delta})")
    if np.any(errors > KERNEL_RTOL * values):
        worst = int(np.argmax(errors / values))
        raise ArithmeticError(
            f"kernel quadrature error {errors[worst]:.3g} exceeds tolerance at "
            f"y={flat[worst]:.6g}, value={values[worst]:.6g}"
        )
    return values.reshape(radii.shape), errors.reshape(radii.shape)


def kernel_ks_delta(y_abs: float, s: float, delta: float, n: int) -> KernelEval:
    """Evaluate ``K_s^delta(y)`` to relative accuracy ``1e-8``.

    Examples
    --------
    >>> from scipy.special import gamma
    >>> k = kernel_ks_delta(1.0, -0.5, 1e-6, 1)
    >>> bool(abs(k.value / gamma(0.25) - 1) < 0.01)
    True
    """
    if not y_abs > 0:
        raise ValueError(f"kernel is singular at y=0; got y_abs={y_abs}")
    v, e = kernel_values(np.array([float(y_abs)]), s, delta, n)
    return KernelEval(float(y_abs), float(s), float(delta), int(n), float(v[0]), float(e[0]))


def _envelope_shape(y, s: float, delta: float, n: int):
    return np.asarray(y, dtype=float) ** (-(n + s)) * np.exp(-4.0 * delta * np.asarray(y) / (n + s + 2.0))


def kernel_bound_check(y_abs: float, s: float, delta: float, n: int) -> tuple[float, float, bool]:
    """Compare ``K_s^delta(y)`` with the exponential-power envelope.

    The envelope is ``C * y^-(n+s) * exp(-4 delta y / (n+s+2))`` where ``C``
    makes it exact at ``y = 1, delta = 1``; the check passes when the kernel
    stays below ``10`` times the envelope.

    Returns
    -------
    value, envelope, passed
    """
    if not s < 0:
        raise ValueError(
            f"direct kernel evaluation is supported only for s < 0 (got s={s}); "
            "use the spectral operator for s >= 0"
        )
    if not y_abs >= 1.0:
        raise ValueError(f"envelope check applies to |y| >= 1, got {y_abs}")
    anchor = kernel_ks_delta(1.0, s, 1.0, n).value
    const = anchor / float(_envelope_shape(1.0, s, 1.0, n))
    value = kernel_ks_delta(y_abs, s, delta, n).value
    envelope = const * float(_envelope_shape(y_abs, s, delta, n))
    return value, envelope, bool(value <= ENVELOPE_SLACK * envelope)


def tail_exponent_fit(radii, values) -> DecayFit:
    """Least-squares slope of ``log(value)`` against ``log(radius)``."""
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    if r.shape != v.shape or r.ndim != 1:
        raise ValueError("radii and values must be 1-D arrays of equal length")
    if r.size < 4:
        raise ValueError(f"need at least 4 samples for a tail fit, got {r.size}")
    if np.any(np.diff(r) <= 0) or np.any(r <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    if np.any(~(v > 0)) or np.any(~np.isfinite(v)):
        raise ValueError("tail fit requires strictly positive finite values")
    X = np.log(r)
    Y = np.log(v)
    A = np.vstack([X, np.ones_like(X)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, Y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - Y) ** 2)))
    return DecayFit(tuple(r), tuple(v), float(slope), resid, float(icpt))


def jsdelta_tail_profile(
    f: GridFunction,
    s: float,
    delta: float,
    radii,
    pad_factor: int = 16,
    shell_width: float = 0.05,
) -> DecayFit:
    """Fit the spatial decay of ``|J^s_delta f|`` over the given radii.

    ``f`` is embedded in a box ``pad_factor`` times larger (zero samples
    outside) before the multiplier is applied, so that the slowly decaying
    tail is not contaminated by periodic images.  At each radius ``r`` the
    sample is the largest ``|J^s_delta f(x)|`` over ``|x|`` in
    ``[r(1 - shell_width), r(1 + shell_width)]``.
    """
    grid = f.grid
    radii = np.asarray(radii, dtype=float)
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if np.any(radii * (1 + shell_width) >= 0.5 * grid.side_length) or np.any(radii <= 0):
        raise ValueError(
            f"radii must lie inside the box (0, L/2 = {0.5 * grid.side_length}); got {radii.tolist()}"
        )
    big = Grid(grid.dim, grid.side_length * pad_factor, grid.points_per_axis * pad_factor)
    N, P = grid.points_per_axis, big.points_per_axis
    lo = (P - N) // 2
    samples = np.zeros(big.shape, dtype=complex)
    samples[(slice(lo, lo + N),) * grid.dim] = f.samples
    g = apply_symbol(GridFunction(big, samples), bessel_delta_symbol(s, delta))
    mag = np.abs(g.samples)
    rad = big.radius
    vals = []
    for r in radii:
        shell = (rad >= r * (1 - shell_width)) & (rad <= r * (1 + shell_width))
        if not np.any(shell):
            raise ValueError(f"no grid points in the shell around r={r}")
        vals.append(float(mag[shell].max()))
    return tail_exponent_fit(radii, vals)


# -- convolution oracle -----------------------------------------------------


def jsdelta_kernel_constant(s: float, n: int) -> float:
    """Constant ``c`` with ``(delta^2 - Laplacian)^{s/2} f = c K_s^{delta/2} * f`` for s < 0."""
    return 2.0**s * math.pi ** (-0.5 * n) / special.gamma(-0.5 * s)


def kernel_ball_integral(rho: float, s: float, delta: float, n: int) -> float:
    """``int_{|y| < rho} K_s^delta(y) dy`` for ``s < 0``.

    Exchanging the order of integration gives
    ``pi^{n/2} int_0^inf e^{-delta^2 t} t^{-s/2} P(n/2, rho^2/t) dt/t`` with
    ``P`` the regularised lower incomplete gamma function.
    """
    _check_kernel_args(s, delta, n)

    def integrand(u):
        t = math.exp(u)
        return math.exp(-delta * delta * t - 0.5 * s * u) * special.gammainc(0.5 * n, rho * rho / t)

    hi = math.log((60.0 + abs(s)) / (delta * delta))
    lo = math.log(rho * rho) - 80.0
    pts = sorted({math.log(rho * rho), -2.0 * math.log(delta)})
    val, _ = integrate.quad(integrand, lo, hi, points=pts, epsabs=0.0, epsrel=1e-11, limit=400)
    return math.pi ** (0.5 * n) * val


def kernel_convolution_oracle(f: GridFunction, s: float, delta: float) -> GridFunction:
    """``(delta^2 - Laplacian)^{s/2} f`` computed as a discrete kernel convolution.

    The kernel is sampled at every grid displacement (including periodic
    images until they fall below ``1e-16`` of the central value) and the
    singular origin cell is replaced by the kernel average over a ball of the
    cell's volume.  The convolution itself is circular, matching the torus.
    """
    grid = f.grid
    n = grid.dim
    if not s < 0:
        raise ValueError(f"kernel convolution oracle requires s < 0, got s={s}")
    _check_kernel_args(s, delta, n)
    if not np.any(f.samples):
        return GridFunction(grid, np.zeros(grid.shape, dtype=complex))
    h = grid.spacing
    L = grid.side_length
    N = grid.points_per_axis
    half = 0.5 * delta
    idx = np.fft.fftfreq(N, d=1.0 / N)  # signed integer offsets in FFT order
    disp = np.stack(np.meshgrid(*([idx * h] * n), indexing="ij"))

    # number of periodic images: stop when the kernel has decayed by 1e-16
    far = L
    probe = kernel_values(np.array([h]), s, half, n)[0][0]
    n_img = 0
    while kernel_values(np.array([far * (n_img + 0.5)]), s, half, n)[0][0] > 1e-16 * probe:
        n_img += 1
        if n_img > 64:
            break
    offsets = np.arange(-n_img, n_img + 1)
    kernel = np.zeros(grid.shape)
    for shift in np.stack(np.meshgrid(*([offsets] * n), indexing="ij")).reshape(n, -1).T:
        d = disp + (L * shift).reshape((n,) + (1,) * n)
        r = np.sqrt(np.sum(d * d, axis=0))
        mask = r > 0
        # distinct radii are evaluated once
        uniq, inv = np.unique(np.round(r[mask], 12), return_inverse=True)
        vals, _ = kernel_values(uniq, s, half, n)
        kernel[mask] += vals[inv]
    ball_r = h * (math.gamma(0.5 * n + 1.0) ** (1.0 / n)) / math.sqrt(math.pi)
    origin = (0,) * n
    kernel[origin] += kernel_ball_integral(ball_r, s, half, n) / h**n
    kernel *= jsdelta_kernel_constant(s, n) * h**n
    out = np.fft.ifftn(np.fft.fftn(kernel) * np.fft.fftn(f.samples))
    return GridFunction(grid, out)
