"""Paraproduct and commutator decompositions, symbol remainders and the
Fourier-series translation representation of smooth multipliers.

Littlewood-Paley pieces are indexed by ``P_0 = S_0`` and ``P_k = Delta_k`` for
``k >= 1``; since ``S_0 + sum_{k=1}^K Delta_k = S_K`` telescopes, the pieces
reproduce any function whose spectrum lies in ``|xi| <= 2^K``.  Products
``P_j f * P_k g`` are grouped into four buckets by the index pair:

========  ==============================
bucket    index pairs
========  ==============================
I1        ``j <= k - 3`` (low f, high g)
I2        ``k <= j - 3`` (high f, low g)
I3        ``|j - k| <= 2``, not ``(0, 0)``
I4        ``(0, 0)``
========  ==============================

Every pair lands in exactly one bucket, so the buckets sum to ``fg`` exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .spectral import (
    GridFunction,
    Symbol,
    apply_symbol,
    bessel_symbol,
    bump_phi,
    bump_psi,
    occupied_band,
)

__all__ = [
    "ParaproductTerms",
    "CommutatorTerms",
    "bucket_of",
    "auto_kmax",
    "lp_pieces",
    "paraproduct",
    "commutator_terms",
    "commutator_lhs",
    "second_order_correction",
    "symbol_remainder",
    "fourier_coefficients",
    "fourier_series_apply",
    "series_error",
]

BUCKETS = ("I1", "I2", "I3", "I4")


@dataclass(frozen=True)
class ParaproductTerms:
    I1: GridFunction
    I2: GridFunction
    I3: GridFunction
    I4: GridFunction

    def total(self) -> GridFunction:
        return self.I1 + self.I2 + self.I3 + self.I4


@dataclass(frozen=True)
class CommutatorTerms:
    II1: GridFunction
    II2: GridFunction
    II3: GridFunction
    II4: GridFunction

    def total(self) -> GridFunction:
        return self.II1 + self.II2 + self.II3 + self.II4


def bucket_of(j: int, k: int) -> int:
    """Bucket index (0..3 for I1..I4) of the pair ``(P_j f, P_k g)``."""
    if j == 0 and k == 0:
        return 3
    if j <= k - 3:
        return 0
    if k <= j - 3:
        return 1
    return 2


def auto_kmax(*fs: GridFunction) -> int:
    """Smallest ``K >= 1`` with ``2^K`` covering the occupied bands of ``fs``."""
    band = max(occupied_band(f) for f in fs)
    return max(1, int(math.ceil(math.log2(band))) if band > 0 else 1)


def _check_kmax(K_max: int, *fs: GridFunction):
    band = max(occupied_band(f) for f in fs)
    if 2.0**K_max < band:
        raise ValueError(
            f"K_max={K_max} covers |xi| <= {2.0 ** K_max:g} but the occupied band "
            f"reaches {band:.6g}; the Littlewood-Paley sum would not reproduce the inputs"
        )


def lp_pieces(f: GridFunction, K_max: int) -> list[np.ndarray]:
    """Spatial samples of ``P_0 f, ..., P_{K_max} f``."""
    spec = f.spectrum()
    r = f.grid.freq_radius
    out = []
    for j in range(K_max + 1):
        mult = bump_phi(r) if j == 0 else bump_psi(2.0 ** (-j) * r)
        out.append(np.fft.ifftn(mult * spec, norm="ortho"))
    return out


def _bucket_sums(f, g, K_max, pair_fn) -> list[np.ndarray]:
    pf = lp_pieces(f, K_max)
    pg = lp_pieces(g, K_max)
    sums = [np.zeros(f.grid.shape, dtype=complex) for _ in BUCKETS]
    # fixed (j, k) order keeps the reduction bit-reproducible
    for j in range(K_max + 1):
        for k in range(K_max + 1):
            sums[bucket_of(j, k)] += pair_fn(pf[j], pg[k])
    return sums


def paraproduct(f: GridFunction, g: GridFunction, s: float, K_max: int | None = None) -> ParaproductTerms:
    """Split ``J^s(fg)`` into the four frequency-interaction buckets.

    Parameters
    ----------
    f, g : GridFunction
        Band-limited inputs on the same grid.
    s : float
        Order of the Bessel potential applied to every bucket.
    K_max : int, optional
        Highest Littlewood-Paley index; defaults to :func:`auto_kmax`.
    """
    if f.grid != g.grid:
        raise ValueError("paraproduct operands live on different grids")
    if K_max is None:
        K_max = auto_kmax(f, g)
    _check_kmax(K_max, f, g)
    sums = _bucket_sums(f, g, K_max, lambda a, b: a * b)
    J = bessel_symbol(s)
    return ParaproductTerms(*(apply_symbol(GridFunction(f.grid, x), J) for x in sums))


def commutator_terms(f: GridFunction, g: GridFunction, s: float, K_max: int | None = None) -> CommutatorTerms:
    """Split ``J^s(fg) - f J^s g`` into pairwise commutators per bucket."""
    if f.grid != g.grid:
        raise ValueError("commutator operands live on different grids")
    if K_max is None:
        K_max = auto_kmax(f, g)
    _check_kmax(K_max, f, g)
    grid = f.grid
    J = bessel_symbol(s)
    pf = lp_pieces(f, K_max)
    pg = lp_pieces(g, K_max)
    jpg = [apply_symbol(GridFunction(grid, x), J).samples for x in pg]
    prod = [np.zeros(grid.shape, dtype=complex) for _ in BUCKETS]
    mixed = [np.zeros(grid.shape, dtype=complex) for _ in BUCKETS]
    for j in range(K_max + 1):
        for k in range(K_max + 1):
            b = bucket_of(j, k)
            prod[b] += pf[j] * pg[k]
            mixed[b] += pf[j] * jpg[k]
    terms = [apply_symbol(GridFunction(grid, p), J).samples - m for p, m in zip(prod, mixed)]
    return CommutatorTerms(*(GridFunction(grid, t) for t in terms))


def second_order_correction(f: GridFunction, g: GridFunction, s: float) -> GridFunction:
    """``s * sum_j (D_j f)(D_j J^{s-2} g)`` with ``D_j`` the multiplier ``xi_j``.

    This is the bilinear operator with symbol ``s (xi . eta) <eta>^{s-2}``,
    the first-order Taylor term of ``<xi + eta>^s`` around ``eta``.
    """
    grid = f.grid
    jg = apply_symbol(g, bessel_symbol(s - 2.0))
    acc = np.zeros(grid.shape, dtype=complex)
    for d in range(grid.dim):
        Dd = Symbol(lambda xi, d=d: xi[d], ("Custom", f"xi_{d}"))
        acc += apply_symbol(f, Dd).samples * apply_symbol(jg, Dd).samples
    return GridFunction(grid, s * acc)


def commutator_lhs(f: GridFunction, g: GridFunction, s: float, order: int = 1) -> GridFunction:
    """First- or second-order commutator.

    ``order=1`` gives ``J^s(fg) - f J^s g``; ``order=2`` additionally
    subtracts :func:`second_order_correction`, so that its bilinear symbol is
    ``<xi+eta>^s - <eta>^s - s (xi . eta) <eta>^{s-2}``.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    J = bessel_symbol(s)
    first = apply_symbol(f * g, J) - f * apply_symbol(g, J)
    if order == 1:
        return first
    return first - second_order_correction(f, g, s)


# -- symbol identities -------------------------------------------------------


def _bracket(v: np.ndarray) -> float:
    return math.sqrt(1.0 + float(np.dot(v, v)))


def symbol_remainder(xi, eta, s: float, order: int = 1, tol: float = 1e-10) -> tuple[float, float]:
    """Closed-form symbol remainder and its integral representation.

    ``order=1``: ``<xi+eta>^s - <eta>^s`` against
    ``int_0^1 s xi.(t xi + eta) <t xi + eta>^{s-2} dt``.

    ``order=2``: ``<xi+eta>^s - <eta>^s - s xi.eta <eta>^{s-2}`` against the
    iterated integral ``int_0^1 int_0^t F''(t') dt' dt`` of
    ``F(t) = <t xi + eta>^s``, where
    ``F'' = s |xi|^2 <v>^{s-2} + s (s-2) (xi.v)^2 <v>^{s-4}`` and ``v = t' xi + eta``.

    Returns
    -------
    direct, quadrature

    Raises
    ------
    ArithmeticError
        If the adaptive quadrature reports non-convergence.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if xi.shape != eta.shape or xi.ndim != 1:
        raise ValueError("xi and eta must be vectors of equal length")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    ee = float(np.dot(eta, eta))
    xe = float(np.dot(xi, eta))
    xx = float(np.dot(xi, xi))
    direct = _bracket(xi + eta) ** s - (1.0 + ee) ** (0.5 * s)

    def first(t):
        v = t * xi + eta
        return s * float(np.dot(xi, v)) * _bracket(v) ** (s - 2.0)

    def second(t):
        v = t * xi + eta
        b2 = 1.0 + float(np.dot(v, v))
        xv = float(np.dot(xi, v))
        return s * xx * b2 ** (0.5 * s - 1.0) + s * (s - 2.0) * xv * xv * b2 ** (0.5 * s - 2.0)

    def checked_quad(fn, a, b):
        val, err, info = integrate.quad(fn, a, b, epsabs=tol * 1e-2, epsrel=tol, limit=200, full_output=True)[:3]
        if err > max(tol * abs(val), tol) or info.get("neval", 1) <= 0:
            raise ArithmeticError(
                f"symbol quadrature did not converge on [{a}, {b}]: value={val!r}, "
                f"error estimate={err!r}, xi={xi.tolist()}, eta={eta.tolist()}, s={s}"
            )
        return val

    if order == 1:
        if xx == 0.0:
            return direct, 0.0
        return direct, checked_quad(first, 0.0, 1.0)
    direct -= s * xe * (1.0 + ee) ** (0.5 * s - 1.0)
    if xx == 0.0:
        return direct, 0.0
    quad = checked_quad(lambda t: checked_quad(second, 0.0, t) if t > 0 else 0.0, 0.0, 1.0)
    return direct, quad


# -- Fourier-series representation --------------------------------------------


def fourier_coefficients(
    sigma: Symbol | Callable, R: float, n: int, M_trunc: int, samples_per_axis: int | None = None
) -> np.ndarray:
    """Coefficients ``c_m = (2R)^-n int_{[-R,R]^n} sigma(z) e^{-i pi m.z / R} dz``.

    Computed with the periodic trapezoid rule; returns the array indexed by
    ``m + M_trunc`` along each axis, ``|m|_inf <= M_trunc``.
    """
    if samples_per_axis is None:
        samples_per_axis = max(4 * (M_trunc + 1), 4096 if n == 1 else 256)
    Q = int(samples_per_axis)
    z1 = -R + 2.0 * R * np.arange(Q) / Q
    zz = np.stack(np.meshgrid(*([z1] * n), indexing="ij"))
    vals = np.asarray(sigma(zz), dtype=complex)
    # sum_j vals_j e^{-i pi m z_j / R} with z_j = -R + 2R j / Q
    coeffs = np.fft.fftn(vals) / Q**n
    m = np.fft.fftfreq(Q, d=1.0 / Q)
    phase1 = np.exp(1j * np.pi * m)  # e^{-i pi m (-R)/R}
    for ax in range(n):
        shape = [1] * n
        shape[ax] = Q
        coeffs = coeffs * phase1.reshape(shape)
    sel = np.r_[0 : M_trunc + 1, Q - M_trunc : Q]
    order = np.argsort(np.fft.fftfreq(Q, d=1.0 / Q)[sel])
    idx = sel[order]
    return coeffs[np.ix_(*([idx] * n))]


def _check_support(sigma, R: float, n: int):
    t = np.linspace(-1.0, 1.0, 257)
    pts = []
    for ax in range(n):
        for sign in (-1.0, 1.0):
            face = np.zeros((n, t.size))
            for b in range(n):
                face[b] = R * t if b != ax else sign * R
            pts.append(face)
    probe = np.concatenate(pts, axis=1)
    interior = np.linspace(0.0, R, 4097)[1:-1]
    inner = np.zeros((n, interior.size))
    inner[0] = interior
    scale = float(np.max(np.abs(np.asarray(sigma(inner)))))
    vals = np.abs(np.asarray(sigma(probe)))
    if scale == 0.0:
        scale = 1.0
    if np.max(vals) > 1e-14 * scale:
        raise ValueError(
            f"symbol does not vanish on the boundary of the cube [-{R}, {R}]^n "
            f"(max |sigma| there = {np.max(vals):.3g}); it is not supported inside it"
        )


def fourier_series_apply(
    sigma: Symbol | Callable,
    k: int,
    h: GridFunction,
    M_trunc: int,
    R: float = 16.0,
    lowpass: int | None = None,
) -> GridFunction:
    """Apply ``sigma(2^-k xi)`` to ``S_lowpass h`` as a sum of translates.

    ``sigma`` is expanded in its Fourier series on ``[-R, R]^n``; the term
    ``c_m e^{i pi m.z/R}`` at ``z = 2^-k xi`` is the translation of
    ``S_lowpass h`` by ``pi 2^-k m / R``.  The translations are applied as
    frequency-space phases (exact on the grid) and summed over
    ``|m|_inf <= M_trunc``.

    Parameters
    ----------
    lowpass : int, optional
        Index ``j`` of the low-pass ``S_j`` applied to ``h``; defaults to ``k``.
        Requires ``2^(j+1-k) <= R`` so that the band sits inside the cube.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if M_trunc < 0:
        raise ValueError(f"M_trunc must be >= 0, got {M_trunc}")
    grid = h.grid
    n = grid.dim
    j = k if lowpass is None else int(lowpass)
    if 2.0 ** (j + 1 - k) > R:
        raise ValueError(
            f"low-pass S_{j} band reaches |2^-k xi| = {2.0 ** (j + 1 - k):g} > R = {R}"
        )
    _check_support(sigma, R, n)
    if not np.any(h.samples):
        return GridFunction(grid, np.zeros(grid.shape, dtype=complex))
    lp = bump_phi(2.0 ** (-j) * grid.freq_radius)
    spec = lp * h.spectrum()
    c = fourier_coefficients(sigma, R, n, M_trunc)
    m1 = np.arange(-M_trunc, M_trunc + 1)
    step = np.pi * 2.0 ** (-k) / R
    # per-axis phase tables e^{i xi_d * step * m}
    tables = [np.exp(1j * step * np.outer(m1, grid.freqs)) for _ in range(n)]
    mult = np.zeros(grid.shape, dtype=complex)
    if n == 1:
        mult = c @ tables[0]
    else:
        for idx in np.ndindex(*c.shape):
            if c[idx] == 0:
                continue
            term = c[idx]
            phase = np.ones(grid.shape, dtype=complex)
            for d in range(n):
                shape = [1] * n
                shape[d] = grid.points_per_axis
                phase = phase * tables[d][idx[d]].reshape(shape)
            mult += term * phase
    return GridFunction(grid, np.fft.ifftn(mult * spec, norm="ortho"))


def series_error(sigma, k: int, h: GridFunction, M_trunc: int, R: float = 16.0, lowpass: int | None = None) -> float:
    """Relative sup-norm gap between :func:`fourier_series_apply` and direct application."""
    j = k if lowpass is None else lowpass
    grid = h.grid
    lp = bump_phi(2.0 ** (-j) * grid.freq_radius)
    direct_sym = np.asarray(sigma(2.0 ** (-k) * grid.freq_mesh))
    direct = np.fft.ifftn(direct_sym * lp * h.spectrum(), norm="ortho")
    approx = fourier_series_apply(sigma, k, h, M_trunc, R=R, lowpass=lowpass).samples
    scale = np.max(np.abs(direct))
    return float(np.max(np.abs(approx - direct)) / scale) if scale > 0 else float(np.max(np.abs(approx)))
