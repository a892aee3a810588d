"""Periodic grids, grid functions and Fourier multiplier operators.

The whole space is approximated by the torus ``[-L/2, L/2)^n`` sampled on a
uniform ``N^n`` grid.  Multipliers act through the unitary discrete Fourier
transform, so a symbol ``m`` is applied exactly on every representable mode.

Conventions
-----------
Frequencies are angular, ``xi_k = 2*pi*k/L`` with ``k`` in
``{-N/2, ..., N/2 - 1}``.  The continuous Fourier transform used to build
profile functions is ``F[f](xi) = int f(x) exp(-i x.xi) dx``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "Grid",
    "GridFunction",
    "Symbol",
    "make_grid",
    "bump_phi",
    "bump_psi",
    "evaluate_bump",
    "bessel_symbol",
    "bessel_delta_symbol",
    "riesz_symbol",
    "bump_symbol",
    "custom_symbol",
    "apply_symbol",
    "fractional_op",
    "gradient",
    "lp_project",
    "bump_profile",
    "random_bandlimited",
    "occupied_band",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L/2, L/2)^n`` with ``N`` points per axis."""

    dim: int
    side_length: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not (self.side_length > 0 and math.isfinite(self.side_length)):
            raise ValueError(f"side_length must be positive, got {self.side_length}")
        N = self.points_per_axis
        if int(N) != N or N < 8 or N % 2:
            raise ValueError(f"points_per_axis must be an even integer >= 8, got {N}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def spacing(self) -> float:
        return self.side_length / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def nyquist(self) -> float:
        return math.pi * self.points_per_axis / self.side_length

    @cached_property
    def coords(self) -> np.ndarray:
        """1-D coordinates ``-L/2 + i*L/N``."""
        N = self.points_per_axis
        return -0.5 * self.side_length + self.spacing * np.arange(N)

    @cached_property
    def freqs(self) -> np.ndarray:
        """1-D angular frequencies in FFT order."""
        N = self.points_per_axis
        return 2.0 * np.pi * np.fft.fftfreq(N, d=self.spacing)

    @cached_property
    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.coords] * self.dim), indexing="ij"))

    @cached_property
    def freq_mesh(self) -> np.ndarray:
        """Array of shape ``(n, N, ..., N)`` holding the frequency vectors."""
        return np.stack(np.meshgrid(*([self.freqs] * self.dim), indexing="ij"))

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(sum(x**2 for x in self.mesh))

    @cached_property
    def freq_radius(self) -> np.ndarray:
        return np.sqrt(np.sum(self.freq_mesh**2, axis=0))

    def describe(self) -> dict:
        return {"n": self.dim, "L": self.side_length, "N": self.points_per_axis}


def make_grid(n: int, L: float, N: int) -> Grid:
    return Grid(int(n), float(L), int(N))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on a :class:`Grid` (array of ``grid.shape``)."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} samples for {self.grid}, got {arr.size}"
            )
        object.__setattr__(self, "samples", arr.reshape(self.grid.shape))

    @classmethod
    def from_callable(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> "GridFunction":
        """Sample ``fn(x_1, ..., x_n)`` on the grid mesh."""
        return cls(grid, np.broadcast_to(fn(*grid.mesh), grid.shape))

    @classmethod
    def constant(cls, grid: Grid, value: complex) -> "GridFunction":
        return cls(grid, np.full(grid.shape, value, dtype=complex))

    @classmethod
    def from_spectrum(cls, grid: Grid, coeffs: np.ndarray) -> "GridFunction":
        return cls(grid, np.fft.ifftn(coeffs, norm="ortho"))

    def spectrum(self) -> np.ndarray:
        """Unitary DFT coefficients in FFT order."""
        return np.fft.fftn(self.samples, norm="ortho")

    def _check(self, other: "GridFunction"):
        if other.grid != self.grid:
            raise ValueError("grid functions live on different grids")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.samples + other.samples)
        return GridFunction(self.grid, self.samples + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.samples - other.samples)
        return GridFunction(self.grid, self.samples - other)

    def __neg__(self):
        return GridFunction(self.grid, -self.samples)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.grid, self.samples * other.samples)
        return GridFunction(self.grid, self.samples * other)

    __rmul__ = __mul__

    def conj(self) -> "GridFunction":
        return GridFunction(self.grid, np.conj(self.samples))

    def abs_max(self) -> float:
        return float(np.max(np.abs(self.samples)))


# -- symbols -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Symbol:
    """Frequency multiplier.

    ``evaluator`` receives an array of shape ``(n, ...)`` of frequency vectors
    and returns the multiplier values with shape ``(...)``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    descriptor: tuple = field(default=("custom",))

    def __call__(self, xi) -> np.ndarray:
        return self.evaluator(np.asarray(xi, dtype=float))

    def __mul__(self, other: "Symbol") -> "Symbol":
        a, b = self.evaluator, other.evaluator
        return Symbol(lambda xi: a(xi) * b(xi), ("product", self.descriptor, other.descriptor))


def _norm(xi: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(xi * xi, axis=0))


def _q(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def bump_phi(r) -> np.ndarray:
    """Radial profile of the low-pass bump: 1 on ``r <= 1``, 0 on ``r >= 2``."""
    r = np.abs(np.asarray(r, dtype=float))
    out = np.where(r <= 1.0, 1.0, 0.0)
    mid = (r > 1.0) & (r < 2.0)
    if np.any(mid):
        rm = r[mid]
        a = _q(2.0 - rm)
        b = _q(rm - 1.0)
        out[mid] = a / (a + b)
    return out


def bump_psi(r) -> np.ndarray:
    """Annular bump ``Phi(r) - Phi(2r)``, supported in ``1/2 < r < 2``."""
    r = np.asarray(r, dtype=float)
    return bump_phi(r) - bump_phi(2.0 * r)


def evaluate_bump(kind: str, xi) -> float | np.ndarray:
    """Evaluate ``Phi`` or ``Psi`` at a frequency vector (or radius)."""
    xi = np.asarray(xi, dtype=float)
    r = np.abs(xi) if xi.ndim == 0 else np.sqrt(np.sum(xi**2, axis=0))
    if kind in ("Phi", "phi", "S"):
        val = bump_phi(r)
    elif kind in ("Psi", "psi", "Delta"):
        val = bump_psi(r)
    else:
        raise ValueError(f"unknown bump kind {kind!r}")
    return float(val) if np.ndim(val) == 0 else val


def bessel_symbol(s: float) -> Symbol:
    """``<xi>^s = (1 + |xi|^2)^(s/2)``."""
    return Symbol(lambda xi: (1.0 + np.sum(xi * xi, axis=0)) ** (0.5 * s), ("Bessel", s))


def bessel_delta_symbol(s: float, delta: float) -> Symbol:
    """``(delta^2 + |xi|^2)^(s/2)``."""
    d2 = delta * delta
    return Symbol(
        lambda xi: (d2 + np.sum(xi * xi, axis=0)) ** (0.5 * s), ("BesselDelta", s, delta)
    )


def riesz_symbol(s: float) -> Symbol:
    """``|xi|^s`` for ``s > 0`` (zero at the origin)."""
    if not s > 0:
        raise ValueError(f"homogeneous symbol |xi|^s needs s > 0, got s={s}")
    return Symbol(lambda xi: _norm(xi) ** s, ("Riesz", s))


def bump_symbol(kind: str, j: float) -> Symbol:
    scale = 2.0 ** (-j)
    if kind == "Phi":
        fn = bump_phi
    elif kind == "Psi":
        fn = bump_psi
    else:
        raise ValueError(f"unknown bump kind {kind!r}")
    return Symbol(lambda xi: fn(scale * _norm(xi)), ("Bump", kind, j))


def custom_symbol(fn: Callable[[np.ndarray], np.ndarray], tag: str = "custom") -> Symbol:
    return Symbol(fn, ("Custom", tag))


# -- operators ---------------------------------------------------------------


def _symbol_on_grid(grid: Grid, m: Symbol) -> np.ndarray:
    vals = np.broadcast_to(np.asarray(m(grid.freq_mesh)), grid.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        xi = tuple(float(grid.freq_mesh[(d,) + idx]) for d in range(grid.dim))
        raise ValueError(f"symbol {m.descriptor} is not finite at frequency {xi}")
    return vals


def apply_symbol(f: GridFunction, m: Symbol) -> GridFunction:
    """Inverse DFT of ``m(xi_k) * f_hat(xi_k)``."""
    vals = _symbol_on_grid(f.grid, m)
    return GridFunction(f.grid, np.fft.ifftn(vals * f.spectrum(), norm="ortho"))


def fractional_op(f: GridFunction, kind: str, s: float, delta: float | None = None) -> GridFunction:
    """Apply ``J^s``, ``J^s_delta`` or ``D^s``."""
    if kind == "J":
        return apply_symbol(f, bessel_symbol(s))
    if kind == "J_delta":
        if delta is None or not (0.0 < delta <= 1.0):
            raise ValueError(f"J_delta requires delta in (0, 1], got {delta}")
        return apply_symbol(f, bessel_delta_symbol(s, delta))
    if kind == "D":
        return apply_symbol(f, riesz_symbol(s))
    raise ValueError(f"unknown fractional operator kind {kind!r}")


def gradient(f: GridFunction) -> list[GridFunction]:
    """Spectral gradient; component ``j`` has symbol ``i*xi_j``."""
    return [
        apply_symbol(f, Symbol(lambda xi, j=j: 1j * xi[j], ("Custom", f"i*xi_{j}")))
        for j in range(f.grid.dim)
    ]


def lp_project(f: GridFunction, kind: str, j: int) -> GridFunction:
    """Littlewood-Paley pieces ``Delta_j``, ``S_j`` and ``DeltaTilde_j``."""
    if kind == "Delta":
        return apply_symbol(f, bump_symbol("Psi", j))
    if kind == "S":
        return apply_symbol(f, bump_symbol("Phi", j))
    if kind == "DeltaTilde":
        def tilde(xi):
            r = _norm(xi)
            return sum(bump_psi(2.0 ** (-k) * r) for k in range(j - 2, j + 3))

        return apply_symbol(f, Symbol(tilde, ("Custom", f"DeltaTilde_{j}")))
    raise ValueError(f"unknown Littlewood-Paley kind {kind!r}")


# -- profiles ----------------------------------------------------------------


def occupied_band(f: GridFunction, rel_tol: float = 1e-13) -> float:
    """Largest ``|xi|`` carrying a coefficient above ``rel_tol * max``."""
    spec = np.abs(f.spectrum())
    peak = spec.max()
    if peak == 0:
        return 0.0
    return float(f.grid.freq_radius[spec > rel_tol * peak].max())


def bump_profile(
    grid: Grid,
    kind: str = "Phi",
    dilation: float = 1.0,
    shift: float | np.ndarray = 0.0,
    max_band_fraction: float = 0.5,
) -> GridFunction:
    """Sample ``x -> int b(dilation*(xi - shift)) dilation^n exp(i x.xi) dxi``.

    With ``dilation = 1`` and ``shift = 0`` this is the Fourier transform of
    the bump ``b``; in general it equals ``exp(i x.shift) b_hat(x / dilation)``.
    The integral is the trapezoid sum over the grid frequencies, exact for the
    periodisation because ``b`` is compactly supported.  The occupied band
    ``|shift| + 2/dilation`` must stay below ``max_band_fraction`` times the
    Nyquist frequency.
    """
    n = grid.dim
    shift_vec = np.zeros(n)
    shift_vec[:] = shift
    band = float(np.linalg.norm(shift_vec)) + 2.0 / dilation
    limit = max_band_fraction * grid.nyquist
    if band >= limit:
        raise ValueError(
            f"profile band {band:.6g} (dilation={dilation}, shift={shift}) "
            f"reaches {max_band_fraction:g} x Nyquist = {limit:.6g}"
        )
    xi = grid.freq_mesh - shift_vec.reshape((n,) + (1,) * n)
    r = dilation * np.sqrt(np.sum(xi**2, axis=0))
    vals = (bump_phi(r) if kind == "Phi" else bump_psi(r)) * dilation**n
    # x_0 = -L/2 contributes the phase (-1)^k per axis (N even).
    sign = np.ones(grid.shape)
    for ax in range(n):
        idx = np.arange(grid.points_per_axis)
        sign = sign * ((-1.0) ** idx).reshape([-1 if a == ax else 1 for a in range(n)])
    N = grid.points_per_axis
    scale = (2.0 * np.pi / grid.side_length) ** n * N**n
    return GridFunction(grid, scale * np.fft.ifftn(vals * sign))


def random_bandlimited(
    grid: Grid,
    band: float,
    rng: np.random.Generator,
    real: bool = True,
    window: float | None = None,
) -> GridFunction:
    """Random function with spectrum supported in ``|xi| <= band``.

    ``window`` multiplies by the profile ``Phi_hat(x / window)`` (band-limited
    itself), which concentrates the function within a few multiples of
    ``window`` of the origin; the total band becomes ``band + 2/window``.
    """
    spec = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    spec[grid.freq_radius > band] = 0.0
    # Nyquist planes would break realness/symmetry.
    for ax in range(grid.dim):
        sl = [slice(None)] * grid.dim
        sl[ax] = grid.points_per_axis // 2
        spec[tuple(sl)] = 0.0
    f = GridFunction.from_spectrum(grid, spec)
    if real:
        f = GridFunction(grid, f.samples.real)
    if window is not None:
        w = bump_profile(grid, "Phi", dilation=window)
        f = f * GridFunction(grid, w.samples.real / w.abs_max())
    return f
