"""Weighted Lebesgue quasi-norms, mixed norms and exponent bookkeeping.

All integrals are Riemann sums on the torus coordinates ``x in [-L/2, L/2)^n``
with the polynomial weight ``<x>^a = (1 + |x|^2)^{a/2}`` evaluated at the true
(unwrapped) coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import Grid, GridFunction

__all__ = [
    "ExponentTuple",
    "MixedSpec",
    "weighted_norm",
    "weighted_norm_array",
    "japanese_weight",
    "homogeneous_weight",
    "mixed_norm",
    "holder_exponents",
    "check_exponents",
    "interp_sequence_bound",
    "discrete_convolution",
]

REL_TOL = 1e-12


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class ExponentTuple:
    """Lebesgue and weight exponents for a bilinear estimate.

    Validates ``1/p = 1/p1 + 1/p2`` and ``a/p = a1/p1 + a2/p2`` on creation.
    """

    p: float
    p1: float
    p2: float
    a: float
    a1: float
    a2: float

    def __post_init__(self):
        check_exponents(self.p, self.p1, self.p2, self.a, self.a1, self.a2)

    def swapped(self) -> "ExponentTuple":
        return ExponentTuple(self.p, self.p2, self.p1, self.a, self.a2, self.a1)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("p", "p1", "p2", "a", "a1", "a2")}


def check_exponents(p, p1, p2, a, a1, a2) -> None:
    """Raise ``ValueError`` unless the two Hoelder relations hold to ``1e-12``."""
    for name, val in (("p", p), ("p1", p1), ("p2", p2)):
        if not val > 0:
            raise ValueError(f"exponent {name} must be positive, got {val}")
    for name, val in (("a", a), ("a1", a1), ("a2", a2)):
        if not (val >= 0 and math.isfinite(val)):
            raise ValueError(f"weight exponent {name} must be finite and >= 0, got {val}")
    lhs, rhs = _inv(p), _inv(p1) + _inv(p2)
    if abs(lhs - rhs) > REL_TOL * max(1.0, abs(lhs)):
        raise ValueError(f"1/p = {lhs!r} differs from 1/p1 + 1/p2 = {rhs!r}")
    wl, wr = a * _inv(p), a1 * _inv(p1) + a2 * _inv(p2)
    if abs(wl - wr) > REL_TOL * max(1.0, abs(wl)):
        raise ValueError(f"a/p = {wl!r} differs from a1/p1 + a2/p2 = {wr!r}")


def holder_exponents(p1: float, p2: float, a1: float, a2: float) -> ExponentTuple:
    """Solve the Hoelder relations for ``(p, a)``.

    When ``p = inf`` (both factors in ``L^inf``) the weight relation carries
    no information and ``a = 0`` is returned.

    Examples
    --------
    >>> e = holder_exponents(2, 2, 2, 4)
    >>> e.p, e.a
    (1.0, 3.0)
    """
    for name, val in (("p1", p1), ("p2", p2)):
        if not val >= 1:
            raise ValueError(f"{name} must lie in [1, inf], got {val}")
    inv = _inv(p1) + _inv(p2)
    if inv == 0.0:
        return ExponentTuple(math.inf, p1, p2, 0.0, a1, a2)
    p = 1.0 / inv
    a = p * (a1 * _inv(p1) + a2 * _inv(p2))
    return ExponentTuple(p, float(p1), float(p2), a, float(a1), float(a2))


# -- weights ------------------------------------------------------------------


def japanese_weight(grid: Grid, a: float) -> np.ndarray:
    """``<x>^a`` on the grid."""
    return (1.0 + grid.radius**2) ** (0.5 * a)


def homogeneous_weight(grid: Grid, a: float) -> np.ndarray:
    """``|x|^a`` on the grid, with the origin sample replaced by a cell average.

    The average is taken over the ball of the cell's volume, which for
    ``n = 1`` is the cell itself: ``(h/2)^a / (a + 1)``.
    """
    w = grid.radius**a
    n = grid.dim
    rho = grid.spacing * math.gamma(0.5 * n + 1.0) ** (1.0 / n) / math.sqrt(math.pi)
    centre = tuple(int(np.argmin(np.abs(grid.coords))) for _ in range(n))
    if grid.radius[centre] == 0.0:
        w[centre] = n * rho**a / (n + a)
    return w


def weighted_norm_array(values: np.ndarray, cell: float, p: float, weight: np.ndarray | None) -> float:
    """Riemann-sum ``(sum |v|^p w cell)^{1/p}``, max-scaled to avoid under/overflow."""
    if not p > 0:
        raise ValueError(f"Lebesgue exponent p must be positive, got {p}")
    mag = np.abs(values)
    if math.isinf(p):
        return float(mag.max()) if mag.size else 0.0
    peak = float(mag.max()) if mag.size else 0.0
    if peak == 0.0 or not math.isfinite(peak):
        return peak
    terms = (mag / peak) ** p
    if weight is not None:
        terms = terms * weight
    return peak * float(np.sum(terms) * cell) ** (1.0 / p)


def weighted_norm(
    f: GridFunction, p: float, a: float = 0.0, weight: np.ndarray | None = None
) -> float:
    """Weighted ``L^p`` (quasi-)norm with weight ``<x>^a``.

    Parameters
    ----------
    f : GridFunction
    p : float
        Lebesgue exponent in ``(0, inf]``.  For ``p = inf`` the weight is
        ignored and the maximum modulus is returned.
    a : float
        Weight exponent, ``a >= 0``.
    weight : ndarray, optional
        Explicit weight array overriding ``<x>^a`` (used for ``|x|^a``).
    """
    if not a >= 0:
        raise ValueError(f"weight exponent must be >= 0, got {a}")
    if weight is None and a != 0 and not math.isinf(p):
        weight = japanese_weight(f.grid, a)
    return weighted_norm_array(f.samples, f.grid.cell_volume, p, weight)


# -- mixed norms --------------------------------------------------------------


@dataclass(frozen=True)
class MixedSpec:
    """Inner norm over the first ``dot_dim`` axes, outer norm over the rest."""

    p_dot: float
    a_dot: float
    dot_dim: int
    p_ddot: float
    a_ddot: float
    ddot_dim: int

    def __post_init__(self):
        if self.dot_dim < 1 or self.ddot_dim < 1:
            raise ValueError(
                f"mixed norm needs non-empty inner and outer blocks, got dims "
                f"({self.dot_dim}, {self.ddot_dim})"
            )
        for name in ("p_dot", "p_ddot"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("a_dot", "a_ddot"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def dim(self) -> int:
        return self.dot_dim + self.ddot_dim


def _block_weight(coords: np.ndarray, dims: int, a: float) -> np.ndarray:
    mesh = np.meshgrid(*([coords] * dims), indexing="ij")
    return (1.0 + sum(x**2 for x in mesh)) ** (0.5 * a)


def mixed_norm(f: GridFunction, spec: MixedSpec) -> float:
    """``|| || f ||_{L^p_dot_{a_dot}} ||_{L^p_ddot_{a_ddot}}``.

    The inner norm runs over the first ``spec.dot_dim`` axes for every fixed
    value of the remaining ones.
    """
    grid = f.grid
    if grid.dim != spec.dim:
        raise ValueError(
            f"mixed spec covers {spec.dim} dimensions but the function has {grid.dim}"
        )
    h = grid.spacing
    inner_axes = tuple(range(spec.dot_dim))
    mag = np.abs(f.samples)
    w_in = None if spec.a_dot == 0 else _block_weight(grid.coords, spec.dot_dim, spec.a_dot)
    if math.isinf(spec.p_dot):
        inner = mag.max(axis=inner_axes)
    else:
        peak = mag.max(axis=inner_axes, keepdims=True)
        safe = np.where(peak > 0, peak, 1.0)
        terms = (mag / safe) ** spec.p_dot
        if w_in is not None:
            terms = terms * w_in.reshape(w_in.shape + (1,) * spec.ddot_dim)
        inner = np.squeeze(peak, axis=inner_axes) * (
            np.sum(terms, axis=inner_axes) * h**spec.dot_dim
        ) ** (1.0 / spec.p_dot)
    w_out = None
    if spec.a_ddot != 0 and not math.isinf(spec.p_ddot):
        w_out = _block_weight(grid.coords, spec.ddot_dim, spec.a_ddot)
    return weighted_norm_array(inner, h**spec.ddot_dim, spec.p_ddot, w_out)


# -- sequences and convolutions ------------------------------------------------


def interp_sequence_bound(
    a: float, b: float, A: float, B: float, u: float, K: int
) -> tuple[float, float]:
    """Both sides of the summation-interpolation estimate.

    Returns ``(lhs, rhs)`` with ``lhs`` the ``l^u`` norm of
    ``k -> min(2^{ka} A, 2^{-kb} B)`` over ``|k| <= K`` and
    ``rhs = A^{b/(a+b)} B^{a/(a+b)}``.
    """
    for name, val in (("a", a), ("b", b), ("A", A), ("B", B), ("u", u)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val}")
    if int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K}")
    k = np.arange(-int(K), int(K) + 1, dtype=float)
    seq = np.minimum(2.0 ** (k * a) * A, 2.0 ** (-k * b) * B)
    lhs = float(seq.max()) if math.isinf(u) else float(np.sum(seq**u) ** (1.0 / u))
    rhs = A ** (b / (a + b)) * B ** (a / (a + b))
    return lhs, float(rhs)


def discrete_convolution(f: GridFunction, g: GridFunction) -> GridFunction:
    """Riemann-sum convolution ``sum_j f(x_i - x_j) g(x_j) h^n`` on the torus.

    The grid is centred on ``x = 0`` at index ``N/2``, so the sample arrays
    are shifted to put the origin first before the circular convolution and
    shifted back afterwards.
    """
    if f.grid != g.grid:
        raise ValueError("convolution operands live on different grids")
    grid = f.grid
    fa = np.fft.ifftshift(f.samples)
    ga = np.fft.ifftshift(g.samples)
    conv = np.fft.ifftn(np.fft.fftn(fa) * np.fft.fftn(ga)) * grid.cell_volume
    return GridFunction(grid, np.fft.fftshift(conv))
