"""Inequality instances, counterexample families, sweeps and threshold logic.

Each ratio function evaluates both sides of one fractional Leibniz type
estimate on concrete grid functions and returns an :class:`InequalityReport`.
:func:`sweep` runs a whole family and fits power laws in the family
parameter, which is how bounded and divergent regimes are told apart on a
finite grid.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .decomposition import commutator_lhs
from .norms import (
    ExponentTuple,
    MixedSpec,
    check_exponents,
    homogeneous_weight,
    japanese_weight,
    mixed_norm,
    weighted_norm,
)
from .spectral import (
    Grid,
    GridFunction,
    Symbol,
    apply_symbol,
    bessel_symbol,
    bump_profile,
    gradient,
    riesz_symbol,
)

__all__ = [
    "InequalityReport",
    "FamilySpec",
    "PowerFit",
    "family_generate",
    "kp_ratio",
    "commutator_ratio",
    "mixed_ratio",
    "biparameter_ratio",
    "sweep",
    "SweepResult",
    "power_fit",
    "sharpness_classify",
    "BOUNDED",
    "DIVERGENT",
    "EVEN_EXCEPTION",
]

BOUNDED = "bounded_expected"
DIVERGENT = "divergent_expected"
EVEN_EXCEPTION = "even_integer_exception"


@dataclass(frozen=True)
class InequalityReport:
    theorem_id: str
    family_param: float
    lhs: float
    rhs_terms: tuple[float, ...]
    rhs: float
    ratio: float
    exponents: dict
    s: float | tuple[float, float]
    grid_meta: dict
    degenerate: bool = False

    def as_dict(self) -> dict:
        d = asdict(self)
        d["rhs_terms"] = list(self.rhs_terms)
        if isinstance(self.s, tuple):
            d["s"] = list(self.s)
        return d

    def scaled(self, factor: float, family_param: float) -> "InequalityReport":
        """Copy with both sides multiplied by ``factor`` and a new parameter."""
        terms = tuple(factor * t for t in self.rhs_terms)
        return _make_report(
            self.theorem_id, family_param, factor * self.lhs, terms,
            self.exponents, self.s, self.grid_meta,
        )


def _make_report(theorem_id, param, lhs, terms, exponents, s, grid_meta) -> InequalityReport:
    terms = tuple(float(t) for t in terms)
    rhs = float(sum(terms))
    lhs = float(lhs)
    if rhs > 0:
        ratio, degenerate = lhs / rhs, False
    else:
        ratio, degenerate = (0.0 if lhs == 0 else math.inf), True
    return InequalityReport(
        theorem_id, float(param), lhs, terms, rhs, ratio, exponents, s, grid_meta, degenerate
    )


# -- families -----------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """Counterexample family description.

    ``kind`` is ``"modulated"`` (parameters are integers ``k``, frequency
    ``2^k``), ``"dilated"`` or ``"psi_squared"`` (parameters are ``delta`` in
    ``(0, 1]``).  ``base_profile`` selects the bump (``"Phi"`` or ``"Psi"``)
    whose inverse transform is the underlying Schwartz function.
    """

    kind: str
    param_list: tuple[float, ...]
    base_profile: str = "Phi"

    def __post_init__(self):
        if self.kind not in ("modulated", "dilated", "psi_squared"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.base_profile not in ("Phi", "Psi"):
            raise ValueError(f"unknown base profile {self.base_profile!r}")
        if len(self.param_list) == 0:
            raise ValueError("family needs at least one parameter")
        object.__setattr__(self, "param_list", tuple(self.param_list))
        for p in self.param_list:
            if self.kind == "modulated":
                if int(p) != p or p < 0:
                    raise ValueError(f"modulated family parameters must be integers >= 0, got {p}")
            elif not (0.0 < p <= 1.0):
                raise ValueError(f"{self.kind} family parameters must lie in (0, 1], got {p}")


def _profile(grid: Grid, kind: str, dilation: float, shift: np.ndarray, param) -> GridFunction:
    try:
        return bump_profile(grid, kind, dilation=dilation, shift=shift, max_band_fraction=1.0)
    except ValueError as exc:
        raise ValueError(f"family parameter {param}: {exc}") from None


def family_generate(spec: FamilySpec, grid: Grid) -> list[tuple[GridFunction, GridFunction]]:
    """Build the ``(f, g)`` pairs of a family on ``grid``.

    ``modulated``
        ``f_k = e^{i 2^k x_1} b_hat(x)`` and ``g_k = e^{-i 2^k x_1} b_hat(x)``,
        so that ``f_k g_k = b_hat^2`` for every ``k``.
    ``dilated``
        ``f_delta = g_delta = b_hat(x / delta)`` built in frequency space.
    ``psi_squared``
        ``f = g = Psi_hat(x / delta)``, the real Schwartz function whose
        transform is the annular bump.

    Aliasing is rejected: every factor's spectrum and the spectrum of the
    product ``f g`` must stay below the Nyquist frequency.
    """
    n = grid.dim
    out = []
    for p in spec.param_list:
        if spec.kind == "modulated":
            shift = np.zeros(n)
            shift[0] = 2.0 ** int(p)
            if 2.0 * 2.0 >= grid.nyquist:
                raise ValueError(f"family parameter {p}: grid too coarse for the base bump")
            f = _profile(grid, spec.base_profile, 1.0, shift, p)
            g = _profile(grid, spec.base_profile, 1.0, -shift, p)
        else:
            kind = spec.base_profile if spec.kind == "dilated" else "Psi"
            if 4.0 / p >= grid.nyquist:
                raise ValueError(
                    f"family parameter {p}: product band {4.0 / p:.6g} reaches the "
                    f"Nyquist frequency {grid.nyquist:.6g}"
                )
            f = _profile(grid, kind, float(p), np.zeros(n), p)
            f = GridFunction(grid, f.samples.real)
            g = f
        out.append((f, g))
    return out


# -- single instances -----------------------------------------------------------


def _weight(grid: Grid, a: float, kind: str, p: float):
    if a == 0 or math.isinf(p):
        return None
    if kind == "japanese":
        return japanese_weight(grid, a)
    if kind == "homogeneous":
        return homogeneous_weight(grid, a)
    raise ValueError(f"unknown weight kind {kind!r}")


def _norm(f: GridFunction, p: float, a: float, kind: str) -> float:
    return weighted_norm(f, p, a, weight=_weight(f.grid, a, kind, p))


def _operator(s: float, operator: str) -> Symbol:
    if operator == "J":
        return bessel_symbol(s)
    if operator == "D":
        return riesz_symbol(s)
    raise ValueError(f"unknown operator {operator!r}")


def kp_ratio(
    f: GridFunction,
    g: GridFunction,
    s: float,
    e: ExponentTuple,
    family_param: float = 0.0,
    weight: str = "japanese",
    operator: str = "J",
) -> InequalityReport:
    """Both sides of the weighted fractional Leibniz estimate.

    ``lhs = ||J^s(fg)||_{p,a}`` and
    ``rhs_terms = [||J^s f||_{p1,a1} ||g||_{p2,a2}, ||f||_{p1,a1} ||J^s g||_{p2,a2}]``.
    ``weight="homogeneous"`` swaps ``<x>^a`` for ``|x|^a`` and
    ``operator="D"`` uses ``|xi|^s`` in place of ``<xi>^s``.
    """
    m = _operator(s, operator)
    lhs = _norm(apply_symbol(f * g, m), e.p, e.a, weight)
    t1 = _norm(apply_symbol(f, m), e.p1, e.a1, weight) * _norm(g, e.p2, e.a2, weight)
    t2 = _norm(f, e.p1, e.a1, weight) * _norm(apply_symbol(g, m), e.p2, e.a2, weight)
    return _make_report("main1", family_param, lhs, (t1, t2), e.as_dict(), s, f.grid.describe())


def _grad_magnitude(f: GridFunction) -> GridFunction:
    comps = gradient(f)
    mag = np.sqrt(sum(np.abs(c.samples) ** 2 for c in comps))
    return GridFunction(f.grid, mag)


def commutator_ratio(
    f: GridFunction,
    g: GridFunction,
    s: float,
    e: ExponentTuple,
    order: int = 1,
    family_param: float = 0.0,
) -> InequalityReport:
    """Both sides of the first- or second-order commutator estimate.

    ``rhs_terms = [||J^s f|| ||g||, ||grad f|| ||J^{s-1} g||]`` with the
    gradient measured by its pointwise Euclidean length.
    """
    lhs = weighted_norm(commutator_lhs(f, g, s, order), e.p, e.a)
    t1 = weighted_norm(apply_symbol(f, bessel_symbol(s)), e.p1, e.a1) * weighted_norm(g, e.p2, e.a2)
    t2 = weighted_norm(_grad_magnitude(f), e.p1, e.a1) * weighted_norm(
        apply_symbol(g, bessel_symbol(s - 1.0)), e.p2, e.a2
    )
    return _make_report(
        f"main-comm-{order}", family_param, lhs, (t1, t2), e.as_dict(), s, f.grid.describe()
    )


def _check_mixed(target: MixedSpec, first: MixedSpec, second: MixedSpec):
    dims = {(m.dot_dim, m.ddot_dim) for m in (target, first, second)}
    if len(dims) != 1:
        raise ValueError(f"mixed specs disagree on the block dimensions: {sorted(dims)}")
    check_exponents(target.p_dot, first.p_dot, second.p_dot, target.a_dot, first.a_dot, second.a_dot)
    check_exponents(
        target.p_ddot, first.p_ddot, second.p_ddot, target.a_ddot, first.a_ddot, second.a_ddot
    )


def _mixed_dict(target, first, second) -> dict:
    return {"target": asdict(target), "first": asdict(first), "second": asdict(second)}


def mixed_ratio(
    f: GridFunction,
    g: GridFunction,
    s: float,
    target: MixedSpec,
    first: MixedSpec,
    second: MixedSpec,
    family_param: float = 0.0,
) -> InequalityReport:
    """Mixed-norm fractional Leibniz estimate; ``J^s`` acts on all variables."""
    _check_mixed(target, first, second)
    J = bessel_symbol(s)
    lhs = mixed_norm(apply_symbol(f * g, J), target)
    t1 = mixed_norm(apply_symbol(f, J), first) * mixed_norm(g, second)
    t2 = mixed_norm(f, first) * mixed_norm(apply_symbol(g, J), second)
    return _make_report(
        "main2", family_param, lhs, (t1, t2), _mixed_dict(target, first, second), s, f.grid.describe()
    )


def _block_bessel(s: float, axes: range) -> Symbol:
    ax = list(axes)
    return Symbol(
        lambda xi: (1.0 + np.sum(xi[ax] ** 2, axis=0)) ** (0.5 * s), ("Custom", f"J^{s} on {ax}")
    )


def biparameter_ratio(
    f: GridFunction,
    g: GridFunction,
    s_dot: float,
    s_ddot: float,
    target: MixedSpec,
    first: MixedSpec,
    second: MixedSpec,
    family_param: float = 0.0,
) -> InequalityReport:
    """Biparameter estimate with ``J^{s_dot}`` on the inner block and
    ``J^{s_ddot}`` on the outer block; four right-hand terms."""
    _check_mixed(target, first, second)
    if f.grid.dim != target.dim:
        raise ValueError(f"functions have dimension {f.grid.dim}, specs expect {target.dim}")
    Jd = _block_bessel(s_dot, range(target.dot_dim))
    Jdd = _block_bessel(s_ddot, range(target.dot_dim, target.dim))
    both = Jd * Jdd
    lhs = mixed_norm(apply_symbol(f * g, both), target)
    n1 = lambda h: mixed_norm(h, first)  # noqa: E731
    n2 = lambda h: mixed_norm(h, second)  # noqa: E731
    terms = (
        n1(apply_symbol(f, both)) * n2(g),
        n1(apply_symbol(f, Jd)) * n2(apply_symbol(g, Jdd)),
        n1(apply_symbol(f, Jdd)) * n2(apply_symbol(g, Jd)),
        n1(f) * n2(apply_symbol(g, both)),
    )
    return _make_report(
        "main3", family_param, lhs, terms, _mixed_dict(target, first, second),
        (float(s_dot), float(s_ddot)), f.grid.describe(),
    )


# -- fits and sweeps ------------------------------------------------------------


@dataclass(frozen=True)
class PowerFit:
    """Least-squares ``log y = slope * log x + intercept``."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    slope: float
    intercept: float
    residual: float


def power_fit(x, y) -> PowerFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.shape != y.shape:
        raise ValueError("power fit needs at least two matching samples")
    if np.any(~(x > 0)) or np.any(~(y > 0)) or not np.all(np.isfinite(y)):
        raise ValueError(f"power fit needs positive finite data, got y={y.tolist()}")
    X, Y = np.log(x), np.log(y)
    A = np.vstack([X, np.ones_like(X)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, Y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - Y) ** 2)))
    return PowerFit(tuple(x), tuple(y), float(slope), float(icpt), resid)


@dataclass(frozen=True)
class SweepResult:
    reports: list[InequalityReport]
    growth: PowerFit
    lhs_fit: PowerFit
    rhs_fit: PowerFit
    fit_variable: str = field(default="2^k")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.reports])


def _fit_window(n: int) -> slice:
    return slice(1, n - 1) if n >= 4 else slice(0, n)


def sweep(
    theorem_id: str,
    family: FamilySpec,
    e: ExponentTuple,
    s: float,
    grid: Grid,
    order: int = 1,
    normalize: bool | None = None,
    threads: int = 1,
    weight: str = "japanese",
    operator: str = "J",
) -> SweepResult:
    """Evaluate a family and fit power laws in its parameter.

    Parameters
    ----------
    theorem_id : {"main1", "main-comm"}
    normalize : bool, optional
        For dilation families, multiply both sides by ``delta^(s - n/p)``,
        the factor that makes the right-hand side scale invariant; on by
        default for ``dilated`` and ``psi_squared``.

    Returns
    -------
    SweepResult
        ``growth`` fits the ratio, ``lhs_fit`` and ``rhs_fit`` the two
        sides, against ``2^k`` (modulated) or ``delta``.  The fits skip the
        two extreme parameters when at least four are present.
    """
    if theorem_id not in ("main1", "main-comm"):
        raise ValueError(f"sweeps support main1 and main-comm, got {theorem_id!r}")
    pairs = family_generate(family, grid)
    modulated = family.kind == "modulated"
    if normalize is None:
        normalize = not modulated
    n = grid.dim

    def one(idx):
        f, g = pairs[idx]
        p = family.param_list[idx]
        if theorem_id == "main1":
            rep = kp_ratio(f, g, s, e, p, weight=weight, operator=operator)
        else:
            rep = commutator_ratio(f, g, s, e, order=order, family_param=p)
        if normalize and not modulated:
            scale = p ** (s - (0.0 if math.isinf(e.p) else n / e.p))
            rep = rep.scaled(scale, p)
        return rep

    idxs = range(len(pairs))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, idxs))
    else:
        reports = [one(i) for i in idxs]
    x = np.array([2.0 ** p if modulated else p for p in family.param_list])
    order_idx = np.argsort(x)
    win = order_idx[_fit_window(len(x))]
    xs = x[win]
    pick = lambda name: np.array([getattr(reports[i], name) for i in win])  # noqa: E731
    return SweepResult(
        reports,
        power_fit(xs, pick("ratio")),
        power_fit(xs, pick("lhs")),
        power_fit(xs, pick("rhs")),
        "2^k" if modulated else "delta",
    )


# -- sharp threshold -------------------------------------------------------------


def sharpness_classify(s: float, p: float, n: int) -> str:
    """Classify ``s`` against the sharp threshold ``max(0, n(1/p - 1))``.

    Even positive integers are routed to the exception first, since the
    estimate holds there regardless of ``p``.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    half = s / 2.0
    if s > 0 and abs(half - round(half)) <= 1e-12 and round(half) >= 1:
        return EVEN_EXCEPTION
    inv = 0.0 if math.isinf(p) else 1.0 / p
    return BOUNDED if s > max(0.0, n * (inv - 1.0)) else DIVERGENT
