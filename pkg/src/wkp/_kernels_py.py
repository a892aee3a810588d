"""Pure-Python/numpy implementation of the batched kernel quadrature.

This is the reference fallback for :mod:`wkp._ckernels`; both follow the
same node sequence and stopping rule, so they agree to rounding.
"""
from __future__ import annotations

import math

import numpy as np

from .quadrature import tanh_sinh

__all__ = ["kernel_batch", "segment_bounds"]


def segment_bounds(y: float, alpha: float, delta: float) -> tuple[list[float], float]:
    """Integration breakpoints in ``u = log t`` and the log-integrand peak.

    The integrand ``exp(-y^2 e^-u - delta^2 e^u - alpha u)`` is cut where
    either exponential factor has fallen below ``exp(-c)`` relative to the
    peak, with ``c = 60 + 2 alpha + 2 delta y``; interior breakpoints sit at
    ``u = log y^2`` and ``u = log(1/delta^2)``.
    """
    c = 60.0 + 2.0 * alpha + 2.0 * delta * y
    y2 = y * y
    d2 = delta * delta
    ua = math.log(y2 / c)
    ub = math.log(c / d2)
    cuts = [ua]
    for u in sorted((math.log(y2), -math.log(d2))):
        if cuts[-1] + 1e-9 < u < ub - 1e-9:
            cuts.append(u)
    cuts.append(ub)
    z = 2.0 * y2 / (alpha + math.sqrt(alpha * alpha + 4.0 * d2 * y2))
    upk = math.log(z)
    gmax = -y2 / z - d2 * z - alpha * upk
    return cuts, gmax


def kernel_batch(
    radii: np.ndarray, s: float, delta: float, n: int, rtol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate ``K_s^delta`` at each radius; returns ``(values, error_estimates)``."""
    radii = np.ascontiguousarray(radii, dtype=float)
    alpha = 0.5 * (s + n)
    d2 = delta * delta
    values = np.empty_like(radii)
    errors = np.empty_like(radii)
    for i, y in enumerate(radii):
        cuts, gmax = segment_bounds(float(y), alpha, delta)
        y2 = float(y) * float(y)

        def integrand(u):
            return np.exp(-y2 * np.exp(-u) - d2 * np.exp(u) - alpha * u - gmax)

        total = 0.0
        err = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            v, e = tanh_sinh(integrand, a, b, rtol=rtol)
            total += v
            err += e
        scale = math.exp(gmax)
        values[i] = total * scale
        errors[i] = err * scale
    return values, errors
