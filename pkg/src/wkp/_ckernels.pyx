# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched quadrature of the Bessel kernel.

Mirrors :func:`wkp._kernels_py.kernel_batch` node for node; see that module
for the description of the segmentation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, sinh, cosh, tanh, floor, fabs, M_PI

cnp.import_array()

cdef double T_MAX = 3.5
cdef int MAX_LEVEL = 12
cdef int MIN_LEVEL = 3


cdef inline double _integrand(double u, double y2, double d2, double alpha, double gmax) nogil:
    return exp(-y2 * exp(-u) - d2 * exp(u) - alpha * u - gmax)


cdef int _segment(double a, double b, double y2, double d2, double alpha,
                  double gmax, double rtol, double* value, double* err) nogil:
    cdef double c = 0.5 * (a + b)
    cdef double d = 0.5 * (b - a)
    cdef double h, tau, v, x, w, total = 0.0, estimate, new, change = 0.0
    cdef int level, k, kmax
    kmax = <int>floor(T_MAX)
    for k in range(-kmax, kmax + 1):
        tau = <double>k
        v = 0.5 * M_PI * sinh(tau)
        x = tanh(v)
        w = 0.5 * M_PI * cosh(tau) / (cosh(v) * cosh(v))
        total += w * _integrand(c + d * x, y2, d2, alpha, gmax)
    estimate = d * total
    for level in range(1, MAX_LEVEL + 1):
        h = 2.0 ** (-level)
        kmax = <int>floor(T_MAX / h)
        for k in range(-kmax, kmax + 1):
            if k % 2 == 0:
                continue
            tau = k * h
            v = 0.5 * M_PI * sinh(tau)
            x = tanh(v)
            w = 0.5 * M_PI * cosh(tau) / (cosh(v) * cosh(v))
            total += w * _integrand(c + d * x, y2, d2, alpha, gmax)
        new = d * total * h
        change = fabs(new - estimate)
        estimate = new
        if level >= MIN_LEVEL and change <= rtol * fabs(estimate):
            value[0] = estimate
            err[0] = change
            return 0
    value[0] = estimate
    err[0] = change
    return 1


def kernel_batch(radii, double s, double delta, int n, double rtol=1e-10):
    """Evaluate ``K_s^delta`` at each radius; returns ``(values, error_estimates)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_arr = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t m = y_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] values = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] errors = np.empty(m)
    cdef double alpha = 0.5 * (s + n)
    cdef double d2 = delta * delta
    cdef double y, y2, c, ua, ub, l1, l2, lo, hi, z, gmax, tot, er, v, e, scale
    cdef double cuts[4]
    cdef int ncut, j, failed = 0
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            y = y_arr[i]
            y2 = y * y
            c = 60.0 + 2.0 * alpha + 2.0 * delta * y
            ua = log(y2 / c)
            ub = log(c / d2)
            l1 = log(y2)
            l2 = -log(d2)
            lo = l1 if l1 < l2 else l2
            hi = l2 if l1 < l2 else l1
            ncut = 0
            cuts[ncut] = ua
            ncut += 1
            if cuts[ncut - 1] + 1e-9 < lo and lo < ub - 1e-9:
                cuts[ncut] = lo
                ncut += 1
            if cuts[ncut - 1] + 1e-9 < hi and hi < ub - 1e-9:
                cuts[ncut] = hi
                ncut += 1
            cuts[ncut] = ub
            ncut += 1
            z = 2.0 * y2 / (alpha + sqrt(alpha * alpha + 4.0 * d2 * y2))
            gmax = -y2 / z - d2 * z - alpha * log(z)
            tot = 0.0
            er = 0.0
            for j in range(ncut - 1):
                failed += _segment(cuts[j], cuts[j + 1], y2, d2, alpha, gmax, rtol, &v, &e)
                tot += v
                er += e
            scale = exp(gmax)
            values[i] = tot * scale
            errors[i] = er * scale
    if failed:
        from .quadrature import QuadratureError
        raise QuadratureError(f"kernel quadrature failed to converge on {failed} segment(s)")
    return values, errors
