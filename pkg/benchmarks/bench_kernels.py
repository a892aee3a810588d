"""Time the compiled and pure-Python kernel quadrature backends.

Run with ``python benchmarks/bench_kernels.py [--points 5000] [--repeat 3]``.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from wkp import _kernels_py

try:
    from wkp import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_time(fn, repeat: int) -> tuple[float, np.ndarray]:
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=5000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    radii = np.geomspace(1e-3, 60.0, args.points)
    cases = [(-0.5, 1.0, 1), (-1.5, 0.1, 3), (0.7, 0.01, 2)]
    print(f"{'s':>6} {'delta':>6} {'n':>2} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max rel diff':>13}")
    for s, delta, n in cases:
        t_py, (v_py, _) = best_time(lambda: _kernels_py.kernel_batch(radii, s, delta, n, 1e-10), args.repeat)
        if _ckernels is None:
            print(f"{s:6.2f} {delta:6.2f} {n:2d} {t_py:11.4f} {'n/a':>11} {'n/a':>8} {'n/a':>13}")
            continue
        t_c, (v_c, _) = best_time(lambda: _ckernels.kernel_batch(radii, s, delta, n, 1e-10), args.repeat)
        diff = float(np.max(np.abs(v_c - v_py) / np.abs(v_py)))
        print(f"{s:6.2f} {delta:6.2f} {n:2d} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:8.2f} {diff:13.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
