"""Compare the numba and pure-numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The dispatch flag is toggled in-process so both paths see identical inputs;
setting FORGE_DISABLE_JIT=1 before import selects the numpy path globally.
"""

import argparse
import time

import numpy as np

from forge import _kernels
from forge.surfaces import counterexample, flat_s3_integrate


def _best(fn, repeat):
    out, best = None, np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(repeat=3):
    if not _kernels.HAVE_NUMBA:
        print("numba not installed: only the numpy path is available")
        return
    d = counterexample()
    n = 512
    x = np.linspace(-2, 2, n)
    X, Y = np.meshgrid(x, x)
    V = np.hypot(X, Y) - 1.0 + 0.1 * np.sin(5 * X) * np.cos(3 * Y)
    cases = {
        "frame march, flat S^3 mesh 401^2": lambda: flat_s3_integrate(d, step=1e-2).f,
        f"marching squares {n}^2": lambda: _kernels.marching_squares(V, x, x)[0],
    }
    saved = _kernels.USE_NUMBA
    try:
        _kernels.USE_NUMBA = True
        for fn in cases.values():  # compile outside the timed runs
            fn()
        print(f"{'kernel':36s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s} {'max diff':>10s}")
        for name, fn in cases.items():
            _kernels.USE_NUMBA = True
            tj, a = _best(fn, repeat)
            _kernels.USE_NUMBA = False
            tn, b = _best(fn, repeat)
            diff = float(np.max(np.abs(a - b))) if a.shape == b.shape else float("nan")
            print(f"{name:36s} {tj:10.4f} {tn:10.4f} {tn / tj:8.2f} {diff:10.2e}")
    finally:
        _kernels.USE_NUMBA = saved


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    bench(ap.parse_args().repeat)
