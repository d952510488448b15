"""Benchmark the compiled kernels against the pure-numpy fallback.

Run from the repo root:

    python3 bench/bench_kernels.py

Covers the two hot paths: the Gaussian total-correlation sweep over all
node triples (the workload of a 116-node complete scan, 253460 triples)
and the column-wise l1-ball projection used inside the sparse solver.
"""

import time

import numpy as np

from tsplex import _backend, _kernels_py
from tsplex.complexes import all_triples

try:
    from tsplex import _kernels
except ImportError:
    _kernels = None


def timeit(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_tc(n=116):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((n, 500))
    cov = np.cov(x, ddof=1)
    triples = np.array(all_triples(n), dtype=np.int64)
    rows = []
    t_py, w_py = timeit(_kernels_py.gaussian_tc_from_cov, cov, triples)
    rows.append(("pure-python", t_py))
    if _kernels is not None:
        t_c, w_c = timeit(_kernels.gaussian_tc_from_cov, cov, triples)
        assert np.allclose(w_c, w_py, rtol=1e-12, atol=1e-14)
        rows.append(("compiled", t_c))
    return f"gaussian_tc_from_cov ({len(triples)} triples)", rows


def bench_l1(k=400, cols=2000):
    rng = np.random.default_rng(1)
    x = rng.standard_normal((k, cols)) * 4
    rows = []
    t_py, p_py = timeit(_kernels_py.l1ball_project_columns, x, 1.0)
    rows.append(("pure-python", t_py))
    if _kernels is not None:
        t_c, p_c = timeit(_kernels.l1ball_project_columns, x, 1.0)
        assert np.allclose(p_c, p_py, atol=1e-12)
        rows.append(("compiled", t_c))
    return f"l1ball_project_columns ({k}x{cols})", rows


def main():
    print(f"active backend: {'compiled' if _backend.USING_COMPILED_KERNELS else 'pure-python'}")
    if _kernels is None:
        print("compiled extension not available, timing fallback only")
    for label, rows in (bench_tc(), bench_l1()):
        print(f"\n{label}")
        base = rows[0][1]
        for name, t in rows:
            print(f"  {name:<12} {t * 1e3:9.2f} ms   x{base / t:5.2f}")


if __name__ == "__main__":
    main()
