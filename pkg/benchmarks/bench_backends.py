"""Time the numba and numpy kernel flavours side by side.

    python benchmarks/bench_backends.py [--sizes 24 57 200] [--repeat 5]

Kernel timings call both flavours in-process (numba ones are compiled
before timing).  The pipeline timing runs ``crossnet rolling`` in a
subprocess per backend, so it includes interpreter start-up and, for
numba, loading the cached compiled kernels.
"""
import argparse
import os
import subprocess
import sys
import tempfile
import time
import timeit
from pathlib import Path

import numpy as np

from crossnet import kernels


def unit_rows(rng, N, n):
    x = rng.normal(size=(N, n))
    x -= x.mean(axis=1, keepdims=True)
    return np.ascontiguousarray(x / np.linalg.norm(x, axis=1, keepdims=True))


def best_of(func, repeat):
    timer = timeit.Timer(func)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def bench_kernels(sizes, n, repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'N':>6}{'numba [ms]':>14}{'numpy [ms]':>14}{'speed-up':>10}")
    for N in sizes:
        rho = unit_rows(rng, N, n)
        D = kernels.pair_distances_np(rho)
        iu, ju = np.triu_indices(N, 1)
        order = np.lexsort((ju, iu, D[iu, ju]))
        iu, ju = np.ascontiguousarray(iu[order]), np.ascontiguousarray(ju[order])
        L = kernels.single_link_np(D)[-1, 2]
        cases = {
            "pair_distances": ((kernels.pair_distances_nb, kernels.pair_distances_np), (rho,)),
            "single_link": ((kernels.single_link_nb, kernels.single_link_np), (D,)),
            "kruskal": ((kernels.kruskal_nb, kernels.kruskal_np), (iu, ju, N)),
            "inverse_sums": ((kernels.inverse_sums_nb, kernels.inverse_sums_np), (D, L, 1e-9)),
        }
        for name, ((nb, np_), args) in cases.items():
            nb(*args)  # compile / load from cache
            t_nb = best_of(lambda: nb(*args), repeat) * 1e3
            t_np = best_of(lambda: np_(*args), repeat) * 1e3
            print(f"{name:<16}{N:>6}{t_nb:>14.4f}{t_np:>14.4f}{t_np / t_nb:>9.1f}x")


def bench_pipeline(N, n, window):
    rng = np.random.default_rng(1)
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "panel.csv"
        lines = ["entity,period,claims,liabilities"]
        for i in range(N):
            c = rng.normal(1e3, 50, n).cumsum()
            l = rng.normal(1e3, 50, n).cumsum()
            for t in range(n):
                year, q = divmod(1983 * 4 + t, 4)
                lines.append(f"E{i:03d},{year}Q{q + 1},{float(c[t])!r},{float(l[t])!r}")
        src.write_text("\n".join(lines) + "\n")
        print(f"\nrolling pipeline: N={N}, n={n}, window={window} (subprocess, wall clock)")
        for flag, label in (("0", "numba"), ("1", "numpy")):
            env = dict(os.environ, CROSSNET_DISABLE_NUMBA=flag)
            cmd = [sys.executable, "-m", "crossnet", "rolling", "--input", str(src),
                   "--out-dir", tmp, "--window", str(window)]
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            start = time.perf_counter()
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            print(f"  {label:<6} {time.perf_counter() - start:8.3f} s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[24, 57, 200])
    parser.add_argument("--periods", type=int, default=110)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--pipeline-entities", type=int, default=57)
    args = parser.parse_args()
    bench_kernels(args.sizes, args.periods, args.repeat)
    bench_pipeline(args.pipeline_entities, args.periods, 56)


if __name__ == "__main__":
    main()
