"""Compare the compiled and numpy Husimi kernels on square grids.

Usage: python benchmarks/bench_husimi.py [--sizes 60,120,240] [--repeat 3] [--threads 1]
"""

import argparse
import time

import numpy as np

from qbaker import _backend
from qbaker.states import periodization_cutoff, torus_coherent_state


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="60,120,240")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    if _backend.compiled_husimi_kernel is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'D':>6} {'grid':>9} {'compiled [s]':>13} {'numpy [s]':>10} {'speedup':>8} {'max diff':>9}")
    for D in (int(s) for s in args.sizes.split(",")):
        psi = torus_coherent_state(0.3, 0.6, 1.0, D)
        V = periodization_cutoff(1.0, D)
        call = dict(psi=psi, nx=D, n_p=D, sigma=1.0, cutoff=V, threads=args.threads)
        fast = best_time(lambda: _backend.compiled_husimi_kernel(**call), args.repeat)
        slow = best_time(lambda: _backend.python_husimi_kernel(**call), args.repeat)
        diff = np.abs(_backend.compiled_husimi_kernel(**call) - _backend.python_husimi_kernel(**call)).max()
        print(f"{D:>6} {f'{D}x{D}':>9} {fast:>13.4f} {slow:>10.4f} {slow / fast:>8.2f} {diff:>9.1e}")


if __name__ == "__main__":
    main()
