"""Compare the compiled kernel-matrix backend against the NumPy fallback.

Run:
    python benchmarks/bench_backends.py [--sizes 200,500,1000] [--repeats 5]

Forcing the fallback for a whole process: WCEGO_BACKEND=numpy.
"""

import argparse
import time

import numpy as np

from wcego.backend import available_backends


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500,1000",
                        help="comma-separated matrix sizes")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = available_backends()
    if len(backends) < 2:
        print("compiled backend not built; only the NumPy fallback is "
              "available, nothing to compare")
        return

    from wcego import _gram_cy, _gram_np
    rng = np.random.default_rng(0)
    cases = [
        ("se", lambda m, X, Y: m.se_matrix(X, Y, 0.7)),
        ("matern52", lambda m, X, Y: m.matern_matrix(X, Y, 2.5, 0.5, 1.0)),
        ("matern72", lambda m, X, Y: m.matern_matrix(X, Y, 3.5, 0.5, 1.0)),
        ("quadratic", lambda m, X, Y: m.quadratic_matrix(X, Y)),
    ]
    print(f"{'kernel':<10} {'n':>6} {'numpy (s)':>12} {'cython (s)':>12} "
          f"{'speedup':>8}")
    for n in sizes:
        X = rng.uniform(-3, 3, size=(n, 3))
        Y = rng.uniform(-3, 3, size=(n, 3))
        for name, call in cases:
            a = call(_gram_np, X, Y)
            b = call(_gram_cy, X, Y)
            assert np.allclose(a, b, rtol=1e-13, atol=1e-13), name
            t_np = time_call(call, (_gram_np, X, Y), args.repeats)
            t_cy = time_call(call, (_gram_cy, X, Y), args.repeats)
            print(f"{name:<10} {n:>6} {t_np:>12.5f} {t_cy:>12.5f} "
                  f"{t_np / t_cy:>8.2f}x")


if __name__ == "__main__":
    main()
