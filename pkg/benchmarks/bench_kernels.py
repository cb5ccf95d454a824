"""Benchmark the compiled kernels against the pure-Python fallback.

Run:  python benchmarks/bench_kernels.py
"""
import argparse
import time

import numpy as np

from ceilingwkb import _kernels
from ceilingwkb._kernels import fallback


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--n-scan", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not _kernels.HAS_EXTENSION:
        print("compiled extension not available; nothing to compare")
        return

    from ceilingwkb._kernels import _core

    rng = np.random.default_rng(0)
    n = args.points
    ys = rng.uniform(0.05, 6.0, n)
    xs = rng.uniform(0.05, 6.0, n)
    ts = rng.uniform(0.1, 5.0, n)
    ps = rng.uniform(-6.0, 3.0, n)

    cases = [
        ("position_bitmask_grid",
         lambda m: m.position_bitmask_grid(ys, xs, ts, n_scan=args.n_scan)),
        ("momentum_bitmask_grid",
         lambda m: m.momentum_bitmask_grid(ps, xs, ts, n_scan=args.n_scan)),
        ("shoot_position_scalar x1000",
         lambda m: [m.shoot_position_scalar(ys[i], xs[i], ts[i])
                    for i in range(min(1000, n))]),
        ("shoot_momentum_scalar x1000",
         lambda m: [m.shoot_momentum_scalar(ps[i], xs[i], ts[i])
                    for i in range(min(1000, n))]),
    ]

    print(f"{n} points, n_scan={args.n_scan}, best of {args.repeats}")
    print(f"{'kernel':<30} {'compiled':>12} {'fallback':>12} {'speedup':>9}")
    for name, call in cases:
        t_ext = _time(lambda: call(_core), args.repeats)
        t_py = _time(lambda: call(fallback), args.repeats)
        print(f"{name:<30} {t_ext:>11.4f}s {t_py:>11.4f}s {t_py / t_ext:>8.1f}x")


if __name__ == "__main__":
    main()
