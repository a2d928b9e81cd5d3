"""Time the compiled and pure-Python kernels on the tightness grid.

Usage: python3 benchmarks/bench_kernels.py [--grid N] [--repeat K]
"""

import argparse
import time

from fogndt import kernels


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=100, help="points per axis minus one")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    found = kernels.backends()
    timings = {}
    for name, impl in sorted(found.items()):
        res = kernels.tightness_grid(args.grid, impl=impl)
        assert res.ok(), f"{name} backend failed the grid check"
        timings[name] = best_of(lambda: kernels.tightness_grid(args.grid, impl=impl), args.repeat)
        print(f"{name:9s} {res.checks:7d} checks  {timings[name] * 1e3:10.2f} ms")
    if "compiled" in timings:
        print(f"speedup   {timings['python'] / timings['compiled']:.1f}x")
    else:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
