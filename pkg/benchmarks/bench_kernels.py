#!/usr/bin/env python3
"""Benchmark the compiled slice-product kernel against the numpy fallback.

Runs both backends directly (ignoring the import-time selection) over a range
of slice counts and prints a timing table plus the max-norm disagreement.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ottospin._kernels import _fallback

try:
    from ottospin._kernels import _core
except ImportError:
    _core = None


def _time(func, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    protocol = (2.0, 3.6, 360.0)  # nu_start, nu_end, tau
    print(f"{'n_steps':>10} {'numpy (ms)':>12} {'cython (ms)':>12} "
          f"{'speedup':>8} {'max |diff|':>12}")
    for n_steps in (1000, 5000, 20000, 80000):
        ref = _fallback.slice_product(*protocol, n_steps, False)
        t_fallback = _time(
            _fallback.slice_product, *protocol, n_steps, False, repeats=args.repeats
        )
        if _core is None:
            print(f"{n_steps:>10} {t_fallback * 1e3:>12.3f} {'n/a':>12} "
                  f"{'n/a':>8} {'n/a':>12}")
            continue
        out = _core.slice_product(*protocol, n_steps, False)
        t_core = _time(
            _core.slice_product, *protocol, n_steps, False, repeats=args.repeats
        )
        diff = float(np.max(np.abs(out - ref)))
        print(f"{n_steps:>10} {t_fallback * 1e3:>12.3f} {t_core * 1e3:>12.3f} "
              f"{t_fallback / t_core:>8.2f} {diff:>12.3e}")
    if _core is None:
        print("\ncompiled kernel not available; showing fallback only")


if __name__ == "__main__":
    main()
