"""Timing comparison of the pure-Python and compiled kernel backends.

Runs each kernel on a fixed seeded workload and prints one table row per
kernel with the best-of-N wall time for both backends and the speedup.
The workloads are sized so the whole run stays under a minute on a laptop.

Usage: python3 benchmarks/bench_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qpad._kernels import pyback

try:
    from qpad._kernels import _core
except ImportError:
    _core = None


def _best(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(rng: np.random.Generator):
    a = rng.integers(-(1 << 20), 1 << 20, size=1 << 20).astype(np.float64)

    rho = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    rho = rho @ rho.conj().T
    rho /= np.trace(rho).real
    points = rng.integers(0, 1 << 8, size=4096).astype(np.uint64)

    d = 101
    q = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q = q @ q.conj().T
    q /= np.trace(q).real

    h = rng.normal(size=(48, 48)) + 1j * rng.normal(size=(48, 48))
    h = h + h.conj().T

    return [
        ("fwht 2^20", "fwht", (a.copy(),), lambda: (a.copy(),)),
        ("aghp_points 16x8", "aghp_points", (16, 8, (1 << 8) | 0b11101), None),
        ("pauli_mix n=4 4096pts", "pauli_mix", (rho, points, 4), None),
        ("qudit_core_mix d=101", "qudit_core_mix", (q,), None),
        ("jacobi_eigvals d=48", "jacobi_eigvals", (h,), None),
    ]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3, help="best-of-N timing")
    args = ap.parse_args()

    rng = np.random.default_rng(2024)
    rows = _workloads(rng)

    print(f"{'kernel':<24} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, name, call_args, fresh in rows:
        t_py = _best(getattr(pyback, name), fresh() if fresh else call_args, args.repeats)
        if _core is None:
            print(f"{label:<24} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_c = _best(getattr(_core, name), fresh() if fresh else call_args, args.repeats)
        print(f"{label:<24} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.2f}ms {t_py / t_c:>8.1f}x")
    if _core is None:
        print("compiled backend not built; rerun after `pip install -e . --no-build-isolation`")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
