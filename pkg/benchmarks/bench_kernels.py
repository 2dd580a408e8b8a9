#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``. Each case is warmed up
once (JIT compile) and then timed as the best of several repeats.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from probe_resonance import _kernels


def best_of(fn, repeats: int) -> float:
    fn()
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng: np.random.Generator) -> dict:
    k = 201
    alpha = np.linspace(0, 2, k)
    d = 0.05
    c = d**alpha
    times = 0.5 * np.pi * d ** -(1 + alpha)
    grid_times = np.linspace(0, 3000, 2001)
    e_grid = np.linspace(0, 20, 81)

    evals = rng.normal(size=65)
    weights = rng.normal(size=(4, 65)) + 1j * rng.normal(size=(4, 65))
    spec_times = np.linspace(0, 500, 4001)

    u = np.linalg.qr(rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32)))[0]
    psi = (rng.normal(size=32) + 0j) / np.sqrt(32)

    return {
        "three_level_pointwise (alpha sweep, 201)": lambda b: _kernels.three_level_pointwise(
            0.5, c * d, c * np.sqrt(1 - d * d), 20.0, times, backend=b
        ),
        "three_level_grid (81 E' x 2001 t)": lambda b: _kernels.three_level_grid(
            0.5, 1e-4, 0.01, e_grid, grid_times, backend=b
        ),
        "spectral_amplitudes (65 levels x 4001 t)": lambda b: _kernels.spectral_amplitudes(
            evals, weights, spec_times, backend=b
        ),
        "repeated_matvec (32-dim, 1024 steps)": lambda b: _kernels.repeated_matvec(u, psi, 1024, backend=b),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _kernels.BACKEND == "numba" else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':45s} " + " ".join(f"{b:>12s}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    for name, fn in cases(rng).items():
        timings = [best_of(lambda: fn(b), args.repeats) for b in backends]
        if len(backends) == 2:
            ref = fn("numpy")
            got = fn("numba")
            assert np.allclose(ref, got, atol=1e-10), name
        line = f"{name:45s} " + " ".join(f"{t * 1e3:10.3f}ms" for t in timings)
        if len(timings) == 2:
            line += f"  {timings[0] / timings[1]:7.2f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
