"""Timing comparison of the compiled and reference state-vector kernels.

Runs the three hot operations on random states of increasing size and
prints per-call times for both backends. Usage:

    python3 benchmarks/bench_kernels.py [--sizes 4,6,8,10,12] [--repeats 7]
"""

from __future__ import annotations

import argparse
from time import perf_counter

import numpy as np

from wfsim.kernels import reference

try:
    from wfsim.kernels import _statevec as compiled
except ImportError:
    compiled = None


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return raw / np.linalg.norm(raw)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def best_of(fn, inner: int, repeats: int) -> float:
    """Best per-call time over several timed batches of ``inner`` calls."""
    best = float("inf")
    for _ in range(repeats):
        t0 = perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (perf_counter() - t0) / inner)
    return best


def fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.2f} us"
    return f"{seconds * 1e3:8.2f} ms"


def workloads(backend, amps: np.ndarray, n: int, u1: np.ndarray, u2: np.ndarray):
    mid = n // 2
    return (
        ("apply_matrix 1q", lambda: backend.apply_matrix(amps, n, u1, [mid])),
        ("apply_matrix 2q", lambda: backend.apply_matrix(amps, n, u2, [0, n - 1])),
        ("z_weights", lambda: backend.z_weights(amps, n, mid)),
        ("project_z", lambda: backend.project_z(amps, n, mid, 0)),
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,6,8,10,12", help="qubit counts, comma-separated")
    parser.add_argument("--inner", type=int, default=100, help="calls per timed batch")
    parser.add_argument("--repeats", type=int, default=7, help="timed batches per cell")
    args = parser.parse_args()
    sizes = [int(tok) for tok in args.sizes.split(",")]

    if compiled is None:
        print("compiled extension not built; timing the reference backend only")
    rng = np.random.default_rng(7)
    header = f"{'kernel':<16} {'n':>3} {'compiled':>12} {'reference':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        amps = random_state(rng, n)
        u1 = random_unitary(rng, 2)
        u2 = random_unitary(rng, 4)
        ref_work = workloads(reference, amps, n, u1, u2)
        com_work = workloads(compiled, amps, n, u1, u2) if compiled else None
        for i, (name, ref_fn) in enumerate(ref_work):
            t_ref = best_of(ref_fn, args.inner, args.repeats)
            if com_work is None:
                print(f"{name:<16} {n:>3} {'-':>12} {fmt(t_ref):>12} {'-':>8}")
                continue
            t_com = best_of(com_work[i][1], args.inner, args.repeats)
            print(
                f"{name:<16} {n:>3} {fmt(t_com):>12} {fmt(t_ref):>12} "
                f"{t_ref / t_com:>7.1f}x"
            )


if __name__ == "__main__":
    main()
