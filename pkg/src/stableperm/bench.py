"""Benchmark the compiled kernel lane against the pure-Python reference.

Run as ``python3 -m stableperm.bench``.  Times the proposal loop on large
random instances and the brute-force stability scan over all permutations
of a small instance, checks that both lanes produce identical results, and
prints a comparison table.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ._kernels import _ref
from .core import Rng, generate_instance
from .oracle import _perm_pool

try:
    from ._kernels import _fast
except ImportError:  # pragma: no cover - depends on build environment
    _fast = None


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _row(name: str, pure_s: float, fast_s: float | None) -> str:
    if fast_s is None:
        return f"{name:<28} {pure_s * 1e3:>10.2f} ms {'-':>12} {'-':>8}"
    return (f"{name:<28} {pure_s * 1e3:>10.2f} ms {fast_s * 1e3:>9.2f} ms "
            f"{pure_s / fast_s:>7.1f}x")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python3 -m stableperm.bench")
    parser.add_argument("--n", type=int, default=2000,
                        help="instance size for the proposal benchmark")
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--scan-n", type=int, default=7,
                        help="instance size for the stability-scan benchmark")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    rng = Rng(args.seed)
    instances = [
        generate_instance(args.n, rng.stream(args.n, t))
        for t in range(args.trials)
    ]
    order = np.arange(args.n, dtype=np.int32)

    def run_lane(mod):
        results = []
        for prefs in instances:
            results.append(mod.run_proposals_kernel(
                prefs._lists0, prefs._rank0, order, _ref.POLICY_LIFO, 0, False
            ))
        return results

    scan_prefs = generate_instance(args.scan_n, rng.stream(args.scan_n, 0))
    pool = _perm_pool(args.scan_n)

    def scan_lane(mod):
        return mod.stable_mask_kernel(scan_prefs._rank0, pool)

    print(f"kernel lanes: pure=always available, "
          f"compiled={'yes' if _fast is not None else 'NOT BUILT'}")
    print(f"{'task':<28} {'pure':>13} {'compiled':>12} {'speedup':>8}")

    pure_res = run_lane(_ref)
    pure_t = _best_time(lambda: run_lane(_ref), args.repeats)
    fast_t = None
    if _fast is not None:
        fast_res = run_lane(_fast)
        for (s1, p1, q1, _), (s2, p2, q2, _) in zip(pure_res, fast_res):
            assert np.array_equal(s1, s2) and p1 == p2 and q1 == q2, \
                "kernel lanes disagree on the proposal loop"
        fast_t = _best_time(lambda: run_lane(_fast), args.repeats)
    print(_row(f"proposals n={args.n} x{args.trials}", pure_t, fast_t))

    pure_mask = scan_lane(_ref)
    pure_t = _best_time(lambda: scan_lane(_ref), args.repeats)
    fast_t = None
    if _fast is not None:
        fast_mask = scan_lane(_fast)
        assert np.array_equal(pure_mask, fast_mask), \
            "kernel lanes disagree on the stability scan"
        fast_t = _best_time(lambda: scan_lane(_fast), args.repeats)
    print(_row(f"stable scan n={args.scan_n} ({pool.shape[0]} perms)",
               pure_t, fast_t))
    if _fast is not None:
        print("lanes agree on all benchmarked outputs")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
