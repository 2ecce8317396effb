#!/usr/bin/env python3
"""Timing comparison: compiled Cython kernels vs the pure-Python twins.

Both backends are imported side by side (no env juggling), fed identical
seeded inputs, and timed with best-of-N wall clock. Run from a checkout:

    python benchmarks/bench_kernels.py [--sizes 2,4,8,16] [--repeats 7]
"""

import argparse
import time

import numpy as np


def _load_backends():
    import qds._kernels_py as pyk

    try:
        import qds._kernels as ck
    except ImportError:
        ck = None
    return ck, pyk


def _best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2,4,8,16")
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    ck, pyk = _load_backends()
    if ck is None:
        print("compiled backend unavailable; timing pure Python only")
    rng = np.random.default_rng(args.seed)

    rows = []
    for n in sizes:
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        herm = (g + g.conj().T) / 2.0
        contraction = g / (np.abs(np.linalg.eigvals(g)).max() * 1.2)

        for label, fn_name, arg in (
            ("jacobi_eigh", "jacobi_eigh", herm),
            ("expm_pade", "expm_pade", contraction),
        ):
            t_py = _best_of(getattr(pyk, fn_name), (arg,), args.repeats)
            if ck is not None:
                t_c = _best_of(getattr(ck, fn_name), (arg,), args.repeats)
                rows.append((label, n, t_c, t_py, t_py / t_c))
            else:
                rows.append((label, n, None, t_py, None))

    print(f"{'kernel':<12} {'n':>3} {'compiled':>12} {'python':>12} {'speedup':>8}")
    for label, n, t_c, t_py, ratio in rows:
        cc = f"{t_c * 1e6:9.1f} us" if t_c is not None else "         --"
        rr = f"{ratio:7.1f}x" if ratio is not None else "      --"
        print(f"{label:<12} {n:>3} {cc:>12} {t_py * 1e6:9.1f} us {rr:>8}")

    # cross-check the two backends on the same inputs while we are here
    if ck is not None:
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        herm = (g + g.conj().T) / 2.0
        wc, vc = ck.jacobi_eigh(herm)
        wp, vp = pyk.jacobi_eigh(herm)
        drift = float(np.abs(np.sort(wc) - np.sort(wp)).max())
        ec = ck.expm_pade(g / 4.0)
        ep = pyk.expm_pade(g / 4.0)
        drift = max(drift, float(np.abs(ec - ep).max()))
        print(f"\nbackend agreement on shared inputs: max deviation {drift:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
