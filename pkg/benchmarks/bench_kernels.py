#!/usr/bin/env python3
"""Benchmark the compiled LU kernel against the numpy fallback.

The two backends implement the same IEEE operation sequence, so besides
timing them this script asserts their outputs are bit-identical on every
batch.  Usage: python benchmarks/bench_kernels.py [--samples 200000]
"""

import argparse
import time

import numpy as np

from hyperlines import _kernels_py
from hyperlines.backend import HAVE_COMPILED
from hyperlines.exact import ProblemSpec
from hyperlines.matrices import batch_build_real
from hyperlines.rng import RngStream, sample_complex_batch_parts, sample_real_batch


def time_backend(fn, args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        copies = [a.copy() for a in args]
        t0 = time.perf_counter()
        out = fn(*copies)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200_000)
    opts = ap.parse_args()

    if not HAVE_COMPILED:
        print("compiled backend not built; nothing to compare")
        return 1
    from hyperlines import _kernels

    print(f"{'case':<14} {'compiled':>10} {'python':>10} {'speedup':>8}   bit-identical")
    for n in (3, 6, 10):
        spec = ProblemSpec(n)
        count = max(1000, opts.samples // (n * n))
        vecs = sample_real_batch(spec, RngStream(1, 0), count)
        mats = batch_build_real(spec, vecs)
        tc, out_c = time_backend(_kernels.lu_logabsdet_real_batch, [mats])
        tp, out_p = time_backend(_kernels_py.lu_logabsdet_real_batch, [mats])
        same = all(np.array_equal(a, b) for a, b in zip(out_c, out_p))
        rate = count / tc
        print(
            f"real  n={n:<6} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.1f}x   {same}"
            f"   ({rate:,.0f} dets/s compiled)"
        )

        re, im = sample_complex_batch_parts(spec, RngStream(2, 0), count)
        mre, mim = batch_build_real(spec, re), batch_build_real(spec, im)
        tc, out_c = time_backend(_kernels.lu_logabsdetsq_complex_batch, [mre, mim])
        tp, out_p = time_backend(_kernels_py.lu_logabsdetsq_complex_batch, [mre, mim])
        same = all(np.array_equal(a, b) for a, b in zip(out_c, out_p))
        print(f"cmplx n={n:<6} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.1f}x   {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
