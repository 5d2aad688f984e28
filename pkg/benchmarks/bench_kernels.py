"""Timing of the lattice-point counting kernels: numba vs numpy.

    python benchmarks/bench_kernels.py [--bound 8] [--repeat 3]

Counts E8 vectors by norm and the A2 shadow coset; both backends must agree.
"""
import argparse
import time
from fractions import Fraction

from jaclat import _kernels as K
from jaclat.qseries import e8_model_lattice


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        ("E8 counts", e8_model_lattice().gram, [0] * 8, args.bound),
        ("A2 shadow coset", ((2, 1), (1, 2)), [Fraction(1, 3)] * 2, 40 * args.bound),
    ]
    backends = ["numba", "numpy"] if K.HAVE_NUMBA else ["numpy"]
    if K.HAVE_NUMBA:
        K.count_norms(((2,),), [0], 1, backend="numba")  # compile once
    for label, gram, center, bound in cases:
        results = {}
        for b in backends:
            t, hist = timed(lambda: K.count_norms(gram, center, bound, backend=b), args.repeat)
            results[b] = hist
            print(f"{label:18s} bound {bound:4d}  {b:6s} {t * 1000:10.1f} ms  "
                  f"{sum(hist.values())} points")
        first = next(iter(results.values()))
        assert all(r == first for r in results.values()), "backends disagree"


if __name__ == "__main__":
    main()
