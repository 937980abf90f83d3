#!/usr/bin/env python3
"""Benchmark: compiled factorization-search kernel vs the pure-Python one.

The workload is the oracle-equivalence sweep (all gcd-1 residue shapes with
sum |b| <= 2 * max degree, every partition of q - 2).  Class generation and
candidate deduplication are shared and excluded from the timing; only the
kernel search is measured.

    python3 benchmarks/bench_factorsearch.py           # degrees up to 6
    python3 benchmarks/bench_factorsearch.py --quick   # degrees up to 5
"""

import argparse
import math
import time

from coneangles import _factorsearch_py
from coneangles.hurwitz import (
    _canonical_of_type,
    _sigma_inf_candidates,
    _single_cycle_class,
)

try:
    from coneangles import _factorsearch

    COMPILED = _factorsearch
except ImportError:
    COMPILED = None


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def build_workload(max_degree):
    """Pre-resolved search problems: (d, sigma0, candidates, extras, classes)."""
    work = []
    for d in range(1, max_degree + 1):
        for zeros in partitions(d):
            for poles in partitions(d):
                if math.gcd(*(zeros + poles)) != 1:
                    continue
                q = len(zeros) + len(poles)
                sigma0 = _canonical_of_type(d, zeros)
                candidates = _sigma_inf_candidates(d, zeros, poles)
                for parts in partitions(q - 2):
                    extras = tuple(sorted((p + 1 for p in parts), reverse=True))
                    if extras and max(extras) > d:
                        continue  # empty class; nothing to search
                    classes = [_single_cycle_class(d, k) for k in extras]
                    work.append((d, sigma0, candidates, extras, classes))
    return work


def run(kernel, work):
    start = time.perf_counter()
    found = 0
    for d, sigma0, candidates, extras, classes in work:
        if kernel.search(d, sigma0, candidates, extras, classes) is not None:
            found += 1
    return time.perf_counter() - start, found


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="degrees up to 5 only")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    max_degree = 5 if args.quick else 6
    work = build_workload(max_degree)
    print(f"workload: {len(work)} searches, degrees 1..{max_degree}")

    results = {}
    backends = [("python", _factorsearch_py)]
    if COMPILED is not None:
        backends.append(("compiled", COMPILED))
    else:
        print("compiled kernel not built; benchmarking the pure kernel only")

    for name, kernel in backends:
        best = math.inf
        found = None
        for _ in range(args.repeat):
            elapsed, found = run(kernel, work)
            best = min(best, elapsed)
        results[name] = best
        print(f"{name:>9}: {best:8.3f}s  ({found} realizable)")

    if "compiled" in results:
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    main()
