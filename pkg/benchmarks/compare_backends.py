#!/usr/bin/env python3
"""Benchmark the numba JIT kernels against the pure-numpy fallbacks.

Runs each survey stage on both backends (selected via FREELAT_BACKEND)
and prints a timing table plus a consistency check of the counts.

    python benchmarks/compare_backends.py --bmax 65536 --threads 4
"""

import argparse
import os
import time


def run_backend(backend, bmax, threads):
    os.environ["FREELAT_BACKEND"] = backend
    import freelat.fastpath as fastpath
    from freelat.harness import SurveyConfig, dyadic_bounds, run_survey
    from freelat.intmath import introot

    assert fastpath.backend_name() == backend
    ns_max = introot(bmax * bmax - 1, 3) // 2
    timings = {}

    start = time.perf_counter()
    coords, ns = fastpath.enumerate_coords(2, ns_max)
    timings["enumerate_points"] = time.perf_counter() - start

    start = time.perf_counter()
    fmin, ok = fastpath.point_form_min_n2(coords, ns)
    assert bool(ok.all())
    timings["tangent_form_min"] = time.perf_counter() - start

    config = SurveyConfig.make(2, "3", "0.4", dyadic_bounds(1024, bmax))
    start = time.perf_counter()
    records = run_survey(config, threads=threads)
    timings["pair_survey"] = time.perf_counter() - start

    counts = (len(ns), records[-1].pairs_total, records[-1].pairs_in_s)
    return timings, counts


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bmax", type=int, default=1 << 16)
    parser.add_argument("--threads", type=int, default=os.cpu_count())
    parser.add_argument("--repeat", type=int, default=2,
                        help="runs per backend; the best time is reported")
    args = parser.parse_args()

    results = {}
    counts = {}
    for backend in ("numba", "numpy"):
        best = None
        for _ in range(args.repeat):
            timings, cts = run_backend(backend, args.bmax, args.threads)
            if best is None:
                best = timings
            else:
                best = {k: min(best[k], timings[k]) for k in timings}
        results[backend] = best
        counts[backend] = cts

    assert counts["numba"] == counts["numpy"], counts
    n_points, n_pairs, n_in_s = counts["numba"]
    print(f"\nB_max = {args.bmax}, {n_points} points, {n_pairs} pairs, "
          f"{n_in_s} family members (counts identical across backends)\n")
    header = f"{'stage':<20}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for stage in results["numba"]:
        a = results["numba"][stage]
        b = results["numpy"][stage]
        print(f"{stage:<20}{a:>12.3f}{b:>12.3f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
