"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the three hot loops (period quadrature sum, period-derivative
quadrature sum, RK4 orbit integration) on identical inputs through both
implementations and prints a timing table with speedups.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import statistics
import timeit

from pseudocyl import _backend, _kernels_py
from pseudocyl.efcore import SystemKind, turning_points
from pseudocyl.period import _GL_NODES, _GL_WEIGHTS, _theta_edges, _well


def _best(fn, repeats):
    """Best-of-N loop time in microseconds."""
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    runs = [timer.timeit(loops) / loops for _ in range(repeats)]
    return min(runs) * 1e6, statistics.median(runs) * 1e6


def build_cases():
    kind = SystemKind.emden_fowler(4)
    c = 0.09
    s, e, lo, hi, ref, center, a, b, cm = _well(kind, c)
    _, b_turn = turning_points(kind, c)
    cases = []
    # typical certification happens at 8-32 panels; 128 probes the
    # deep-refinement throughput regime
    for density in (8, 128):
        edges = _theta_edges(a, b, density)

        def period_case(impl, edges=edges):
            return lambda: impl.period_gl_sum(s, e, lo, hi, ref, center,
                                              edges, _GL_NODES, _GL_WEIGHTS)

        def tprime_case(impl, edges=edges):
            return lambda: impl.tprime_gl_sum(s, e, c, cm, lo, hi, ref,
                                              center, edges, _GL_NODES,
                                              _GL_WEIGHTS)

        cases.append((f"period_gl_sum ({density} panels)", period_case))
        cases.append((f"tprime_gl_sum ({density} panels)", tprime_case))

    def rk4_case(impl):
        return lambda: impl.rk4_orbit(1.0, 3.0, b_turn, 0.0, 0.002, 2000)

    cases.append(("rk4_orbit (2000 steps)", rk4_case))
    return cases


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions per case (default: 5)")
    args = parser.parse_args()

    if not _backend.COMPILED:
        print("compiled kernels are not built in this installation; "
              "only the pure-Python timings follow\n")
        impls = [("pure-python", _kernels_py)]
    else:
        from pseudocyl import _kernels
        impls = [("compiled", _kernels), ("pure-python", _kernels_py)]

    print(f"{'kernel':<28} {'backend':<12} {'best(us)':>10} {'median(us)':>11}")
    print("-" * 64)
    speedups = []
    for label, case in build_cases():
        times = {}
        for name, impl in impls:
            best, med = _best(case(impl), args.repeats)
            times[name] = best
            print(f"{label:<28} {name:<12} {best:>10.2f} {med:>11.2f}")
        if len(times) == 2:
            ratio = times["pure-python"] / times["compiled"]
            speedups.append((label, ratio))
            print(f"{'':<28} {'speedup':<12} {ratio:>10.1f}x")
        print()
    if speedups:
        geo = 1.0
        for _, r in speedups:
            geo *= r
        geo **= 1.0 / len(speedups)
        print(f"geometric-mean speedup: {geo:.1f}x")
        print("\nThe compiled loops win where latency or a sequential "
              "recurrence dominates\n(low panel densities, RK4); numpy's "
              "vectorized transcendentals take over\non large batched "
              "panels. Results are numerically interchangeable either "
              "way.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
