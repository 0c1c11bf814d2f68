"""Compare the compiled and pure-Python iteration kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Runs a full-size diagram block (800 parameters, 500 transient, 120
kept) and a batch of orbit jets on both backends, checks they agree, and
prints the best wall time of each.
"""

import argparse
import timeit

import numpy as np

from polybif import _kernels_py

try:
    from polybif import _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def diagram_block(mod, rows=800, transient=500, keep=120):
    c = np.linspace(0.9, 1.75, rows)
    coeffs = np.ascontiguousarray(np.stack([2.658 - c, np.zeros_like(c), -c], axis=1))
    x0 = np.zeros(rows)
    out = np.empty((rows, keep))
    mod.iterate_block(coeffs, x0, transient, keep, 1e6, out)
    return out


def jets(mod, count=2000, n=6):
    a = np.array([1.0, 0.0, -1.9])
    da = np.array([0.0, 0.0, -1.0])
    cycle = np.empty(n)
    acc = 0.0
    for x in np.linspace(-1, 1, count):
        acc += mod.orbit_jet(a, da, float(x), n, cycle)[1]
    return acc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    if _kernels_c is None:
        print("compiled extension not available; timing the fallback only")
    else:
        same = np.array_equal(diagram_block(_kernels_py), diagram_block(_kernels_c), equal_nan=True)
        print(f"diagram blocks identical: {same}")
        print(f"jet sums: {jets(_kernels_py):.17g} vs {jets(_kernels_c):.17g}")
    print(f"{'kernel':<14}{'backend':<10}{'best [s]':>12}")
    timings = {}
    for label, fn in (("diagram", diagram_block), ("orbit_jet", jets)):
        for name, mod in backends:
            t = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            timings[label, name] = t
            print(f"{label:<14}{name:<10}{t:>12.4f}")
    if _kernels_c is not None:
        for label in ("diagram", "orbit_jet"):
            print(f"speedup {label}: {timings[label, 'python'] / timings[label, 'cython']:.1f}x")


if __name__ == "__main__":
    main()
