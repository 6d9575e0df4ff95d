"""Compiled vs pure-Python kernels on the three hot loops.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs against both backends with identical inputs; outputs
are compared before timing is reported.
"""

import argparse
import time

import numpy as np

from gca import _pykernels
from gca.groups import preset
from gca.kernels import path_words, torus_scan
from gca.language import torus_csp
from gca.oned import sft_of
from gca.shifts import GroupShiftPresentation, Pattern

try:
    from gca import _kernels as compiled
except ImportError:
    compiled = None


def ledrappier():
    z2 = preset("Z2")
    cells = ((0, 0), (0, 1), (1, 0))
    bad = [v for v in np.ndindex(2, 2, 2) if sum(v) % 2]
    return GroupShiftPresentation(z2, 2, forbidden=[Pattern(z2, cells, v) for v in bad], name="LEDRAPPIER")


def workload_scan(impl):
    x = ledrappier()
    rng = np.random.default_rng(7)
    arrs = rng.integers(0, 2, size=(400, 12, 12))
    return [torus_scan(a, x.forbidden, impl=impl) for a in arrs]


def workload_csp(impl):
    x = ledrappier()
    csp, _ = torus_csp(x, (14, 7))
    return csp.solve(mode="all", max_nodes=5_000_000, impl=impl)


def workload_paths(impl):
    z3 = preset("Z3")
    x = GroupShiftPresentation.full(z3, 1)
    g = sft_of(x).graph
    return path_words(g.ptr, g.sym, g.tgt, np.arange(g.nstates), 11, impl=impl)


WORKLOADS = {"torus_scan": workload_scan, "csp_search": workload_csp, "path_words": workload_paths}


def _same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def best_of(fn, impl, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(impl)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<12} {'python s':>10} {'cython s':>10} {'speedup':>8}  agree")
    for name, fn in WORKLOADS.items():
        tp, op = best_of(fn, _pykernels, args.repeat)
        if compiled is None:
            print(f"{name:<12} {tp:>10.4f} {'-':>10} {'-':>8}  -")
            continue
        tc, oc = best_of(fn, compiled, args.repeat)
        print(f"{name:<12} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x  {_same(op, oc)}")


if __name__ == "__main__":
    main()
