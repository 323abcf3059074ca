"""Compare the compiled and pure-Python kernels on the workloads that matter.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ffetf import _pykernels
from ffetf.cliquesearch import GeometryCtx, build_compat_graph
from ffetf.constructions import triangular_gerzon

try:
    from ffetf import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads():
    g54 = build_compat_graph(GeometryCtx(5, 5, 0), 4)
    g19 = build_compat_graph(GeometryCtx(19, 5, 1), 11)
    gram = triangular_gerzon(28, 7).gram.comps[0]
    rng = np.random.default_rng(0)
    dense = rng.integers(0, 13, size=(300, 300))
    return [
        ("max_clique  p=5 s=0 a=4 (|V|=145)", "max_clique", (g54.adj,)),
        ("max_clique  p=19 s=1 a=11 (|V|=722)", "max_clique", (g19.adj,)),
        ("maximal_cliques [13,25] p=5 a=4", "maximal_cliques", (g54.adj, 13, 25)),
        ("rank_mod_p  406x406 Gram, p=7", "rank_mod_p", (gram, 7)),
        ("rank_mod_p  300x300 random, p=13", "rank_mod_p", (dense, 13)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'workload':40s} {'cython':>10s} {'python':>10s} {'speedup':>8s}")
    for label, name, call_args in workloads():
        py = best_of(lambda: getattr(_pykernels, name)(*call_args), args.repeat)
        if _ckernels is None:
            print(f"{label:40s} {'n/a':>10s} {py:10.4f} {'':>8s}")
            continue
        c_out = getattr(_ckernels, name)(*call_args)
        assert c_out == getattr(_pykernels, name)(*call_args), f"backends disagree on {label}"
        cy = best_of(lambda: getattr(_ckernels, name)(*call_args), args.repeat)
        print(f"{label:40s} {cy:10.4f} {py:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
