import itertools
import subprocess
import sys

import numpy as np
import pytest

from ffetf import _pykernels, kernels

try:
    from ffetf import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_graph(rng, n, density):
    u = np.triu(rng.random((n, n)) < density, 1)
    return u | u.T


def brute_max_clique_size(adj):
    n = adj.shape[0]
    best = 0
    for r in range(1, n + 1):
        found = any(all(adj[i, j] for i, j in itertools.combinations(c, 2)) for c in itertools.combinations(range(n), r))
        if not found:
            break
        best = r
    return best


def brute_maximal_cliques(adj, lo, hi):
    n = adj.shape[0]
    out = []
    for r in range(max(lo, 1), min(hi, n) + 1):
        for c in itertools.combinations(range(n), r):
            if not all(adj[i, j] for i, j in itertools.combinations(c, 2)):
                continue
            common = np.all(adj[list(c)], axis=0)
            common[list(c)] = False
            if not common.any():
                out.append(list(c))
    return sorted(out)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch():
    code = "from ffetf import kernels; print(kernels.BACKEND)"
    env = {"FFETF_PURE_PYTHON": "1", "PATH": ""}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("seed", range(6))
def test_python_kernels_against_bruteforce(seed):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        n = int(rng.integers(1, 11))
        adj = random_graph(rng, n, rng.uniform(0.2, 0.9))
        w = _pykernels.max_clique(adj)
        assert len(w) == brute_max_clique_size(adj)
        assert all(adj[i, j] for i, j in itertools.combinations(w, 2))
        lo = int(rng.integers(1, 4))
        assert _pykernels.maximal_cliques(adj, lo, n) == brute_maximal_cliques(adj, lo, n)


@needs_c
@pytest.mark.parametrize("seed", range(8))
def test_backends_agree_on_graphs(seed):
    rng = np.random.default_rng(100 + seed)
    for _ in range(8):
        n = int(rng.integers(0, 70))
        adj = random_graph(rng, n, rng.uniform(0.1, 0.9))
        assert _ckernels.max_clique(adj) == _pykernels.max_clique(adj)
        w = len(_pykernels.max_clique(adj))
        lo = max(1, w - 2)
        assert _ckernels.maximal_cliques(adj, lo, w) == _pykernels.maximal_cliques(adj, lo, w)


@needs_c
@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 65537, 2**31 - 1])
def test_backends_agree_on_rank(p):
    rng = np.random.default_rng(p % 1000)
    for _ in range(30):
        r, c = (int(x) for x in rng.integers(1, 20, size=2))
        a = rng.integers(0, min(p, 2**31 - 1), size=(r, c))
        if rng.random() < 0.3:
            a[:, 0] = 0
        for view in (a, a.T, a[::2], np.asfortranarray(a)):
            assert _ckernels.rank_mod_p(view, p) == _pykernels.rank_mod_p(view, p)


def test_rank_pivots_are_leading_columns():
    a = np.array([[0, 1, 1], [0, 2, 2], [0, 0, 1]])
    assert kernels.rank_mod_p(a, 5) == (2, [1, 2])
    with pytest.raises(ValueError):
        kernels.rank_mod_p(a, 2**31 + 11)


def test_empty_inputs():
    empty = np.zeros((0, 0), dtype=bool)
    assert kernels.max_clique(empty) == []
    assert kernels.maximal_cliques(empty, 1, 3) == []
    edgeless = np.zeros((4, 4), dtype=bool)
    assert len(kernels.max_clique(edgeless)) == 1
    assert kernels.maximal_cliques(edgeless, 2, 4) == []
