"""Dispatch for the hot kernels.

The compiled extension is used when it imports; setting ``FFETF_PURE_PYTHON=1``
forces the pure-Python versions.  Both expose identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("FFETF_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

# p must keep (p-1)^2 inside int64 for the compiled row reduction
_C_RANK_LIMIT = 1 << 31


def rank_mod_p(a, p: int) -> tuple[int, list[int]]:
    if p >= _C_RANK_LIMIT:
        raise ValueError("rank kernels require p < 2**31")
    return _impl.rank_mod_p(a, p)


def max_clique(adj) -> list[int]:
    return _impl.max_clique(adj)


def maximal_cliques(adj, lo: int, hi: int) -> list[list[int]]:
    return _impl.maximal_cliques(adj, lo, hi)
