"""Pure-Python implementations of the hot kernels.

These are the reference versions of the routines in ``_ckernels.pyx`` and are
used whenever the compiled extension is unavailable.  Vertex sets are Python
ints used as bitsets.
"""

from __future__ import annotations

import numpy as np


def rank_mod_p(a, p: int) -> tuple[int, list[int]]:
    """Row-reduce ``a`` modulo p.

    Returns the rank and the pivot columns of the echelon form, which are the
    lowest-index columns forming a basis of the column space.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r, c:] = m[r, c:] * pow(int(m[r, c]), -1, p) % p
        below = m[r + 1 :, c].copy()
        hit = np.flatnonzero(below)
        if hit.size:
            rows_idx = r + 1 + hit
            m[rows_idx, c:] = (m[rows_idx, c:] - np.outer(below[hit], m[r, c:])) % p
        pivots.append(c)
        r += 1
    return r, pivots


def _bitsets(adj) -> list[int]:
    a = np.asarray(adj, dtype=bool)
    n = a.shape[0]
    out = []
    for i in range(n):
        row = a[i].copy()
        row[i] = False
        out.append(sum(1 << int(j) for j in np.flatnonzero(row)))
    return out


def _iter_bits(s: int):
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


def _color_sort(P: int, nbr: list[int]) -> tuple[list[int], list[int]]:
    order: list[int] = []
    colors: list[int] = []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            U &= ~low
            Q &= ~low
            Q &= ~nbr[v]
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique(adj) -> list[int]:
    """A maximum clique (sorted vertex list) by colouring branch and bound."""
    a = np.asarray(adj, dtype=bool)
    n = a.shape[0]
    if n == 0:
        return []
    deg = a.sum(axis=1)
    perm = sorted(range(n), key=lambda x: (-int(deg[x]), x))
    nbr = _bitsets(a[np.ix_(perm, perm)])
    best: list[int] = []
    clique: list[int] = []

    def expand(P: int) -> None:
        nonlocal best
        order, colors = _color_sort(P, nbr)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + colors[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            NP = P & nbr[v]
            if NP == 0:
                if len(clique) > len(best):
                    best = clique.copy()
            else:
                expand(NP)
            clique.pop()
            P &= ~(1 << v)

    expand((1 << n) - 1)
    return sorted(perm[v] for v in best)


def maximal_cliques(adj, lo: int, hi: int) -> list[list[int]]:
    """All inclusion-maximal cliques with lo <= size <= hi, sorted."""
    a = np.asarray(adj, dtype=bool)
    n = a.shape[0]
    if n == 0 or lo > hi:
        return []
    nbr = _bitsets(a)
    out: list[list[int]] = []
    clique: list[int] = []

    def bk(P: int, X: int) -> None:
        if P == 0:
            if X == 0 and lo <= len(clique) <= hi:
                out.append(sorted(clique))
            return
        if len(clique) >= hi:
            return
        if len(clique) + P.bit_count() < lo:
            return
        _, colors = _color_sort(P, nbr)
        if len(clique) + colors[-1] < lo:
            return
        best_u, best_cnt = -1, -1
        for u in _iter_bits(P | X):
            c = (P & nbr[u]).bit_count()
            if c > best_cnt:
                best_u, best_cnt = u, c
        for v in _iter_bits(P & ~nbr[best_u]):
            clique.append(v)
            bk(P & nbr[v], X & nbr[v])
            clique.pop()
            P &= ~(1 << v)
            X |= 1 << v

    bk((1 << n) - 1, 0)
    return sorted(out)
