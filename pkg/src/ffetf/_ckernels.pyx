# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: rank over F_p and bitset clique search.

Same contracts as ``ffetf._pykernels``; see that module for documentation.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rank_mod_p(a, long long p):
    cdef cnp.ndarray[int64_t, ndim=2] m = np.array(a, dtype=np.int64, order="C", copy=True) % p
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f
    cdef int64_t *pr
    cdef int64_t *ri
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                f = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = f
        inv = _inv_mod(m[r, c], p)
        pr = &m[r, 0]
        for j in range(c, cols):
            pr[j] = pr[j] * inv % p
        for i in range(r + 1, rows):
            ri = &m[i, 0]
            f = ri[c]
            if f == 0:
                continue
            for j in range(c, cols):
                ri[j] = (ri[j] - f * pr[j]) % p
                if ri[j] < 0:
                    ri[j] += p
        pivots.append(c)
        r += 1
    return r, pivots


# ---------------------------------------------------------------------------
# bitset helpers

cdef inline int _popcount(uint64_t *s, int w) nogil:
    cdef int k, total = 0
    for k in range(w):
        total += __builtin_popcountll(s[k])
    return total

cdef inline bint _empty(uint64_t *s, int w) nogil:
    cdef int k
    for k in range(w):
        if s[k]:
            return False
    return True

cdef inline int _lowest(uint64_t *s, int w) nogil:
    cdef int k
    for k in range(w):
        if s[k]:
            return k * 64 + __builtin_ctzll(s[k])
    return -1


cdef struct Graph:
    int n
    int w
    uint64_t *adj


cdef Graph _make_graph(cnp.ndarray[cnp.uint8_t, ndim=2] adj):
    cdef Graph g
    cdef int i, j
    g.n = adj.shape[0]
    g.w = (g.n + 63) // 64 if g.n > 0 else 1
    g.adj = <uint64_t *> malloc(sizeof(uint64_t) * g.n * g.w + 8)
    memset(g.adj, 0, sizeof(uint64_t) * g.n * g.w)
    for i in range(g.n):
        for j in range(g.n):
            if i != j and adj[i, j]:
                g.adj[i * g.w + j // 64] |= (<uint64_t> 1) << (j % 64)
    return g


cdef int _color_sort(Graph *g, uint64_t *P, int *order, int *colors):
    """Greedy sequential colouring of P; fills order/colors, returns count."""
    cdef int w = g.w, k, v, cnt = 0, color = 0
    cdef uint64_t *U = <uint64_t *> malloc(sizeof(uint64_t) * w)
    cdef uint64_t *Q = <uint64_t *> malloc(sizeof(uint64_t) * w)
    cdef uint64_t *nv
    memcpy(U, P, sizeof(uint64_t) * w)
    while not _empty(U, w):
        color += 1
        memcpy(Q, U, sizeof(uint64_t) * w)
        while True:
            v = _lowest(Q, w)
            if v < 0:
                break
            U[v // 64] &= ~((<uint64_t> 1) << (v % 64))
            Q[v // 64] &= ~((<uint64_t> 1) << (v % 64))
            nv = g.adj + v * w
            for k in range(w):
                Q[k] &= ~nv[k]
            order[cnt] = v
            colors[cnt] = color
            cnt += 1
    free(U)
    free(Q)
    return cnt


cdef struct MCState:
    int best
    int *best_clique
    int *clique
    int size


cdef void _expand(Graph *g, MCState *st, uint64_t *P):
    cdef int w = g.w, cnt, i, v, k
    cdef int *order
    cdef int *colors
    cdef uint64_t *NP
    cdef uint64_t *nv
    cnt = _popcount(P, w)
    order = <int *> malloc(sizeof(int) * (cnt + 1))
    colors = <int *> malloc(sizeof(int) * (cnt + 1))
    NP = <uint64_t *> malloc(sizeof(uint64_t) * w)
    cnt = _color_sort(g, P, order, colors)
    i = cnt - 1
    while i >= 0:
        if st.size + colors[i] <= st.best:
            break
        v = order[i]
        nv = g.adj + v * w
        for k in range(w):
            NP[k] = P[k] & nv[k]
        st.clique[st.size] = v
        st.size += 1
        if _empty(NP, w):
            if st.size > st.best:
                st.best = st.size
                memcpy(st.best_clique, st.clique, sizeof(int) * st.size)
        else:
            _expand(g, st, NP)
        st.size -= 1
        P[v // 64] &= ~((<uint64_t> 1) << (v % 64))
        i -= 1
    free(order)
    free(colors)
    free(NP)


def max_clique(adj):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] a = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef int n = a.shape[0], i
    if n == 0:
        return []
    deg = a.sum(axis=1)
    perm = sorted(range(n), key=lambda x: (-int(deg[x]), x))
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] b = np.ascontiguousarray(a[np.ix_(perm, perm)])
    cdef Graph g = _make_graph(b)
    cdef MCState st
    st.best = 0
    st.size = 0
    st.best_clique = <int *> malloc(sizeof(int) * n)
    st.clique = <int *> malloc(sizeof(int) * n)
    cdef uint64_t *P = <uint64_t *> malloc(sizeof(uint64_t) * g.w)
    memset(P, 0, sizeof(uint64_t) * g.w)
    for i in range(n):
        P[i // 64] |= (<uint64_t> 1) << (i % 64)
    _expand(&g, &st, P)
    result = sorted(perm[st.best_clique[i]] for i in range(st.best))
    free(P)
    free(st.best_clique)
    free(st.clique)
    free(g.adj)
    return result


# ---------------------------------------------------------------------------
# Bron-Kerbosch with pivoting and size window

cdef struct BKState:
    int lo
    int hi
    int size
    int *clique


cdef int _colour_bound(Graph *g, uint64_t *P, int *scratch_o, int *scratch_c):
    cdef int cnt
    if _empty(P, g.w):
        return 0
    cnt = _color_sort(g, P, scratch_o, scratch_c)
    return scratch_c[cnt - 1]


cdef void _bk(Graph *g, BKState *st, uint64_t *P, uint64_t *X, list out, int *so, int *sc):
    cdef int w = g.w, k, u, v, best_u, best_cnt, c, pc
    cdef uint64_t *nu
    cdef uint64_t *cand
    cdef uint64_t *NP
    cdef uint64_t *NX
    cdef uint64_t bits
    if _empty(P, w):
        if _empty(X, w) and st.size >= st.lo and st.size <= st.hi:
            out.append([st.clique[k] for k in range(st.size)])
        return
    if st.size >= st.hi:
        return
    pc = _popcount(P, w)
    if st.size + pc < st.lo:
        return
    if st.size + _colour_bound(g, P, so, sc) < st.lo:
        return
    # pivot: vertex of P u X with most neighbours in P, lowest index on ties
    best_u = -1
    best_cnt = -1
    for k in range(w):
        bits = P[k] | X[k]
        while bits:
            u = k * 64 + __builtin_ctzll(bits)
            bits &= bits - 1
            nu = g.adj + u * w
            c = 0
            for v in range(w):
                c += __builtin_popcountll(P[v] & nu[v])
            if c > best_cnt:
                best_cnt = c
                best_u = u
    nu = g.adj + best_u * w
    cand = <uint64_t *> malloc(sizeof(uint64_t) * w)
    NP = <uint64_t *> malloc(sizeof(uint64_t) * w)
    NX = <uint64_t *> malloc(sizeof(uint64_t) * w)
    for k in range(w):
        cand[k] = P[k] & ~nu[k]
    while True:
        v = _lowest(cand, w)
        if v < 0:
            break
        cand[v // 64] &= ~((<uint64_t> 1) << (v % 64))
        nu = g.adj + v * w
        for k in range(w):
            NP[k] = P[k] & nu[k]
            NX[k] = X[k] & nu[k]
        st.clique[st.size] = v
        st.size += 1
        _bk(g, st, NP, NX, out, so, sc)
        st.size -= 1
        P[v // 64] &= ~((<uint64_t> 1) << (v % 64))
        X[v // 64] |= (<uint64_t> 1) << (v % 64)
    free(cand)
    free(NP)
    free(NX)


def maximal_cliques(adj, int lo, int hi):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] a = np.ascontiguousarray(adj, dtype=np.uint8)
    cdef int n = a.shape[0], i
    if n == 0 or lo > hi:
        return []
    cdef Graph g = _make_graph(a)
    cdef BKState st
    st.lo = lo
    st.hi = hi
    st.size = 0
    st.clique = <int *> malloc(sizeof(int) * (n + 1))
    cdef uint64_t *P = <uint64_t *> malloc(sizeof(uint64_t) * g.w)
    cdef uint64_t *X = <uint64_t *> malloc(sizeof(uint64_t) * g.w)
    cdef int *so = <int *> malloc(sizeof(int) * (n + 1))
    cdef int *sc = <int *> malloc(sizeof(int) * (n + 1))
    memset(P, 0, sizeof(uint64_t) * g.w)
    memset(X, 0, sizeof(uint64_t) * g.w)
    for i in range(n):
        P[i // 64] |= (<uint64_t> 1) << (i % 64)
    out = []
    _bk(&g, &st, P, X, out, so, sc)
    free(P)
    free(X)
    free(so)
    free(sc)
    free(st.clique)
    free(g.adj)
    return sorted(sorted(c) for c in out)
