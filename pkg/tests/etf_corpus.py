"""Certificates from every construction over small primes, for property tests."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ffetf.constructions import (
    HypothesisError,
    centered_or_axial,
    centroidal,
    seidel_waldron,
    steiner_modular,
    triangular_gerzon,
    two_graph_star,
)
from ffetf.frames import verify_etf
from ffetf.gf import make_field
from ffetf.graphs import lattice, paley, petersen, triangular, triangular_complement
from ffetf.matgf import MatGF

PRIMES = (3, 5, 7, 11, 13)
NMAX = 60


def small_graphs():
    out = [petersen()]
    out += [triangular(m) for m in range(4, 11)]
    out += [triangular_complement(m) for m in range(5, 11)]
    out += [lattice(m) for m in range(3, 8)]
    out += [paley(q) for q in (5, 9, 13, 17, 25, 29, 37, 41, 49, 53)]
    return [g for g in out if g.v < NMAX]


@lru_cache(maxsize=None)
def corpus(p: int) -> tuple:
    ctx = make_field(p)
    certs = []
    for n in (2, 5, 9):
        certs.append(verify_etf(MatGF.identity(ctx, n), "identity"))
        certs.append(verify_etf(MatGF.ones(ctx, n), "ones"))
    certs.append(steiner_modular(4, p))
    for d in range(2, 11):
        if (d - 7) % p == 0 and d * (d + 1) // 2 <= NMAX:
            certs.append(triangular_gerzon(d, p))
    for g in small_graphs():
        for fn in (seidel_waldron, centered_or_axial):
            certs.extend(fn(g, p) or ())
        for fn in (two_graph_star, centroidal):
            try:
                certs.append(fn(g, p))
            except HypothesisError:
                pass
    return tuple(c for c in certs if c is not None and c.params.n <= NMAX)


def scrambled(cert, rng):
    """Permute and switch a certificate's Gram matrix at random."""
    g = cert.gram
    n = g.rows
    perm = rng.permutation(n)
    signs = rng.choice([1, -1], size=n)
    comps = g.comps[:, perm][:, :, perm] * signs[None, :, None] * signs[None, None, :] % g.ctx.p
    return MatGF(g.ctx, comps)
