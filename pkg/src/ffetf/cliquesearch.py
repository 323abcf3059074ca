"""Clique-search refutation of (a,1)-equiangular systems in F_p^d.

Fix a seed pair psi1, psi2 with <psi_i, psi_i> = a and <psi1, psi2> = 1.  Any
(a,1)-equiangular system of n vectors can be moved by an isometry to contain
psi1 and psi2, with every other vector in

    V = { psi : <psi,psi> = a, <psi,psi1> = 1, <psi,psi2>^2 = 1 }

and forming a clique of the compatibility graph (adjacent iff <phi,psi>^2 = 1).
So a clique number below n - 2 refutes existence, and otherwise every maximal
clique M of size >= n - 2 must span a d-dimensional space together with the
seed pair.

For a = -1 the pair (psi1, -psi1) meets the same inner-product conditions.
The ``<psi,psi2>^2 = 1`` filter is then vacuous, and V is the whole slice
{<psi,psi> = a, <psi,psi1> = 1}.  This is the default seed for a = -1.  The
search remains a valid refutation: a genuine independent psi2 lies in V, so any
n-system shows up as a clique of size n - 1 whose span with psi1 is all of F_p^d.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .frames import EtfCertificate, admissible_a, candidate_primes, verify_etf
from .gf import least_nonresidue, make_field
from .matgf import MatGF

__all__ = [
    "GeometryCtx",
    "CompatGraph",
    "BlockRecord",
    "NonexistenceCertificate",
    "seed_pair",
    "search_seeds",
    "build_compat_graph",
    "max_clique",
    "maximal_cliques_in_range",
    "analyze_block",
    "nonexistence_pipeline",
    "check_certificate",
    "write_nonexistence_certificate",
    "read_nonexistence_certificate",
]


@dataclass(frozen=True)
class GeometryCtx:
    """F_p^d with Gram matrix diag(1,...,1) (s=0) or diag(1,...,1,nu) (s=1)."""

    p: int
    d: int
    s: int = 0

    def __post_init__(self) -> None:
        make_field(self.p)
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.s not in (0, 1):
            raise ValueError("discriminant flag s must be 0 or 1")

    @property
    def weights(self) -> np.ndarray:
        w = np.ones(self.d, dtype=np.int64)
        if self.s:
            w[-1] = least_nonresidue(self.p)
        return w

    def gram(self) -> MatGF:
        return MatGF.diag(make_field(self.p), [int(x) for x in self.weights])

    def form(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """<x, y> for row-stacked vectors (broadcasting over leading axes)."""
        return (x * self.weights * y).sum(axis=-1) % self.p


def _lex_chunks(p: int, d: int):
    """All of F_p^d in lexicographic order, one block per leading coordinate."""
    if d == 1:
        yield np.arange(p, dtype=np.int64)[:, None]
        return
    tail = np.indices((p,) * (d - 1), dtype=np.int64).reshape(d - 1, -1).T
    for x0 in range(p):
        yield np.hstack([np.full((tail.shape[0], 1), x0, dtype=np.int64), tail])


def seed_pair(geom: GeometryCtx, a: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lexicographically least (psi1, psi2), linearly independent, with
    <psi1,psi1> = <psi2,psi2> = a and <psi1,psi2> = 1."""
    p, d = geom.p, geom.d
    a %= p
    if d < 2:
        raise ValueError("no two linearly independent vectors in dimension 1")
    for chunk in _lex_chunks(p, d):
        firsts = chunk[geom.form(chunk, chunk) == a]
        for psi1 in firsts:
            w = psi1 * geom.weights % p
            for chunk2 in _lex_chunks(p, d):
                ok = (geom.form(chunk2, chunk2) == a) & ((chunk2 @ w) % p == 1)
                for psi2 in chunk2[ok]:
                    # psi2 = t psi1 would need t^2 = 1 and t a = 1
                    if kernels.rank_mod_p(np.vstack([psi1, psi2]), p)[0] == 2:
                        return tuple(int(x) for x in psi1), tuple(int(x) for x in psi2)
    raise ValueError(f"no seed pair with a={a} in {geom}")


def search_seeds(
    geom: GeometryCtx, a: int, antipodal: bool = True
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Seeds used by the search: (psi1, -psi1) when a = -1 and ``antipodal``,
    else :func:`seed_pair`."""
    p = geom.p
    a %= p
    if antipodal and a == p - 1:
        for chunk in _lex_chunks(p, geom.d):
            hits = chunk[geom.form(chunk, chunk) == a]
            if hits.shape[0]:
                psi1 = tuple(int(x) for x in hits[0])
                return psi1, tuple((-x) % p for x in psi1)
        raise ValueError(f"no vector of norm {a} in {geom}")
    return seed_pair(geom, a)


@dataclass(frozen=True, eq=False)
class CompatGraph:
    geom: GeometryCtx
    a: int
    psi1: tuple[int, ...]
    psi2: tuple[int, ...]
    vertices: np.ndarray  # (|V|, d), lexicographically sorted
    adj: np.ndarray  # (|V|, |V|) bool

    @property
    def size(self) -> int:
        return self.vertices.shape[0]

    @property
    def antipodal(self) -> bool:
        p = self.geom.p
        return all((x + y) % p == 0 for x, y in zip(self.psi1, self.psi2))

    @property
    def seeds(self) -> list[tuple[int, ...]]:
        """Distinct seed vectors (one when the pair is antipodal)."""
        return [self.psi1] if self.antipodal else [self.psi1, self.psi2]


def _solve_linear_slice(geom: GeometryCtx, w: np.ndarray) -> np.ndarray:
    """All x in F_p^d with w . x = 1 (w nonzero), by solving for one coordinate."""
    p, d = geom.p, geom.d
    j = int(np.flatnonzero(w)[0])
    inv = pow(int(w[j]), -1, p)
    others = [i for i in range(d) if i != j]
    if others:
        free = np.indices((p,) * (d - 1), dtype=np.int64).reshape(d - 1, -1).T
    else:
        free = np.zeros((1, 0), dtype=np.int64)
    xj = (1 - free @ w[others]) * inv % p
    out = np.empty((free.shape[0], d), dtype=np.int64)
    out[:, others] = free
    out[:, j] = xj
    return out


def _lex_sort(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def build_compat_graph(
    geom: GeometryCtx, a: int, seeds: tuple[Sequence[int], Sequence[int]] | None = None
) -> CompatGraph:
    p = geom.p
    a %= p
    psi1, psi2 = seeds if seeds is not None else search_seeds(geom, a)
    s1 = np.array(psi1, dtype=np.int64)
    s2 = np.array(psi2, dtype=np.int64)
    if geom.form(s1, s1) != a or geom.form(s2, s2) != a or geom.form(s1, s2) != 1:
        raise ValueError("seed vectors do not satisfy the seed-pair conditions")
    cand = _solve_linear_slice(geom, s1 * geom.weights % p)
    t = geom.form(cand, s2[None, :])
    keep = (geom.form(cand, cand) == a) & (t * t % p == 1)
    verts = _lex_sort(cand[keep])
    ip = (verts * geom.weights) @ verts.T % p
    adj = ip * ip % p == 1
    np.fill_diagonal(adj, False)
    return CompatGraph(
        geom, a, tuple(int(x) for x in s1), tuple(int(x) for x in s2), verts, adj
    )


def max_clique(g: CompatGraph) -> tuple[int, list[int]]:
    """Clique number and a witness clique (sorted vertex indices)."""
    if g.size == 0:
        return 0, []
    w = kernels.max_clique(g.adj)
    return len(w), w


def maximal_cliques_in_range(g: CompatGraph, lo: int, hi: int) -> list[list[int]]:
    """All inclusion-maximal cliques with lo <= size <= hi, sorted."""
    if lo > hi:
        raise ValueError("need lo <= hi")
    return kernels.maximal_cliques(g.adj, max(lo, 1), hi)


def _system(g: CompatGraph, idx: Sequence[int]) -> np.ndarray:
    return np.vstack([np.array(g.seeds), g.vertices[list(idx)]])


def _system_gram(g: CompatGraph, vecs: np.ndarray) -> MatGF:
    ctx = make_field(g.geom.p)
    x = MatGF.from_ints(ctx, vecs.T)
    return x.T @ g.geom.gram() @ x


# -- per-block analysis ---------------------------------------------------------------------


@dataclass
class BlockRecord:
    p: int
    s: int
    a: int
    psi1: list[int]
    psi2: list[int]
    V_size: int
    omega: int
    omega_witness: list[int]
    cliques_examined: int = 0
    clique_range: list[int] = field(default_factory=list)
    rank_multiset: dict[int, int] = field(default_factory=dict)
    cliques: list[list[int]] = field(default_factory=list)
    refuted: bool = True
    witness: list[list[int]] | None = None
    note: str = ""


def _find_witness(g: CompatGraph, clique: list[int], n: int, d: int) -> tuple[list[int], EtfCertificate] | None:
    for k in combinations(clique, n - len(g.seeds)):
        vecs = _system(g, k)
        cert = verify_etf(_system_gram(g, vecs), "clique-search")
        if cert is not None and cert.params.d == d and cert.params.b == 1:
            return list(k), cert
    return None


def analyze_block(d: int, n: int, p: int, s: int, a: int) -> BlockRecord:
    geom = GeometryCtx(p, d, s)
    try:
        seeds = search_seeds(geom, a)
    except ValueError:
        return BlockRecord(p, s, a, [], [], 0, 0, [], note="no seed pair")
    g = build_compat_graph(geom, a, seeds)
    omega, wit = max_clique(g)
    rec = BlockRecord(p, s, a, list(seeds[0]), list(seeds[1]), g.size, omega, wit)
    if omega < n - 2:
        return rec
    cliques = maximal_cliques_in_range(g, n - 2, omega)
    ranks = Counter()
    rec.clique_range = [n - 2, omega]
    rec.cliques = cliques
    rec.cliques_examined = len(cliques)
    for m in cliques:
        r = kernels.rank_mod_p(_system(g, m), p)[0]
        ranks[r] += 1
        if r == d and rec.refuted:
            rec.refuted = False
            found = _find_witness(g, m, n, d)
            if found is not None:
                k, _ = found
                rec.witness = _system(g, k).tolist()
    rec.rank_multiset = dict(sorted(ranks.items()))
    if not rec.refuted and rec.witness is None:
        rec.note = "full-rank clique without a tight subsystem"
    return rec


@dataclass
class NonexistenceCertificate:
    d: int
    n: int
    primes: list[int]
    blocks: list[BlockRecord]
    verdict: str  # "nonexistent", "exists" or "undecided"

    @property
    def witness(self) -> BlockRecord | None:
        for b in self.blocks:
            if b.witness is not None:
                return b
        return None

    def to_json(self) -> dict:
        return {
            "kind": "nonexistence",
            "d": self.d,
            "n": self.n,
            "primes": self.primes,
            "verdict": self.verdict,
            "blocks": [asdict(b) for b in self.blocks],
        }

    @classmethod
    def from_json(cls, rec: dict) -> NonexistenceCertificate:
        blocks = []
        for b in rec["blocks"]:
            b = dict(b)
            b["rank_multiset"] = {int(k): v for k, v in b.get("rank_multiset", {}).items()}
            blocks.append(BlockRecord(**b))
        return cls(rec["d"], rec["n"], list(rec["primes"]), blocks, rec["verdict"])


def _job(args: tuple[int, int, int, int, int]) -> BlockRecord:
    return analyze_block(*args)


def nonexistence_pipeline(
    d: int,
    n: int,
    primes: Sequence[int] | None = None,
    real_exists: bool = False,
    workers: int = 1,
) -> NonexistenceCertificate:
    """Search every prime, geometry type and admissible a for an (a,1)-ETF
    of n vectors in dimension d."""
    if not (n > d >= 2):
        raise ValueError(f"need n > d >= 2, got d={d}, n={n}")
    if primes is None:
        cp = candidate_primes(d, n, real_exists)
        if cp == "unbounded":
            raise ValueError("a real ETF exists; supply the primes to search explicitly")
        primes = cp
    primes = sorted(int(p) for p in primes)
    jobs = [(d, n, p, s, a) for p in primes for s in (0, 1) for a in admissible_a(d, n, p)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(_job, jobs))
    else:
        blocks = [_job(j) for j in jobs]
    if any(b.witness is not None for b in blocks):
        verdict = "exists"
    elif all(b.refuted for b in blocks):
        verdict = "nonexistent"
    else:
        verdict = "undecided"
    return NonexistenceCertificate(d, n, primes, blocks, verdict)


# -- independent re-check ---------------------------------------------------------------------


def check_certificate(cert: NonexistenceCertificate, recheck_omega: bool = True) -> list[str]:
    """Re-verify each block claim from scratch; returns a list of problems.

    Clique numbers are recomputed with the pure-Python kernels, independently
    of the backend that produced the certificate.
    """
    from . import _pykernels

    problems = []
    d, n = cert.d, cert.n
    for b in cert.blocks:
        tag = f"(p={b.p},s={b.s},a={b.a})"
        if b.a not in admissible_a(d, n, b.p):
            problems.append(f"{tag}: a is not admissible")
        if not b.psi1:
            continue
        geom = GeometryCtx(b.p, d, b.s)
        g = build_compat_graph(geom, b.a, (b.psi1, b.psi2))
        if g.size != b.V_size:
            problems.append(f"{tag}: |V| = {g.size}, recorded {b.V_size}")
            continue
        w = b.omega_witness
        if len(w) != b.omega or not all(g.adj[i, j] for i, j in combinations(w, 2)):
            problems.append(f"{tag}: omega witness is not a clique of size {b.omega}")
        if recheck_omega and len(_pykernels.max_clique(g.adj)) != b.omega:
            problems.append(f"{tag}: clique number mismatch")
        if b.omega >= n - 2:
            ranks = Counter()
            for m in b.cliques:
                if not all(g.adj[i, j] for i, j in combinations(m, 2)):
                    problems.append(f"{tag}: recorded clique {m} is not a clique")
                common = np.all(g.adj[m], axis=0)
                common[m] = False
                if common.any():
                    problems.append(f"{tag}: recorded clique {m} is not maximal")
                ranks[kernels.rank_mod_p(_system(g, m), b.p)[0]] += 1
            if dict(sorted(ranks.items())) != b.rank_multiset:
                problems.append(f"{tag}: rank multiset mismatch")
            expected = _pykernels.maximal_cliques(g.adj, n - 2, b.omega)
            if expected != b.cliques:
                problems.append(f"{tag}: maximal clique list is incomplete")
            if b.refuted and d in ranks:
                problems.append(f"{tag}: marked refuted although a rank-{d} clique exists")
        elif not b.refuted:
            problems.append(f"{tag}: omega < n-2 but not marked refuted")
    return problems


def write_nonexistence_certificate(cert: NonexistenceCertificate, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cert.to_json(), indent=1) + "\n")


def read_nonexistence_certificate(path: str | Path) -> NonexistenceCertificate:
    rec = json.loads(Path(path).read_text())
    if rec.get("kind") != "nonexistence":
        raise ValueError(f"{path} is not a nonexistence certificate")
    return NonexistenceCertificate.from_json(rec)
