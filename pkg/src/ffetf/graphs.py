"""Graphs, Seidel matrices, SRG parameter algebra and SRG generators."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from .gf import is_square, make_field
from .matgf import IntMat

__all__ = [
    "Graph",
    "SrgParams",
    "SrgSpectrum",
    "ModSrgParams",
    "QuadraticSurd",
    "seidel_matrix",
    "srg_spectrum",
    "complement_params",
    "check_srg",
    "check_modular_srg",
    "generate",
    "parse_family",
    "registry_graph",
    "read_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..v-1."""

    adj: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        a = np.asarray(self.adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if a.diagonal().any():
            raise ValueError("graph has loops")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency is not symmetric")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "adj", a)

    @classmethod
    def from_edges(cls, v: int, edges: Iterable[tuple[int, int]], name: str = "") -> Graph:
        a = np.zeros((v, v), dtype=bool)
        for i, j in edges:
            if not (0 <= i < v and 0 <= j < v):
                raise ValueError(f"edge ({i},{j}) out of range for v={v}")
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            a[i, j] = a[j, i] = True
        return cls(a, name)

    @property
    def v(self) -> int:
        return self.adj.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(self.adj, 1)))]

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def complement(self) -> Graph:
        c = ~self.adj
        np.fill_diagonal(c, False)
        name = self.name[:-len("-complement")] if self.name.endswith("-complement") else (
            f"{self.name}-complement" if self.name else ""
        )
        return Graph(c, name)

    def adjacency(self) -> IntMat:
        return IntMat(self.adj.astype(np.int64))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adj, other.adj)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph({self.name or '?'}, v={self.v}, e={int(self.adj.sum()) // 2})"


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def __iter__(self):
        return iter((self.v, self.k, self.lam, self.mu))

    def identity_holds(self) -> bool:
        """k(k - lambda - 1) == mu(v - k - 1)."""
        return self.k * (self.k - self.lam - 1) == self.mu * (self.v - self.k - 1)

    def __str__(self) -> str:
        return f"({self.v},{self.k},{self.lam},{self.mu})"


@dataclass(frozen=True)
class ModSrgParams:
    """Parameters of a p-modular SRG, each reduced into [0, p)."""

    p: int
    v: int
    k: int
    lam: int
    mu: int

    def identity_holds(self) -> bool:
        return (self.k * (self.k - self.lam - 1) - self.mu * (self.v - self.k - 1)) % self.p == 0


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact a + b*sqrt(D) with rational a, b and integer D > 0."""

    a: Fraction
    b: Fraction = Fraction(0)
    D: int = 1

    def _lift(self, o) -> QuadraticSurd:
        if isinstance(o, QuadraticSurd):
            if o.b and self.b and o.D != self.D:
                raise ValueError("surds with different radicands")
            return o
        return QuadraticSurd(Fraction(o), Fraction(0), self.D)

    def _D(self, o: QuadraticSurd) -> int:
        return self.D if self.b else o.D

    def __add__(self, o) -> QuadraticSurd:
        o = self._lift(o)
        return QuadraticSurd(self.a + o.a, self.b + o.b, self._D(o))

    __radd__ = __add__

    def __neg__(self) -> QuadraticSurd:
        return QuadraticSurd(-self.a, -self.b, self.D)

    def __sub__(self, o) -> QuadraticSurd:
        return self + (-self._lift(o))

    def __rsub__(self, o) -> QuadraticSurd:
        return (-self) + o

    def __mul__(self, o) -> QuadraticSurd:
        o = self._lift(o)
        D = self._D(o)
        return QuadraticSurd(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if isinstance(o, QuadraticSurd):
            return self.a == o.a and self.b == o.b and (self.b == 0 or self.D == o.D)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.D if self.b else 1))

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.D})"


@dataclass(frozen=True)
class SrgSpectrum:
    """Adjacency eigenvalues r > s with multiplicities f, g, and the
    Seidel eigenvalues theta_k, theta_r, theta_s."""

    r: int | QuadraticSurd
    s: int | QuadraticSurd
    f: int
    g: int
    theta_k: int
    theta_r: int | QuadraticSurd
    theta_s: int | QuadraticSurd

    @property
    def conference(self) -> bool:
        return self.f == self.g and isinstance(self.r, QuadraticSurd)


def _int_or_none(x: Fraction) -> int | None:
    return int(x) if x.denominator == 1 else None


def srg_spectrum(params: SrgParams) -> SrgSpectrum:
    v, k, lam, mu = params
    if not (0 < k < v - 1):
        raise ValueError(f"{params} is a trivial (complete or edgeless) graph")
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    if disc < 0:
        raise ValueError(f"{params}: negative discriminant")
    theta_k = v - 2 * k - 1
    root = math.isqrt(disc)
    if root * root == disc:
        r = Fraction(lam - mu + root, 2)
        s = Fraction(lam - mu - root, 2)
        if r == s:
            raise ValueError(f"{params}: r == s, not a strongly regular spectrum")
        f = Fraction(s - k - v * s) / (r - s)
        g = v - 1 - f
        ri, si, fi, gi = map(_int_or_none, (r, s, f, g))
        if None in (ri, si, fi, gi) or fi < 0 or gi < 0:
            raise ValueError(f"{params}: non-integral eigenvalues or multiplicities")
        return SrgSpectrum(ri, si, fi, gi, theta_k, -2 * ri - 1, -2 * si - 1)
    # irrational eigenvalues force the conference case f = g = (v-1)/2
    if 2 * k + (v - 1) * (lam - mu) != 0 or (v - 1) % 2:
        raise ValueError(f"{params}: irrational eigenvalues with f != g")
    h = Fraction(1, 2)
    r = QuadraticSurd(Fraction(lam - mu, 2), h, disc)
    s = QuadraticSurd(Fraction(lam - mu, 2), -h, disc)
    f = (v - 1) // 2
    return SrgSpectrum(r, s, f, f, theta_k, -2 * r - 1, -2 * s - 1)


def complement_params(params: SrgParams) -> SrgParams:
    v, k, lam, mu = params
    return SrgParams(v, v - k - 1, v - 2 * k + mu - 2, v - 2 * k + lam)


def seidel_matrix(g: Graph) -> IntMat:
    """J - 2A - I."""
    a = g.adj.astype(np.int64)
    s = 1 - 2 * a
    np.fill_diagonal(s, 0)
    return IntMat(s)


def _common_counts(g: Graph) -> np.ndarray:
    a = g.adj.astype(np.int64)
    return a @ a


def check_srg(g: Graph) -> SrgParams | None:
    v = g.v
    deg = g.degrees()
    if v < 2 or not (deg == deg[0]).all():
        return None
    k = int(deg[0])
    if k == 0 or k == v - 1:
        return None
    c = _common_counts(g)
    off = ~np.eye(v, dtype=bool)
    lam_vals = c[g.adj]
    mu_vals = c[~g.adj & off]
    if not ((lam_vals == lam_vals[0]).all() and (mu_vals == mu_vals[0]).all()):
        return None
    return SrgParams(v, k, int(lam_vals[0]), int(mu_vals[0]))


def check_modular_srg(g: Graph, p: int) -> ModSrgParams | None:
    """Parameters mod p when valencies and common-neighbour counts of adjacent
    and of non-adjacent pairs are each constant mod p.

    Graphs without adjacent pairs or without non-adjacent pairs are rejected,
    as one of lambda, mu would then be undetermined.
    """
    make_field(p)
    v = g.v
    if v < 2:
        return None
    deg = g.degrees() % p
    if not (deg == deg[0]).all():
        return None
    c = _common_counts(g) % p
    off = ~np.eye(v, dtype=bool)
    lam_vals = c[g.adj]
    mu_vals = c[~g.adj & off]
    if lam_vals.size == 0 or mu_vals.size == 0:
        return None
    if not ((lam_vals == lam_vals[0]).all() and (mu_vals == mu_vals[0]).all()):
        return None
    return ModSrgParams(p, v % p, int(deg[0]), int(lam_vals[0]), int(mu_vals[0]))


# -- generators ------------------------------------------------------------------------


def _two_sets(m: int) -> list[tuple[int, int]]:
    return list(combinations(range(m), 2))


def triangular(m: int) -> Graph:
    """T(m): 2-subsets of [m], adjacent when they meet."""
    if m < 3:
        raise ValueError("triangular(m) needs m >= 3")
    sets = _two_sets(m)
    a = np.array([[len(set(x) & set(y)) == 1 for y in sets] for x in sets], dtype=bool)
    return Graph(a, f"triangular({m})")


def triangular_complement(m: int) -> Graph:
    """Complement of T(m): 2-subsets adjacent when disjoint."""
    if m < 3:
        raise ValueError("triangular_complement(m) needs m >= 3")
    sets = _two_sets(m)
    a = np.array([[not (set(x) & set(y)) for y in sets] for x in sets], dtype=bool)
    return Graph(a, f"triangular_complement({m})")


def lattice(m: int) -> Graph:
    """Rook's graph on an m x m board."""
    if m < 2:
        raise ValueError("lattice(m) needs m >= 2")
    idx = [(i, j) for i in range(m) for j in range(m)]
    a = np.array(
        [[(x != y) and (x[0] == y[0] or x[1] == y[1]) for y in idx] for x in idx], dtype=bool
    )
    return Graph(a, f"lattice({m})")


def _prime_power(q: int) -> tuple[int, int] | None:
    for l in (1, 2):
        p = round(q ** (1 / l))
        for cand in (p - 1, p, p + 1):
            if cand > 1 and cand**l == q:
                try:
                    make_field(cand, l)
                except ValueError:
                    continue
                return cand, l
    return None


def paley(q: int) -> Graph:
    """Paley graph on F_q (q = p or p^2, q = 1 mod 4); vertices in encoding order."""
    pl = _prime_power(q)
    if pl is None:
        raise ValueError(f"paley(q) needs q = p or p^2 for an odd prime p, got {q}")
    if q % 4 != 1:
        raise ValueError(f"paley(q) needs q = 1 mod 4, got {q}")
    p, l = pl
    ctx = make_field(p, l)
    sq = np.zeros(q, dtype=bool)
    for e in ctx.elements():
        if not e.is_zero():
            sq[(e * e).index] = True
    idx = np.arange(q)
    x, y = idx % p, idx // p
    diff = (x[:, None] - x[None, :]) % p + p * ((y[:, None] - y[None, :]) % p)
    a = sq[diff]
    return Graph(a, f"paley({q})")


_FAMILIES = {
    "triangular": triangular,
    "triangular_complement": triangular_complement,
    "lattice": lattice,
    "paley": paley,
}

_FAMILY_RE = re.compile(r"\s*([a-z_]+)\s*\(\s*(\d+)\s*\)\s*")


def generate(family: str, arg: int | str | Path | None = None) -> Graph:
    """Build a named graph: triangular(m), triangular_complement(m), paley(q),
    lattice(m) or from_edge_list(path)."""
    if family == "from_edge_list":
        if arg is None:
            raise ValueError("from_edge_list needs a path")
        return read_edge_list(arg)
    if family not in _FAMILIES:
        raise ValueError(f"unknown graph family {family!r}")
    if not isinstance(arg, int):
        raise ValueError(f"{family} needs an integer argument")
    return _FAMILIES[family](arg)


def parse_family(text: str) -> Graph:
    """Parse a family spec such as ``paley(9)`` or ``from_edge_list(path)``."""
    text = text.strip()
    if text.startswith("from_edge_list(") and text.endswith(")"):
        return read_edge_list(text[len("from_edge_list(") : -1].strip())
    m = _FAMILY_RE.fullmatch(text)
    if not m:
        raise ValueError(f"malformed family spec {text!r}")
    return generate(m.group(1), int(m.group(2)))


def _registry_candidates(v: int) -> list[str]:
    out = []
    m = (1 + math.isqrt(1 + 8 * v)) // 2
    if m >= 4 and m * (m - 1) // 2 == v:
        out += [f"triangular({m})", f"triangular_complement({m})"]
    m = math.isqrt(v)
    if m >= 2 and m * m == v:
        out.append(f"lattice({m})")
    if v % 4 == 1 and _prime_power(v):
        out.append(f"paley({v})")
    return out


def registry_graph(params: SrgParams, vmax: int = 600) -> Graph | None:
    """A registry graph (or its complement) with the given SRG parameters."""
    if params.v > vmax:
        return None
    for spec in _registry_candidates(params.v):
        g = parse_family(spec)
        for h in (g, g.complement()):
            if check_srg(h) == params:
                return h
    return None


# -- edge-list files ----------------------------------------------------------------


def parse_edge_list(text: str, name: str = "") -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("edge list must start with a line holding v")
    v = int(lines[0][0])
    edges = []
    for ln in lines[1:]:
        if len(ln) != 2:
            raise ValueError(f"malformed edge line {' '.join(ln)!r}")
        edges.append((int(ln[0]), int(ln[1])))
    return Graph.from_edges(v, edges, name)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text(), Path(path).stem)


def write_edge_list(g: Graph, path: str | Path) -> None:
    lines = [str(g.v)] + [f"{i} {j}" for i, j in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def petersen() -> Graph:
    g = triangular_complement(5)
    return Graph(g.adj, "petersen")


def modular_square(x: int, p: int) -> bool:
    """Whether the integer x is a square mod p (zero counts)."""
    return is_square(make_field(p)(x))
