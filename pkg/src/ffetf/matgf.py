"""Dense matrices over F_p / F_{p^2} and integer matrices.

A ``MatGF`` stores its entries as a component array of shape (l, rows, cols):
``comps[0]`` holds the x-coordinates and, for l == 2, ``comps[1]`` the
t-coordinates.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .gf import FieldCtx, FieldElem, make_field, sqrt

__all__ = [
    "MatGF",
    "IntMat",
    "DiscriminantClass",
    "rank",
    "p_rank",
    "det",
    "basic_columns",
    "discriminant_class",
    "gram_factor",
    "read_matrix",
    "write_matrix",
]

# int64 is safe while n * p^2 stays below 2^63 for every dot product we form
_INT64_P_LIMIT = 1 << 20


def _dtype_for(p: int):
    return np.int64 if p < _INT64_P_LIMIT else object


class DiscriminantClass(str, Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"


# -- component-array arithmetic ----------------------------------------------


def _cmul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise product of broadcastable component arrays."""
    p = ctx.p
    if ctx.l == 1:
        return (a[0] * b[0] % p)[None]
    x = (a[0] * b[0] + ctx.nu * (a[1] * b[1] % p)) % p
    y = (a[0] * b[1] + a[1] * b[0]) % p
    return np.stack([x, y])


def _cmatmul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = ctx.p
    if ctx.l == 1:
        return (a[0] @ b[0] % p)[None]
    x = (a[0] @ b[0] % p + ctx.nu * (a[1] @ b[1] % p)) % p
    y = (a[0] @ b[1] + a[1] @ b[0]) % p
    return np.stack([x, y])


def _scalar(ctx: FieldCtx, e: FieldElem | int) -> np.ndarray:
    e = ctx(int(e)) if isinstance(e, np.integer) else ctx(e)
    return np.array([e.x, e.y][: ctx.l], dtype=_dtype_for(ctx.p))


def _elem(ctx: FieldCtx, comp: np.ndarray) -> FieldElem:
    return FieldElem(ctx, int(comp[0]), int(comp[1]) if ctx.l == 2 else 0)


@dataclass(frozen=True, eq=False)
class MatGF:
    ctx: FieldCtx
    comps: np.ndarray

    def __post_init__(self) -> None:
        c = self.comps
        if c.ndim != 3 or c.shape[0] != self.ctx.l:
            raise ValueError(f"component array of shape {c.shape} does not fit {self.ctx!r}")
        c.flags.writeable = False

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_ints(cls, ctx: FieldCtx, rows) -> MatGF:
        a = np.array(rows, dtype=object)
        if a.ndim != 2:
            a = a.reshape(len(rows), -1)
        a = (a % ctx.p).astype(_dtype_for(ctx.p))
        comps = np.zeros((ctx.l,) + a.shape, dtype=a.dtype)
        comps[0] = a
        return cls(ctx, comps)

    @classmethod
    def from_elems(cls, ctx: FieldCtx, rows: Sequence[Sequence[FieldElem | int]]) -> MatGF:
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        comps = np.zeros((ctx.l, nr, nc), dtype=_dtype_for(ctx.p))
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged rows")
            for j, e in enumerate(row):
                comps[:, i, j] = _scalar(ctx, e)
        return cls(ctx, comps)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int | None = None) -> MatGF:
        cols = rows if cols is None else cols
        return cls(ctx, np.zeros((ctx.l, rows, cols), dtype=_dtype_for(ctx.p)))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> MatGF:
        comps = np.zeros((ctx.l, n, n), dtype=_dtype_for(ctx.p))
        comps[0] = np.eye(n, dtype=comps.dtype)
        return cls(ctx, comps)

    @classmethod
    def ones(cls, ctx: FieldCtx, rows: int, cols: int | None = None) -> MatGF:
        cols = rows if cols is None else cols
        comps = np.zeros((ctx.l, rows, cols), dtype=_dtype_for(ctx.p))
        comps[0] = 1
        return cls(ctx, comps)

    @classmethod
    def diag(cls, ctx: FieldCtx, entries: Iterable[FieldElem | int]) -> MatGF:
        entries = list(entries)
        m = np.zeros((ctx.l, len(entries), len(entries)), dtype=_dtype_for(ctx.p))
        for i, e in enumerate(entries):
            m[:, i, i] = _scalar(ctx, e)
        return cls(ctx, m)

    # -- shape and access --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.comps.shape[1], self.comps.shape[2]

    @property
    def rows(self) -> int:
        return self.comps.shape[1]

    @property
    def cols(self) -> int:
        return self.comps.shape[2]

    def __getitem__(self, ij: tuple[int, int]) -> FieldElem:
        i, j = ij
        return _elem(self.ctx, self.comps[:, i, j])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> MatGF:
        return MatGF(self.ctx, self.comps[:, list(rows)][:, :, list(cols)].copy())

    def row_elems(self, i: int) -> list[FieldElem]:
        return [self[i, j] for j in range(self.cols)]

    def to_elems(self) -> list[list[FieldElem]]:
        return [self.row_elems(i) for i in range(self.rows)]

    def in_base_field(self) -> bool:
        return self.ctx.l == 1 or not self.comps[1].any()

    def over(self, ctx: FieldCtx) -> MatGF:
        """The same matrix read in another field of the same characteristic."""
        if ctx.p != self.ctx.p:
            raise ValueError("different characteristic")
        if ctx.l == self.ctx.l:
            return self
        if ctx.l == 2:
            comps = np.zeros((2,) + self.shape, dtype=self.comps.dtype)
            comps[0] = self.comps[0]
            return MatGF(ctx, comps)
        if not self.in_base_field():
            raise ValueError("matrix has entries outside the prime field")
        return MatGF(ctx, self.comps[:1].copy())

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: MatGF) -> None:
        if other.ctx != self.ctx:
            raise ValueError(f"field mismatch: {self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other: MatGF) -> MatGF:
        self._check(other)
        return MatGF(self.ctx, (self.comps + other.comps) % self.ctx.p)

    def __sub__(self, other: MatGF) -> MatGF:
        self._check(other)
        return MatGF(self.ctx, (self.comps - other.comps) % self.ctx.p)

    def __neg__(self) -> MatGF:
        return MatGF(self.ctx, -self.comps % self.ctx.p)

    def __matmul__(self, other: MatGF) -> MatGF:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return MatGF(self.ctx, _cmatmul(self.ctx, self.comps, other.comps))

    def scale(self, alpha: FieldElem | int) -> MatGF:
        s = _scalar(self.ctx, alpha)
        return MatGF(self.ctx, _cmul(self.ctx, s[:, None, None], self.comps))

    @property
    def T(self) -> MatGF:
        return MatGF(self.ctx, self.comps.transpose(0, 2, 1).copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatGF):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.comps, other.comps)

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.comps.any()

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.comps, self.comps.transpose(0, 2, 1))

    def diagonal(self) -> list[FieldElem]:
        return [self[i, i] for i in range(min(self.shape))]

    def __repr__(self) -> str:
        return f"MatGF({self.ctx!r}, {self.rows}x{self.cols})"

    def to_text(self) -> str:
        lines = [f"{self.ctx.p} {self.ctx.l} {self.rows} {self.cols}"]
        for i in range(self.rows):
            if self.ctx.l == 1:
                lines.append(" ".join(str(int(v)) for v in self.comps[0, i]))
            else:
                lines.append(
                    " ".join(
                        str(int(x)) if y == 0 else f"{int(x)}+{int(y)}*t"
                        for x, y in zip(self.comps[0, i], self.comps[1, i])
                    )
                )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class IntMat:
    """Integer matrix; int64 storage is promoted to Python ints when needed."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.entries.ndim != 2:
            raise ValueError("IntMat must be two-dimensional")

    @classmethod
    def from_rows(cls, rows) -> IntMat:
        a = np.array(rows, dtype=object)
        if a.size and max(abs(int(x)) for x in a.flat) < (1 << 62):
            a = a.astype(np.int64)
        return cls(a.reshape(len(rows), -1) if a.ndim != 2 else a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def _big(self) -> np.ndarray:
        return self.entries.astype(object)

    def __matmul__(self, other: IntMat) -> IntMat:
        a, b = self.entries, other.entries
        if a.dtype != object and b.dtype != object and a.size and b.size:
            bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.shape[1]
            if bound < (1 << 62):
                return IntMat(a @ b)
        return IntMat(self._big() @ other._big())

    def __add__(self, other: IntMat) -> IntMat:
        return IntMat(self._big() + other._big())

    def __sub__(self, other: IntMat) -> IntMat:
        return IntMat(self._big() - other._big())

    def scale(self, k: int) -> IntMat:
        return IntMat(self._big() * k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMat):
            return NotImplemented
        return self.shape == other.shape and bool(
            np.all(self._big() == other._big())
        )

    __hash__ = None  # type: ignore[assignment]

    def reduce(self, ctx: FieldCtx) -> MatGF:
        e = self.entries
        if e.dtype == object:
            return MatGF.from_ints(ctx, e)
        a = (e % ctx.p).astype(_dtype_for(ctx.p))
        comps = np.zeros((ctx.l,) + a.shape, dtype=a.dtype)
        comps[0] = a
        return MatGF(ctx, comps)

    def to_text(self) -> str:
        r, c = self.shape
        lines = [f"0 0 {r} {c}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.entries]
        return "\n".join(lines) + "\n"


# -- elimination ------------------------------------------------------------------


def _echelon(m: MatGF) -> tuple[list[int], FieldElem]:
    """Forward elimination; returns pivot columns and the determinant
    (meaningful only for square input)."""
    ctx = m.ctx
    p = ctx.p
    a = m.comps.copy()
    rows, cols = m.shape
    r = 0
    pivots: list[int] = []
    det = ctx.one
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[:, r:, c].any(axis=0))
        if nz.size == 0:
            det = ctx.zero
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[:, [r, piv]] = a[:, [piv, r]]
            det = -det
        pv = _elem(ctx, a[:, r, c])
        det = det * pv
        inv = _scalar(ctx, pv.inverse())
        a[:, r, c:] = _cmul(ctx, inv[:, None], a[:, r, c:])
        below = a[:, r + 1 :, c].copy()
        hit = np.flatnonzero(below.any(axis=0))
        if hit.size:
            idx = r + 1 + hit
            f = below[:, hit]
            prod = _cmul(ctx, f[:, :, None], a[:, r, None, c:])
            a[:, idx, c:] = (a[:, idx, c:] - prod) % p
        pivots.append(c)
        r += 1
    if r < min(rows, cols) or rows != cols:
        det = ctx.zero
    return pivots, det


def basic_columns(m: MatGF) -> list[int]:
    """Lowest-index columns forming a basis of the column space."""
    if m.ctx.l == 1 and m.ctx.p < (1 << 31):
        return kernels.rank_mod_p(m.comps[0], m.ctx.p)[1]
    return _echelon(m)[0]


def rank(m: MatGF) -> int:
    return len(basic_columns(m))


def det(m: MatGF) -> FieldElem:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    return _echelon(m)[1]


def p_rank(m: IntMat, p: int) -> int:
    """Rank of the mod-p reduction of an integer matrix."""
    return rank(m.reduce(make_field(p)))


def discriminant_class(m: MatGF) -> DiscriminantClass:
    """Square class of det of the principal submatrix on the basic columns."""
    if not m.is_symmetric():
        raise ValueError("discriminant requires a symmetric matrix")
    cols = basic_columns(m)
    if not cols:
        raise ValueError("discriminant of the zero matrix is undefined")
    d = det(m.submatrix(cols, cols))
    return DiscriminantClass.SQUARE if sqrt(d) is not None else DiscriminantClass.NONSQUARE


# -- congruence factorization ----------------------------------------------------------


def _merge_solution(ctx: FieldCtx, ns: FieldElem) -> tuple[FieldElem, FieldElem]:
    """Some (x, y) with ns*x^2 + ns*y^2 == 1."""
    target = ns.inverse()
    for x in ctx.elements():
        roots = sqrt(target - x * x)
        if roots is not None:
            return x, roots[0]
    raise AssertionError("every element of a finite field is a sum of two squares")


def gram_factor(g: MatGF) -> tuple[MatGF, MatGF]:
    """Factor a symmetric G as X^T M X with M = diag(1,...,1[,nonsquare]).

    Returns (X, M) with X of shape d x n, d = rank G.
    """
    if not g.is_symmetric():
        raise ValueError("gram_factor requires a symmetric matrix")
    ctx = g.ctx
    p = ctx.p
    n = g.rows
    a = g.comps.copy()
    q = MatGF.identity(ctx, n).comps.copy()  # G = Q D Q^T throughout

    def swap(i: int, j: int) -> None:
        a[:, [i, j]] = a[:, [j, i]]
        a[:, :, [i, j]] = a[:, :, [j, i]]
        q[:, :, [i, j]] = q[:, :, [j, i]]

    r = 0
    for k in range(n):
        diag_nz = [j for j in range(k, n) if a[:, j, j].any()]
        if not diag_nz:
            block = a[:, k:, k:].any(axis=0)
            if not block.any():
                break
            i, j = (int(t) + k for t in np.argwhere(block)[0])
            # row_i += row_j, col_i += col_j makes a[i,i] = 2 a[i,j] != 0
            a[:, i] = (a[:, i] + a[:, j]) % p
            a[:, :, i] = (a[:, :, i] + a[:, :, j]) % p
            q[:, :, j] = (q[:, :, j] - q[:, :, i]) % p
            diag_nz = [i]
        if diag_nz[0] != k:
            swap(k, diag_nz[0])
        pinv = _scalar(ctx, _elem(ctx, a[:, k, k]).inverse())
        f = _cmul(ctx, a[:, k + 1 :, k], pinv[:, None])
        if f.any():
            a[:, k + 1 :] = (a[:, k + 1 :] - _cmul(ctx, f[:, :, None], a[:, k, None, :])) % p
            a[:, :, k + 1 :] = (a[:, :, k + 1 :] - _cmul(ctx, a[:, :, k, None], f[:, None, :])) % p
            fq = _cmatmul(ctx, q[:, :, k + 1 :], f[:, :, None])[:, :, 0]
            q[:, :, k] = (q[:, :, k] + fq) % p
        r = k + 1

    ns = ctx.nonsquare
    rows_one: list[np.ndarray] = []
    rows_ns: list[np.ndarray] = []
    for i in range(r):
        di = _elem(ctx, a[:, i, i])
        root = sqrt(di)
        target = rows_one
        if root is None:
            root = sqrt(di / ns)
            target = rows_ns
        u = _scalar(ctx, root[0])
        target.append(_cmul(ctx, u[:, None], q[:, :, i]))
    if len(rows_ns) > 1:
        x, y = _merge_solution(ctx, ns)
        nx, ny = _scalar(ctx, ns * x), _scalar(ctx, ns * y)
        while len(rows_ns) > 1:
            u = rows_ns.pop()
            w = rows_ns.pop()
            # [u'; w'] = ns * T^T [u; w] with T = [[x, -y], [y, x]]
            u2 = (_cmul(ctx, nx[:, None], u) + _cmul(ctx, ny[:, None], w)) % p
            w2 = (_cmul(ctx, nx[:, None], w) - _cmul(ctx, ny[:, None], u)) % p
            rows_one += [u2, w2]
    vecs = rows_one + rows_ns
    x_comps = np.stack(vecs, axis=1) if vecs else np.zeros((ctx.l, 0, n), dtype=a.dtype)
    geo = MatGF.diag(ctx, [1] * len(rows_one) + [ns] * len(rows_ns))
    return MatGF(ctx, x_comps), geo


# -- file I/O -------------------------------------------------------------------------


def parse_matrix(text: str) -> MatGF | IntMat:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        p, l, rows, cols = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad matrix header {lines[0]!r}") from exc
    body = [ln.split() for ln in lines[1:]]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ValueError(f"matrix body does not match header {rows}x{cols}")
    if p == 0 and l == 0:
        return IntMat.from_rows([[int(t) for t in r] for r in body]) if rows else IntMat(
            np.zeros((0, cols), dtype=np.int64)
        )
    ctx = make_field(p, l)
    comps = np.zeros((ctx.l, rows, cols), dtype=_dtype_for(p))
    for i, r in enumerate(body):
        for j, tok in enumerate(r):
            e = ctx.parse(tok)
            comps[0, i, j] = e.x
            if ctx.l == 2:
                comps[1, i, j] = e.y
    return MatGF(ctx, comps)


def read_matrix(path: str | Path) -> MatGF | IntMat:
    return parse_matrix(Path(path).read_text())


def write_matrix(m: MatGF | IntMat, path: str | Path) -> None:
    Path(path).write_text(m.to_text())
