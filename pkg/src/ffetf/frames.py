"""Equiangular tight frames given by Gram matrices over F_q.

An (a,b,c)-ETF of n vectors is described by its Gram matrix G: symmetric,
constant diagonal a, off-diagonal entries squaring to b, and G^2 = cG.  The
dimension d is rank G.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np
from sympy import primerange

from .gf import FieldCtx, FieldElem, lift_int, make_field, sqrt
from .matgf import (
    DiscriminantClass,
    IntMat,
    MatGF,
    _cmul,
    discriminant_class,
    rank,
    read_matrix,
    write_matrix,
)

__all__ = [
    "FrameParams",
    "EtfCertificate",
    "GerzonStatus",
    "Integrality",
    "verify_etf",
    "welch_residual",
    "gerzon_check",
    "naimark",
    "rescale",
    "normalize_switching",
    "normalize_sign",
    "project_real_signature",
    "descend_base_field",
    "integrality_test",
    "admissible_a",
    "candidate_primes",
    "write_certificate",
    "read_certificate",
]


@dataclass(frozen=True)
class FrameParams:
    a: FieldElem
    b: FieldElem
    c: FieldElem
    d: int
    n: int

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    @property
    def q(self) -> int:
        return self.ctx.q

    def trace_holds(self) -> bool:
        """n*a == d*c."""
        return self.n * self.a == self.d * self.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})-ETF, d={self.d}, n={self.n} over F_{self.q}"


@dataclass(frozen=True, eq=False)
class EtfCertificate:
    params: FrameParams
    discriminant: DiscriminantClass
    gram: MatGF
    provenance: str = ""

    def with_provenance(self, tag: str) -> EtfCertificate:
        return replace(self, provenance=tag)

    def summary(self) -> dict:
        pr = self.params
        return {
            "p": pr.ctx.p,
            "l": pr.ctx.l,
            "a": str(pr.a),
            "b": str(pr.b),
            "c": str(pr.c),
            "d": pr.d,
            "n": pr.n,
            "discriminant": self.discriminant.value,
            "provenance": self.provenance,
        }


class GerzonStatus(str, Enum):
    WITHIN = "within"
    AT_BOUND = "at-bound"
    VIOLATION = "violation"


class Integrality(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"


def verify_etf(g: MatGF, provenance: str = "") -> EtfCertificate | None:
    """Certificate when G is the Gram matrix of an ETF, else None."""
    if g.rows != g.cols:
        raise ValueError(f"Gram matrix must be square, got {g.rows}x{g.cols}")
    ctx = g.ctx
    n = g.rows
    if n == 0 or g.is_zero() or not g.is_symmetric():
        return None
    comps = g.comps
    diag = comps[:, np.arange(n), np.arange(n)]
    if not (diag == diag[:, :1]).all():
        return None
    a = g[0, 0]
    if n > 1:
        off = ~np.eye(n, dtype=bool)
        sq_comps = _cmul(ctx, comps, comps)[:, off]
        if not (sq_comps == sq_comps[:, :1]).all():
            return None
        b = FieldElem(ctx, int(sq_comps[0, 0]), int(sq_comps[1, 0]) if ctx.l == 2 else 0)
    else:
        b = ctx.zero
    g2 = g @ g
    if g2.is_zero():
        c = ctx.zero
    else:
        i, j = (int(t) for t in np.argwhere(comps.any(axis=0))[0])
        c = g2[i, j] / g[i, j]
        if g2 != g.scale(c):
            return None
    d = rank(g)
    params = FrameParams(a, b, c, d, n)
    if not params.trace_holds() or not welch_residual(params).is_zero():
        return None
    return EtfCertificate(params, discriminant_class(g), g, provenance)


def welch_residual(params: FrameParams) -> FieldElem:
    """a(c - a) - (n - 1)b."""
    a, b, c = params.a, params.b, params.c
    return a * (c - a) - (params.n - 1) * b


def gerzon_check(d: int, n: int) -> GerzonStatus:
    bound = d * (d + 1) // 2
    if n < bound:
        return GerzonStatus.WITHIN
    return GerzonStatus.AT_BOUND if n == bound else GerzonStatus.VIOLATION


def naimark(cert: EtfCertificate) -> EtfCertificate:
    """Certificate for cI - G, a (c-a, b, c)-ETF of rank n - d."""
    c = cert.params.c
    if c.is_zero():
        raise ValueError("Naimark complement needs a nonzero frame constant")
    if cert.params.d == cert.params.n:
        raise ValueError("Naimark complement of a full-rank frame is empty")
    g = cert.gram
    out = verify_etf(MatGF.identity(g.ctx, g.rows).scale(c) - g, f"naimark({cert.provenance})")
    if out is None:
        raise AssertionError("Naimark complement failed to verify")
    return out


def rescale(g: MatGF, alpha: FieldElem | int) -> MatGF:
    """alpha*G; an (a,b,c)-Gram becomes an (alpha a, alpha^2 b, alpha c)-Gram."""
    if g.ctx(alpha).is_zero():
        raise ValueError("rescaling by zero")
    return g.scale(alpha)


def normalize_switching(g: MatGF) -> MatGF:
    """Conjugate by a +-1 diagonal so row 0 is +1 off the diagonal."""
    n = g.rows
    if n < 2:
        raise ValueError("switching normalization needs n >= 2")
    ctx = g.ctx
    signs = []
    for j in range(1, n):
        e = g[0, j]
        if e == 1:
            signs.append(1)
        elif e == -1:
            signs.append(-1)
        else:
            raise ValueError(f"entry (0,{j}) = {e} is not +-1")
    dg = np.array([1] + signs, dtype=g.comps.dtype)
    comps = g.comps * dg[None, :, None] * dg[None, None, :] % ctx.p
    return MatGF(ctx, comps)


def normalize_sign(a: int, c: int, p: int) -> tuple[int, int]:
    """Lexicographically smaller of (a, c) and (-a, -c) in [0, p)."""
    return min((a % p, c % p), (-a % p, -c % p))


# -- real projections ---------------------------------------------------------------------


def _check_signature(s: IntMat) -> np.ndarray:
    e = s.entries.astype(object)
    n = e.shape[0]
    if e.shape != (n, n) or n < 2:
        raise ValueError("signature matrix must be square with n >= 2")
    if any(e[i, i] != 0 for i in range(n)):
        raise ValueError("signature matrix must have zero diagonal")
    off = ~np.eye(n, dtype=bool)
    if not all(x in (1, -1) for x in e[off]):
        raise ValueError("signature matrix must be +-1 off the diagonal")
    if not (e == e.T).all():
        raise ValueError("signature matrix must be symmetric")
    return e


def project_real_signature(
    s: IntMat,
    d: int,
    p: int,
    l: int = 1,
    delta: FieldElem | int | None = None,
) -> EtfCertificate:
    """Reduce the signature matrix of a real d x n ETF into F_{p^l}."""
    e = _check_signature(s)
    n = e.shape[0]
    if not (d + 1 < n):
        raise ValueError(f"need n > d + 1, got d={d}, n={n}")
    ctx = make_field(p, l)
    s2 = e @ e
    eye = np.eye(n, dtype=object)
    if n != 2 * d:
        ratio = Fraction(d * (n - 1), n - d)
        a_hat = math.isqrt(ratio.numerator) if ratio.denominator == 1 else -1
        if a_hat < 0 or a_hat * a_hat != ratio:
            raise ValueError(f"sqrt(d(n-1)/(n-d)) = sqrt({ratio}) is not an integer")
        c_hat = Fraction(n * a_hat, d)
        if c_hat.denominator != 1:
            raise ValueError("frame constant n*a/d is not an integer")
        c_hat = int(c_hat)
        expect = (c_hat - 2 * a_hat) * e + (c_hat * a_hat - a_hat * a_hat) * eye
        if not (s2 == expect).all():
            raise ValueError(f"S is not the signature matrix of a real {d} x {n} ETF")
        a, c = lift_int(a_hat, ctx), lift_int(c_hat, ctx)
        tag = f"project-real(d={d},p={p})"
    else:
        if not (s2 == (n - 1) * eye).all():
            raise ValueError(f"S is not the signature matrix of a real {d} x {n} ETF")
        if delta is None:
            roots = sqrt(lift_int(n - 1, ctx))
            if roots is None:
                raise ValueError(f"n-1 = {n - 1} is not a square in F_{ctx.q}")
            a = roots[0]
        else:
            a = ctx(delta)
            if a * a != n - 1:
                raise ValueError(f"delta = {a} does not square to n-1 = {n - 1}")
        c = 2 * a
        tag = f"project-real(d={d},p={p},delta={a})"
    g = s.reduce(ctx) + MatGF.identity(ctx, n).scale(a)
    cert = verify_etf(g, tag)
    if cert is None:
        raise AssertionError("projected Gram matrix failed to verify")
    pr = cert.params
    if pr.a != a or pr.c != c or pr.d > d or (not c.is_zero() and pr.d != d):
        raise AssertionError("projected parameters disagree with the real ETF")
    return cert


def descend_base_field(cert: EtfCertificate) -> tuple[EtfCertificate, int]:
    """Re-certify an (a,1,c)-ETF over the smallest field F_{p^j} holding a, c."""
    pr = cert.params
    if pr.b != 1:
        raise ValueError("descent needs b = 1")
    j = 1 if pr.a.in_base_field() and pr.c.in_base_field() else 2
    if j == 2 and (pr.n != 2 * pr.d or pr.c.is_zero()):
        raise AssertionError(
            "a, c outside the prime field although n != 2d or c = 0; this is a bug"
        )
    g = cert.gram
    if j == 1:
        target = make_field(pr.ctx.p, 1)
        g = g.over(target)
    out = verify_etf(g, cert.provenance)
    if out is None or out.params.d != pr.d:
        raise AssertionError("descended Gram matrix failed to verify")
    return out, j


# -- prime filters ----------------------------------------------------------------------------


def integrality_test(d: int, n: int, p: int) -> Integrality:
    """Necessary condition for an ETF of n vectors in dimension d over F_{p^l}."""
    if n in (d, 2 * d):
        raise ValueError("integrality test needs n not in {d, 2d}")
    ctx = make_field(p)
    if d % p == 0 or (n - 1) % p == 0:
        return Integrality.INAPPLICABLE
    if (n - d) % p == 0:
        return Integrality.FAIL
    ratio = lift_int(d * (n - 1), ctx) / lift_int(n - d, ctx)
    return Integrality.PASS if sqrt(ratio) is not None else Integrality.FAIL


def admissible_a(d: int, n: int, p: int) -> list[int]:
    """Values a in F_p compatible with n a = d c and a(c - a) = n - 1 (b = 1)."""
    ctx = make_field(p)
    everything = list(range(p))
    if d % p:
        # c = n a / d, so a^2 (n - d)/d = n - 1
        coef = lift_int(n - d, ctx) / lift_int(d, ctx)
        if coef.is_zero():
            return everything if (n - 1) % p == 0 else []
        roots = sqrt(lift_int(n - 1, ctx) / coef)
        return sorted({int(r) for r in roots}) if roots else []
    if n % p:
        # n a = 0 forces a = 0, then the Welch relation needs n = 1
        return [0] if (n - 1) % p == 0 else []
    return everything


def candidate_primes(d: int, n: int, real_exists: bool) -> list[int] | str:
    """Odd primes that can carry an ETF of n vectors in dimension d.

    With no real ETF, only p <= 2n - 5 can; those are filtered by the
    integrality test and, for p not dividing n, by solvability of the trace
    and Welch relations.  With a real ETF nothing is excluded.
    """
    if real_exists:
        return "unbounded"
    out = []
    for p in primerange(3, 2 * n - 4):
        if n not in (d, 2 * d) and integrality_test(d, n, p) == Integrality.FAIL:
            continue
        if n % p and not admissible_a(d, n, p):
            continue
        out.append(int(p))
    return out


# -- serialization ------------------------------------------------------------------------------


def write_certificate(cert: EtfCertificate, path: str | Path, gram_path: str | Path | None = None) -> None:
    """Write a JSON record plus the Gram matrix file it references."""
    path = Path(path)
    gram_path = Path(gram_path) if gram_path else path.with_suffix(".gram.txt")
    write_matrix(cert.gram, gram_path)
    rec = cert.summary()
    rec["kind"] = "etf"
    rec["gram"] = str(gram_path.name if gram_path.parent == path.parent else gram_path)
    path.write_text(json.dumps(rec, indent=2) + "\n")


def read_certificate(path: str | Path) -> EtfCertificate:
    """Load a certificate record and re-verify its Gram matrix."""
    path = Path(path)
    rec = json.loads(path.read_text())
    gram_path = Path(rec["gram"])
    if not gram_path.is_absolute():
        gram_path = path.parent / gram_path
    g = read_matrix(gram_path)
    if not isinstance(g, MatGF):
        raise ValueError("certificate Gram must be a field matrix")
    cert = verify_etf(g, rec.get("provenance", ""))
    if cert is None:
        raise ValueError(f"{gram_path} is not the Gram matrix of an ETF")
    got = cert.summary()
    for key in ("p", "l", "a", "b", "c", "d", "n", "discriminant"):
        if key in rec and str(rec[key]) != str(got[key]):
            raise ValueError(f"certificate field {key}: recorded {rec[key]}, verified {got[key]}")
    return cert
