"""Arithmetic in the prime field F_p and its quadratic extension F_{p^2}.

F_{p^2} is realized as F_p[t]/(t^2 - nu) where nu is the least quadratic
non-residue modulo p.  An element ``x + y*t`` is stored as the coordinate
pair ``(x, y)``; prime-field elements simply have ``y == 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from sympy import isprime

__all__ = [
    "FieldCtx",
    "FieldElem",
    "make_field",
    "lift_int",
    "sqrt",
    "is_square",
    "tonelli_shanks",
    "least_nonresidue",
]

# Above this bound sqrt switches from exhaustive search to Tonelli-Shanks.
EXHAUSTIVE_SQRT_LIMIT = 256


def legendre(x: int, p: int) -> int:
    """Legendre symbol (x/p) as 0, 1 or -1."""
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def least_nonresidue(p: int) -> int:
    for z in range(2, p):
        if legendre(z, p) == -1:
            return z
    raise ValueError(f"no quadratic non-residue modulo {p}")


def tonelli_shanks(n: int, p: int) -> int | None:
    """Return some r with r*r == n (mod p), or None if n is a non-residue."""
    n %= p
    if n == 0:
        return 0
    if legendre(n, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = least_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _sqrt_mod_p(n: int, p: int) -> int | None:
    n %= p
    if p <= EXHAUSTIVE_SQRT_LIMIT:
        for r in range(p):
            if r * r % p == n:
                return r
        return None
    return tonelli_shanks(n, p)


@dataclass(frozen=True)
class FieldCtx:
    """The field F_{p^l}, l in {1, 2}.

    ``nu`` is set only for ``l == 2`` and is the constant with ``t**2 == nu``.
    """

    p: int
    l: int = 1
    nu: int | None = None

    def __post_init__(self) -> None:
        if self.l not in (1, 2):
            raise ValueError(f"field degree must be 1 or 2, got {self.l}")
        if self.p % 2 == 0 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.l == 2:
            if self.nu is None or legendre(self.nu, self.p) != -1:
                raise ValueError("F_{p^2} needs a quadratic non-residue nu")
        elif self.nu is not None:
            raise ValueError("nu is only meaningful for l == 2")

    @property
    def q(self) -> int:
        return self.p**self.l

    def __repr__(self) -> str:
        return f"F_{self.q}"

    # -- raw coordinate arithmetic on (x, y) pairs --------------------------

    def _mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        if self.l == 1:
            return (a[0] * b[0] % p, 0)
        return ((a[0] * b[0] + self.nu * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def _inv(self, a: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        if self.l == 1:
            if a[0] == 0:
                raise ZeroDivisionError("inverse of zero")
            return (pow(a[0], -1, p), 0)
        norm = (a[0] * a[0] - self.nu * a[1] * a[1]) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        ni = pow(norm, -1, p)
        return (a[0] * ni % p, -a[1] * ni % p)

    # -- element construction ------------------------------------------------

    def __call__(self, x: int | FieldElem = 0, y: int = 0) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.ctx.p != self.p or (x.y and self.l == 1):
                raise ValueError(f"{x!r} does not lie in {self!r}")
            return FieldElem(self, x.x, x.y)
        if y and self.l == 1:
            raise ValueError("prime field elements have no t-coordinate")
        return FieldElem(self, x % self.p, y % self.p)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1, 0)

    def elements(self) -> Iterator[FieldElem]:
        """All elements in encoding order: index x + p*y."""
        for y in range(self.p if self.l == 2 else 1):
            for x in range(self.p):
                yield FieldElem(self, x, y)

    def element_at(self, index: int) -> FieldElem:
        return FieldElem(self, index % self.p, index // self.p)

    @property
    def nonsquare(self) -> FieldElem:
        """Least non-square of this field in encoding order."""
        return _least_nonsquare(self)

    def parse(self, text: str) -> FieldElem:
        """Parse the textual encoding ``x`` or ``x+y*t``."""
        m = _ELEM_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"malformed field element {text!r}")
        x, y = int(m.group(1)), int(m.group(2) or 0)
        if not (0 <= x < self.p and 0 <= y < self.p):
            raise ValueError(f"coordinates of {text!r} not reduced modulo {self.p}")
        if y and self.l == 1:
            raise ValueError(f"{text!r} is not an element of F_{self.p}")
        return FieldElem(self, x, y)


_ELEM_RE = re.compile(r"(\d+)(?:\+(\d+)\*t)?")


@lru_cache(maxsize=None)
def make_field(p: int, l: int = 1) -> FieldCtx:
    """Canonical context for F_{p^l}."""
    if l not in (1, 2):
        raise ValueError(f"field degree must be 1 or 2, got {l}")
    if p % 2 == 0 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    return FieldCtx(p, l, least_nonresidue(p) if l == 2 else None)


@lru_cache(maxsize=None)
def _least_nonsquare(ctx: FieldCtx) -> FieldElem:
    for e in ctx.elements():
        if not e.is_zero() and not is_square(e):
            return e
    raise AssertionError("every finite field of odd order has non-squares")


@dataclass(frozen=True, eq=False)
class FieldElem:
    ctx: FieldCtx
    x: int
    y: int = 0

    def _coerce(self, other: object) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.ctx.p != self.ctx.p:
                raise ValueError("elements of different characteristic")
            if other.ctx.l != self.ctx.l:
                big = self.ctx if self.ctx.l == 2 else other.ctx
                return big(other) if other.ctx is not big else other
            return other
        if isinstance(other, int):
            return FieldElem(self.ctx, other % self.ctx.p, 0)
        return None

    def _ctx_with(self, o: FieldElem) -> FieldCtx:
        return self.ctx if self.ctx.l >= o.ctx.l else o.ctx

    def __add__(self, other: object) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self._ctx_with(o)
        return FieldElem(ctx, (self.x + o.x) % ctx.p, (self.y + o.y) % ctx.p)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        p = self.ctx.p
        return FieldElem(self.ctx, -self.x % p, -self.y % p)

    def __sub__(self, other: object) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> FieldElem:
        return (-self) + other

    def __mul__(self, other: object) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self._ctx_with(o)
        return FieldElem(ctx, *ctx._mul((self.x, self.y), (o.x, o.y)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        return FieldElem(self.ctx, *self.ctx._inv((self.x, self.y)))

    def __truediv__(self, other: object) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> FieldElem:
        return self.inverse() * other

    def __pow__(self, k: int) -> FieldElem:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ctx.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx.p == other.ctx.p and (self.x, self.y) == (other.x, other.y)
        if isinstance(other, int):
            return self.y == 0 and self.x == other % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.x, self.y))

    def __lt__(self, other: FieldElem) -> bool:
        return (self.y, self.x) < (other.y, other.x)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def in_base_field(self) -> bool:
        return self.y == 0

    @property
    def index(self) -> int:
        return self.x + self.ctx.p * self.y

    def __int__(self) -> int:
        if self.y:
            raise ValueError(f"{self} is not in the prime field")
        return self.x

    def signed(self) -> int:
        """Representative in (-p/2, p/2); prime-field elements only."""
        v = int(self)
        return v - self.ctx.p if v > self.ctx.p // 2 else v

    def __str__(self) -> str:
        return str(self.x) if self.y == 0 else f"{self.x}+{self.y}*t"

    def __repr__(self) -> str:
        return f"{self}@F{self.ctx.q}"


def lift_int(k: int, ctx: FieldCtx) -> FieldElem:
    """Image of the integer k under Z -> F_{p^l}."""
    return FieldElem(ctx, k % ctx.p, 0)


def sqrt(x: FieldElem) -> tuple[FieldElem, ...] | None:
    """Both square roots of x sorted in encoding order, ``(0,)`` for zero,
    or None when x is not a square in its field."""
    ctx = x.ctx
    if x.is_zero():
        return (ctx.zero,)
    p = ctx.p
    if ctx.l == 1:
        r = _sqrt_mod_p(x.x, p)
        if r is None:
            return None
        roots = (ctx(r), ctx(-r))
    else:
        r = _sqrt_ext(x)
        if r is None:
            return None
        roots = (r, -r)
    return tuple(sorted(roots))


def _sqrt_ext(x: FieldElem) -> FieldElem | None:
    ctx = x.ctx
    p, nu = ctx.p, ctx.nu
    if p <= EXHAUSTIVE_SQRT_LIMIT // 16:
        for e in ctx.elements():
            if e * e == x:
                return e
        return None
    a, b = x.x, x.y
    if b == 0:
        r = _sqrt_mod_p(a, p)
        if r is not None:
            return ctx(r)
        # a/nu is then a residue and (s*t)^2 = s^2 * nu
        s = _sqrt_mod_p(a * pow(nu, -1, p), p)
        return ctx(0, s)
    n = _sqrt_mod_p(a * a - nu * b * b, p)
    if n is None:
        return None
    half = pow(2, -1, p)
    for cand in ((a + n) * half, (a - n) * half):
        c = _sqrt_mod_p(cand, p)
        if c:
            d = b * pow(2 * c, -1, p) % p
            return ctx(c, d)
    return None


def is_square(x: FieldElem) -> bool:
    """Euler's criterion; over F_{p^2} applied to the norm a^2 - nu b^2."""
    ctx = x.ctx
    if ctx.l == 1:
        return legendre(x.x, ctx.p) >= 0
    return legendre(x.x * x.x - ctx.nu * x.y * x.y, ctx.p) >= 0
