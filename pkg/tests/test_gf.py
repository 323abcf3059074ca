import itertools

import pytest
from hypothesis import given, strategies as st

from ffetf.gf import (
    is_square,
    least_nonresidue,
    lift_int,
    make_field,
    sqrt,
    tonelli_shanks,
)

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23]


def brute_squares(p):
    return {x * x % p for x in range(p)}


def test_make_field_basic():
    f3 = make_field(3)
    assert f3.p == 3 and f3.l == 1 and f3.q == 3
    f25 = make_field(5, 2)
    assert f25.q == 25 and f25.nu == 2
    assert make_field(19).q == 19
    assert make_field(5) is make_field(5)


@pytest.mark.parametrize("p,l", [(2, 1), (9, 1), (1, 1), (5, 3), (15, 2)])
def test_make_field_rejects(p, l):
    with pytest.raises(ValueError):
        make_field(p, l)


def test_nu_is_a_nonresidue():
    for p in SMALL_PRIMES:
        nu = least_nonresidue(p)
        assert nu not in brute_squares(p)
        assert all(z in brute_squares(p) for z in range(1, nu))


def test_sqrt_examples():
    f11 = make_field(11)
    assert sqrt(f11(5)) == (f11(4), f11(7))
    assert sqrt(f11(0)) == (f11(0),)
    assert sqrt(make_field(5)(2)) is None


def test_lift_int_examples():
    assert lift_int(7, make_field(3)) == 1
    assert lift_int(-2, make_field(5)) == 3
    assert lift_int(14, make_field(7)).is_zero()


@pytest.mark.parametrize("p", SMALL_PRIMES + [97, 257, 65537, 1000003])
def test_tonelli_shanks_against_bruteforce(p):
    xs = range(p) if p < 300 else range(0, p, max(1, p // 500))
    sq = brute_squares(p) if p < 300 else None
    for x in xs:
        r = tonelli_shanks(x, p)
        if r is None:
            assert pow(x, (p - 1) // 2, p) == p - 1
            if sq is not None:
                assert x not in sq
        else:
            assert r * r % p == x


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_index_two_subgroup(p):
    # exactly one of x, nu*x is a square, in F_p and F_{p^2}
    for l in (1, 2):
        ctx = make_field(p, l)
        ns = ctx.nonsquare
        for x in ctx.elements():
            if x.is_zero():
                continue
            assert is_square(x) != is_square(ns * x)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_square_count_extension(p):
    ctx = make_field(p, 2)
    squares = {x * x for x in ctx.elements()}
    assert len(squares) == (ctx.q + 1) // 2
    for x in ctx.elements():
        assert is_square(x) == (x in squares)


@pytest.mark.parametrize("p,l", [(p, l) for p in (3, 5, 7, 13) for l in (1, 2)])
def test_sqrt_roundtrip_and_multiplicativity(p, l):
    ctx = make_field(p, l)
    elems = list(ctx.elements())
    for x in elems:
        r = sqrt(x)
        assert (r is not None) == is_square(x)
        if r is not None:
            assert all(y * y == x for y in r)
            assert len(r) == (1 if x.is_zero() else 2)
    for x, y in itertools.islice(itertools.product(elems, elems), 0, None, 3):
        if x.is_zero() or y.is_zero():
            continue
        assert is_square(x * y) == (is_square(x) == is_square(y))


def test_extension_field_arithmetic():
    ctx = make_field(7, 2)
    for x in ctx.elements():
        if not x.is_zero():
            assert x * x.inverse() == 1
            assert x ** (ctx.q - 1) == 1
    t = ctx(0, 1)
    assert t * t == ctx.nu


@given(st.sampled_from(SMALL_PRIMES), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_lift_int_is_ring_hom(p, a, b):
    ctx = make_field(p)
    assert lift_int(a + b, ctx) == lift_int(a, ctx) + lift_int(b, ctx)
    assert lift_int(a * b, ctx) == lift_int(a, ctx) * lift_int(b, ctx)


@given(st.sampled_from([3, 5, 7, 11]), st.integers(0, 10**4), st.integers(0, 10**4))
def test_parse_roundtrip(p, x, y):
    ctx = make_field(p, 2)
    e = ctx(x % p, y % p)
    assert ctx.parse(str(e)) == e
