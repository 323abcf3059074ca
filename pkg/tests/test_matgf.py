import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from ffetf.gf import is_square, make_field
from ffetf.graphs import petersen, seidel_matrix
from ffetf.matgf import (
    DiscriminantClass,
    IntMat,
    MatGF,
    det,
    discriminant_class,
    gram_factor,
    p_rank,
    parse_matrix,
    rank,
    read_matrix,
    write_matrix,
)

PRIMES = [3, 5, 7, 11, 13]


def sympy_rank_mod_p(a, p):
    """Oracle: sympy's exact rank over GF(p)."""
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    dm = DomainMatrix([[GF(p)(int(x)) for x in row] for row in np.asarray(a)], np.asarray(a).shape, GF(p))
    return dm.rank()


def random_symmetric(rng, ctx, n, r):
    """Random symmetric n x n matrix of rank <= r over ctx."""
    l, p = ctx.l, ctx.p
    y = MatGF(ctx, rng.integers(0, p, size=(l, r, n)))
    diag = [ctx(int(rng.integers(1, p)), int(rng.integers(0, p)) if l == 2 else 0) for _ in range(r)]
    return y.T @ MatGF.diag(ctx, diag) @ y


def test_rank_examples():
    for p in PRIMES:
        ctx = make_field(p)
        assert rank(MatGF.identity(ctx, 6)) == 6
    assert rank(MatGF.ones(make_field(5), 5)) == 1
    assert p_rank(IntMat(np.ones((9, 9), dtype=np.int64)), 3) == 1
    assert p_rank(IntMat(np.eye(7, dtype=np.int64)), 11) == 7


def test_p_rank_petersen():
    s = seidel_matrix(petersen()) + IntMat(3 * np.eye(10, dtype=np.int64))
    assert p_rank(s, 3) == 4


@pytest.mark.parametrize("p", PRIMES)
def test_rank_against_sympy(p):
    rng = np.random.default_rng(p)
    ctx = make_field(p)
    for _ in range(20):
        r, c = rng.integers(1, 12, size=2)
        a = rng.integers(0, p, size=(r, c))
        if rng.random() < 0.5:
            a[rng.integers(0, r)] = 0
        assert rank(MatGF.from_ints(ctx, a)) == sympy_rank_mod_p(a, p)


@pytest.mark.parametrize("p", PRIMES)
def test_det_against_sympy(p):
    rng = np.random.default_rng(100 + p)
    ctx = make_field(p)
    for _ in range(15):
        n = int(rng.integers(1, 7))
        a = rng.integers(0, p, size=(n, n))
        assert int(det(MatGF.from_ints(ctx, a))) == int(sympy.Matrix(a).det()) % p


def test_discriminant_examples():
    ctx = make_field(7)
    assert discriminant_class(MatGF.identity(ctx, 5)) is DiscriminantClass.SQUARE
    assert discriminant_class(MatGF.diag(ctx, [1, 1, 3])) is DiscriminantClass.NONSQUARE
    assert discriminant_class(MatGF.ones(make_field(5), 3)) is DiscriminantClass.SQUARE
    with pytest.raises(ValueError):
        discriminant_class(MatGF.zeros(ctx, 3))


def test_gram_factor_examples():
    ctx = make_field(3)
    x, m = gram_factor(MatGF.identity(ctx, 2))
    assert x.T @ m @ x == MatGF.identity(ctx, 2) and m == MatGF.identity(ctx, 2)
    x, m = gram_factor(MatGF.ones(ctx, 2))
    assert x.shape == (1, 2) and m == MatGF.identity(ctx, 1)
    assert x.T @ m @ x == MatGF.ones(ctx, 2)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("l", [1, 2])
def test_gram_factor_roundtrip(p, l):
    ctx = make_field(p, l)
    rng = np.random.default_rng(7 * p + l)
    for _ in range(12):
        n = int(rng.integers(1, 9))
        r = int(rng.integers(1, n + 1))
        g = random_symmetric(rng, ctx, n, r)
        if g.is_zero():
            continue
        x, m = gram_factor(g)
        assert x.T @ m @ x == g
        assert x.rows == rank(g) == rank(x)
        assert discriminant_class(m) == discriminant_class(g)
        ws = m.diagonal()
        assert all(w == 1 for w in ws[:-1])
        assert ws[-1] == 1 or ws[-1] == ctx.nonsquare


@pytest.mark.parametrize("p", PRIMES)
def test_discriminant_congruence_invariance(p):
    ctx = make_field(p)
    rng = np.random.default_rng(p)
    ns = ctx.nonsquare
    for _ in range(10):
        n = int(rng.integers(1, 7))
        g = random_symmetric(rng, ctx, n, n)
        if rank(g) != n:
            continue
        while True:
            pm = MatGF.from_ints(ctx, rng.integers(0, p, size=(n, n)))
            if rank(pm) == n:
                break
        assert discriminant_class(pm.T @ g @ pm) == discriminant_class(g)
        flipped = discriminant_class(g.scale(ns)) != discriminant_class(g)
        assert flipped == (n % 2 == 1)
        # the determinant oracle agrees on full-rank inputs
        want = DiscriminantClass.SQUARE if is_square(det(g)) else DiscriminantClass.NONSQUARE
        assert discriminant_class(g) == want


@given(
    st.sampled_from(PRIMES),
    st.integers(1, 8),
    st.integers(1, 8),
    st.integers(0, 2**32 - 1),
)
def test_rank_permutation_transpose_invariance(p, r, c, seed):
    rng = np.random.default_rng(seed)
    ctx = make_field(p)
    a = rng.integers(0, p, size=(r, c))
    base = rank(MatGF.from_ints(ctx, a))
    assert rank(MatGF.from_ints(ctx, a.T)) == base
    assert rank(MatGF.from_ints(ctx, a[rng.permutation(r)][:, rng.permutation(c)])) == base


@given(st.sampled_from(PRIMES), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_p_rank_bounded_by_rational_rank(p, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(n, n + 1))
    assert p_rank(IntMat(a), p) <= sympy.Matrix(a).rank()


def test_int64_promotion_on_large_entries():
    big = IntMat(np.full((3, 3), 2**40, dtype=np.int64))
    prod = big @ big
    assert int(prod.entries[0, 0]) == 3 * 2**80


def test_large_prime_uses_object_dtype():
    p = 2**31 - 1
    ctx = make_field(p)
    m = MatGF.from_ints(ctx, [[p - 1, 2], [3, p - 5]])
    assert m.comps.dtype == object
    assert int(det(m)) == ((p - 1) * (p - 5) - 6) % p
    assert rank(m) == 2


def test_matrix_io_roundtrip(tmp_path):
    ctx = make_field(5, 2)
    rng = np.random.default_rng(1)
    m = MatGF(ctx, rng.integers(0, 5, size=(2, 3, 4)))
    write_matrix(m, tmp_path / "m.txt")
    assert read_matrix(tmp_path / "m.txt") == m
    im = IntMat(np.array([[1, -1], [0, 7]]))
    assert parse_matrix(im.to_text()) == im


@pytest.mark.parametrize("text", ["", "3 1 2 2\n1 0\n", "3 1 x 2\n", "4 1 1 1\n0\n"])
def test_parse_matrix_rejects(text):
    with pytest.raises(ValueError):
        parse_matrix(text)
