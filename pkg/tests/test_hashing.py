import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mdt.errors import InvalidArgument, NotFound
from mdt.hashing import (MERSENNE61, PolyHash, RabinContext, RangeHash, as_key, gen_prime,
                         is_prime, mix64, mulmod, next_prime, poly_eval, rabin_append,
                         rabin_concat, rabin_of, rabin_slide, range_eval, rng_for, unit_hash)


def trial_division(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def test_is_prime_small():
    assert [n for n in range(200) if is_prime(n)] == [n for n in range(200) if trial_division(n)]


def test_gen_prime():
    assert gen_prime(8, 16, rng_for(1)) in (11, 13)
    with pytest.raises(NotFound):
        gen_prime(14, 16, rng_for(1))
    p = gen_prime(2 ** 31, 2 ** 32, rng_for(7))
    assert 2 ** 31 <= p <= 2 ** 32
    assert all(p % d for d in range(2, 2 ** 16))
    assert next_prime(MERSENNE61) == MERSENNE61


def test_poly_and_range_hash():
    h = PolyHash((3, 5), 7)
    assert poly_eval(h, 2) == 6
    assert range_eval(RangeHash(3, 1, 13, 4), 5) == 3
    assert unit_hash(PolyHash((0, 1), 13), 0) == 0.0
    assert unit_hash(PolyHash((0, 1), 13), 12) == 12 / 13
    with pytest.raises(InvalidArgument):
        PolyHash((1, 2), 8)


def test_range_family_collision_rate():
    M, m = 13, 4
    pairs = [(x1, x2) for x1 in range(M) for x2 in range(M) if x1 != x2]
    for x1, x2 in pairs[::7]:
        coll = sum(RangeHash(a, b, M, m)(x1) == RangeHash(a, b, M, m)(x2)
                   for a in range(1, M) for b in range(M))
        assert coll / ((M - 1) * M) <= 1 / m


@given(st.lists(st.integers(0, 2 ** 64 - 1), min_size=1, max_size=30),
       st.lists(st.integers(0, 2 ** 64 - 1), min_size=1, max_size=30))
def test_mulmod_matches_python(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    for M in (MERSENNE61, next_prime(2 ** 62), next_prime(2 ** 40), 4294967291, 1000003, 13):
        got = mulmod(np.array(a, dtype=np.uint64) % np.uint64(M),
                     np.array(b, dtype=np.uint64) % np.uint64(M), M)
        assert got.tolist() == [(x % M) * (y % M) % M for x, y in zip(a, b)]


@given(st.lists(st.integers(0, 2 ** 40), min_size=1, max_size=20))
def test_poly_eval_many(xs):
    h = PolyHash.random(4, MERSENNE61, seed=3)
    assert h.eval_many(np.array(xs, dtype=np.uint64)).tolist() == [h(x) for x in xs]


def test_keys_are_stable():
    assert as_key(b"abc") == as_key("abc")
    assert as_key(5) == 5
    assert mix64(np.array([1, 2], dtype=np.uint64)).tolist() == [mix64(1), mix64(2)]


def test_rabin_basics():
    ctx = RabinContext(101, 7, max_len=8)
    assert tuple(rabin_of(ctx, bytes([1, 2]))) == (9, 49)
    assert tuple(ctx.empty) == (0, 1)


@given(st.binary(max_size=40), st.binary(max_size=40), st.integers(0, 255))
def test_rabin_algebra(x, y, c):
    ctx = RabinContext.random(5, m_max=1000, max_len=64)
    assert rabin_concat(ctx, rabin_of(ctx, x), rabin_of(ctx, y)) == rabin_of(ctx, x + y)
    assert rabin_append(ctx, rabin_of(ctx, x), c) == rabin_of(ctx, x + bytes([c]))
    if x:
        z = ctx.power(len(x) - 1)
        assert rabin_slide(ctx, rabin_of(ctx, x), x[0], c, z) == rabin_of(ctx, x[1:] + bytes([c]))


def test_rabin_prime_range():
    ctx = RabinContext.random(0, m_max=100)
    assert 100 ** 3 <= ctx.q <= 2 * 100 ** 3
    assert is_prime(ctx.q) and 1 <= ctx.z < ctx.q
    for i in range(len(ctx.pow2)):
        assert ctx.pow2[i] * ctx.inv_pow2[i] % ctx.q == 1


def test_rabin_distinguishes_short_strings():
    ctx = RabinContext.random(2, m_max=64, max_len=4)
    seen = {}
    for s in itertools.product(range(4), repeat=4):
        fp = rabin_of(ctx, bytes(s)).value
        assert fp not in seen
        seen[fp] = s
