import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdt.errors import CapacityError, ContractViolation, CorruptArtifact, InvalidArgument
from mdt.filters import (BloomFilter, CountingBloomFilter, QuotientFilter, bloom_params,
                         cbf_counter_bits, cbf_params, dump_filter, load_filter,
                         longest_cluster_bound, qf_params, reference_layout)


def test_bloom_params():
    assert bloom_params(10 ** 7, 0.1) == (3, 48_100_000)
    assert bloom_params(1, 0.5) == (1, 2)
    k, M = bloom_params(10 ** 7, 0.1, exact=True)
    assert k == 3 and 48_000_000 < M <= 48_100_000
    for bad in (0, 1, -0.1, 1.5):
        with pytest.raises(InvalidArgument):
            bloom_params(100, bad)


def test_bloom_basic():
    f = BloomFilter.for_capacity(1000, 0.05, seed=1)
    assert not any(x in f for x in range(100))
    f.add(b"x")
    assert b"x" in f


def test_bloom_no_false_negatives_and_fpr():
    f = BloomFilter.for_capacity(2000, 0.1, seed=4)
    keys = np.arange(2000, dtype=np.uint64) * np.uint64(7919)
    f.add_many(keys)
    assert f.contains_many(keys).all()
    fresh = np.arange(10 ** 6, 10 ** 6 + 20000, dtype=np.uint64)
    assert f.contains_many(fresh).mean() <= 0.15


def test_cbf_params_and_counter_bits():
    k, M, t = cbf_params(10 ** 7, 0.1, 1e-4)
    assert (k, M) == (3, 48_100_000)
    f = CountingBloomFilter(M // 1000, k, 4)  # small stand-in for the bit count
    assert f.measured_space_bits() == (M // 1000) * 4
    assert M * 4 / 8 / 2 ** 20 == pytest.approx(22.92, rel=1e-3)
    assert cbf_counter_bits(0.1, 0.999999) == 2


def test_cbf_add_remove():
    f = CountingBloomFilter.for_capacity(500, 0.05, seed=2)
    f.add("x")
    assert "x" in f
    f.remove("x")
    assert "x" not in f
    with pytest.raises(ContractViolation):
        f.remove("never")


def test_cbf_saturation_is_sticky():
    f = CountingBloomFilter(16, 1, t=2, seed=0)
    for _ in range(10):
        f.add("k")
    for _ in range(10):
        f.remove("k")
    assert "k" in f  # a saturated counter never goes back down


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 60)), max_size=200))
def test_cbf_never_false_negative(ops):
    f = CountingBloomFilter(64, 3, t=4, seed=9)
    live = Counter()
    for add, key in ops:
        if add or not live[key]:
            f.add(key)
            live[key] += 1
        else:
            f.remove(key)
            live[key] -= 1
        assert all(k in f for k, c in live.items() if c)


def test_qf_params():
    assert qf_params(1000, 1 / 256, 0.5) == (11, 8)
    with pytest.raises(InvalidArgument):
        qf_params(1000, 0.01, 0.3)


def test_qf_basic_and_capacity():
    f = QuotientFilter(4, 6, seed=1)
    assert "a" not in f
    f.add("a")
    assert "a" in f
    f.remove("a")
    assert "a" not in f
    with pytest.raises(ContractViolation):
        f.remove("a")
    g = QuotientFilter(3, 4, seed=1)
    with pytest.raises(CapacityError):
        for i in range(100):
            g.add(i)
    assert g.count == g.limit


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 6), st.lists(st.tuples(st.booleans(), st.integers(0, 40), st.integers(0, 7)),
                                   max_size=80))
def test_qf_matches_reference_layout(q, ops):
    f = QuotientFilter(q, 3, max_load=0.95)
    fq_max = (1 << q) - 1
    live = Counter()
    for add, fq, fr in ops:
        fq &= fq_max
        if add:
            if f.count >= f.limit:
                continue
            f.insert_fp(fq, fr)
            live[(fq, fr)] += 1
        elif live[(fq, fr)]:
            f.remove_fp(fq, fr)
            live[(fq, fr)] -= 1
        f.check()
        assert f.slots.tolist() == reference_layout(q, +live)
        for (a, b), c in live.items():
            assert f.contains_fp(a, b) == bool(c)
    assert sorted(f.entries()) == sorted((+live).elements())


def test_qf_space_and_cluster_bound():
    f = QuotientFilter(10, 8)
    assert f.measured_space_bits() == 2 ** 10 * 11
    assert longest_cluster_bound(10, 0.5) > 0


@pytest.mark.parametrize("make", [
    lambda: BloomFilter(1000, 3, seed=5),
    lambda: CountingBloomFilter(1000, 3, 4, seed=5),
    lambda: QuotientFilter(8, 7, seed=5),
])
def test_filter_serialization(make):
    f = make()
    rng = random.Random(1)
    keys = [rng.getrandbits(64) for _ in range(100)]
    for k in keys:
        f.add(k)
    g = load_filter(dump_filter(f))
    probe = keys + [rng.getrandbits(64) for _ in range(500)]
    assert [k in g for k in probe] == [k in f for k in probe]
    data = dump_filter(f)
    with pytest.raises(CorruptArtifact):
        load_filter(b"MDTX" + data[4:])
    with pytest.raises(CorruptArtifact):
        load_filter(data[:-1])
