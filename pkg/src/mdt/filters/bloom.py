"""Bloom filter and counting Bloom filter."""
from __future__ import annotations

import math

import numpy as np

from ..errors import ContractViolation, InvalidArgument
from ..hashing import derive_seeds, mix64, as_key
from ..succinct.bits import MutablePackedArray

_U64 = np.uint64


def _fpr(m, k, M):
    return (1.0 - math.exp(-m * k / M)) ** k


def _round_up_sig(x: int, digits: int) -> int:
    step = 10 ** max(0, len(str(x)) - digits)
    return -(-x // step) * step


def bloom_params(m: int, delta: float, exact: bool = False) -> tuple[int, int]:
    """Pick (k, M) for m keys and target false-positive rate delta.

    k is the integer nearest log2(1/delta).  The smallest M meeting the
    approximate rate (1 - e^{-mk/M})^k <= delta is found by binary search;
    unless ``exact`` is set it is then rounded *up* to three significant
    digits, which is how sizes are usually quoted (48,083,274 -> 48,100,000).
    Rounding up only lowers the rate.
    """
    if m < 1:
        raise InvalidArgument("m must be >= 1")
    if not 0 < delta < 1:
        raise InvalidArgument("delta must be in (0, 1)")
    k = max(1, round(math.log2(1 / delta)))
    lo, hi = 1, 2
    while _fpr(m, k, hi) > delta:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if _fpr(m, k, mid) <= delta:
            hi = mid
        else:
            lo = mid + 1
    return k, lo if exact else _round_up_sig(lo, 3)


def cbf_counter_bits(delta: float, gamma: float) -> int:
    if not (0 < delta < 1 and 0 < gamma < 1):
        raise InvalidArgument("delta and gamma must be in (0, 1)")
    x = math.log2(1 / delta) / gamma
    if x <= 2:  # loglog would be <= 0 (or undefined)
        return 2
    return max(2, math.ceil(math.log2(math.log2(x))))


def cbf_params(m: int, delta: float, gamma: float, exact: bool = False) -> tuple[int, int, int]:
    t = cbf_counter_bits(delta, gamma)
    k, M = bloom_params(m, delta, exact)
    return k, M, t


def overflow_bound(k: int, t: int) -> float:
    """Per-query bound on a false negative caused by a saturated counter."""
    return k * 0.5 ** (2 ** t)


class _KHashes:
    """k independently seeded 64-bit mixers reduced to [0, M)."""

    def __init__(self, k: int, M: int, seed: int):
        self.k, self.M, self.seed = k, M, seed
        self.seeds = derive_seeds(seed, k)

    def positions(self, key) -> list[int]:
        x = as_key(key)
        return [mix64(x, s) % self.M for s in self.seeds]

    def positions_many(self, keys) -> np.ndarray:
        xs = np.asarray(keys, dtype=_U64)
        return np.stack([mix64(xs, s) % _U64(self.M) for s in self.seeds])


class BloomFilter:
    def __init__(self, M: int, k: int, seed: int = 0, capacity: int | None = None):
        if M < 1 or k < 1:
            raise InvalidArgument("M and k must be positive")
        self.M, self.k, self.seed = int(M), int(k), int(seed)
        self.capacity = capacity
        self.inserted = 0
        self._h = _KHashes(self.k, self.M, self.seed)
        self.words = np.zeros(self.M // 64 + 1, dtype=_U64)

    @classmethod
    def for_capacity(cls, m: int, delta: float, seed: int = 0, exact: bool = False):
        k, M = bloom_params(m, delta, exact)
        return cls(M, k, seed, capacity=m)

    @property
    def over_capacity(self) -> bool:
        """True once more keys went in than the filter was sized for."""
        return self.capacity is not None and self.inserted > self.capacity

    def add(self, key):
        for p in self._h.positions(key):
            self.words[p >> 6] |= _U64(1 << (63 - (p & 63)))
        self.inserted += 1

    insert = add

    def __contains__(self, key) -> bool:
        w = self.words
        for p in self._h.positions(key):
            if not int(w[p >> 6]) >> (63 - (p & 63)) & 1:
                return False
        return True

    contains = __contains__

    # bulk versions for integer keys
    def add_many(self, keys):
        pos = self._h.positions_many(keys).ravel()
        np.bitwise_or.at(self.words, (pos >> _U64(6)).astype(np.int64),
                         _U64(1) << (_U64(63) - (pos & _U64(63))))
        self.inserted += len(keys)

    def contains_many(self, keys) -> np.ndarray:
        pos = self._h.positions_many(keys)
        bits = (self.words[(pos >> _U64(6)).astype(np.int64)] >> (_U64(63) - (pos & _U64(63)))) & _U64(1)
        return bits.all(axis=0)

    def fill_ratio(self) -> float:
        return int(np.bitwise_count(self.words).sum()) / self.M

    def measured_space_bits(self) -> int:
        return self.M


class CountingBloomFilter:
    """Bloom filter with t-bit counters; supports removal.

    Counters saturate at 2^t - 1 and then stay there: a stuck counter can
    only cause false positives, never false negatives.
    """

    def __init__(self, M: int, k: int, t: int = 4, seed: int = 0, capacity: int | None = None):
        if M < 1 or k < 1 or not 1 <= t <= 64:
            raise InvalidArgument("bad counting filter parameters")
        self.M, self.k, self.t, self.seed = int(M), int(k), int(t), int(seed)
        self.capacity = capacity
        self.inserted = 0
        self.saturations = 0
        self.cmax = (1 << t) - 1
        self._h = _KHashes(self.k, self.M, self.seed)
        self.counters = MutablePackedArray(self.M, self.t)

    @classmethod
    def for_capacity(cls, m, delta, t=None, gamma=None, seed=0, exact=False):
        k, M = bloom_params(m, delta, exact)
        if t is None:
            t = cbf_counter_bits(delta, gamma if gamma is not None else 1e-4)
        return cls(M, k, t, seed, capacity=m)

    def add(self, key):
        c = self.counters
        for p in self._h.positions(key):
            v = c.get(p)
            if v < self.cmax:
                c.set(p, v + 1)
            else:
                self.saturations += 1
        self.inserted += 1

    insert = add

    def remove(self, key):
        c = self.counters
        pos = self._h.positions(key)
        # check everything first so a failed removal leaves no trace
        need = {}
        for p in pos:
            need[p] = need.get(p, 0) + 1
        for p, cnt in need.items():
            v = c.get(p)
            if v != self.cmax and v < cnt:
                raise ContractViolation(f"removing a key that is not present (counter {p} is {v})")
        for p in pos:
            v = c.get(p)
            if v != self.cmax:
                c.set(p, v - 1)
        self.inserted -= 1

    def __contains__(self, key) -> bool:
        c = self.counters
        return all(c.get(p) for p in self._h.positions(key))

    contains = __contains__

    def measured_space_bits(self) -> int:
        return self.counters.space_bits()

    def space_mib(self) -> float:
        return self.measured_space_bits() / 8 / 2 ** 20


def bloom_insert(f, x):
    f.add(x)


def bloom_contains(f, x) -> bool:
    return x in f


def cbf_insert(f, x):
    f.add(x)


def cbf_remove(f, x):
    f.remove(x)


def cbf_contains(f, x) -> bool:
    return x in f
