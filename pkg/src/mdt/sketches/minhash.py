"""MinHash sketches, Jaccard estimation and Hamming-distance sampling."""
from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidArgument
from ..hashing import MERSENNE61, addmod, keys_array, mix64, mulmod, rng_for

_U64 = np.uint64
_CHUNK = 1 << 21  # max (functions x keys) cells evaluated at once


def minhash_k(eps: float, delta: float) -> int:
    """Number of hash functions so that |J+ - J| <= eps with prob. >= 1 - delta."""
    if not (0 < eps < 1 and 0 < delta < 1):
        raise InvalidArgument("eps and delta must be in (0, 1)")
    return math.ceil(2 * math.log(2 / delta) / eps ** 2)


class MinHashSketch:
    """k minima, one per pairwise-independent hash (a_i x + b_i) mod 2^61-1.

    Minima are kept as integers in [0, M); divide by M for the unit-interval
    view.  An empty set has all minima equal to M (larger than any hash).
    """

    M = MERSENNE61

    def __init__(self, k: int, seed: int, minima=None):
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        self.k, self.seed = int(k), int(seed)
        rng = rng_for(seed)
        self._a = rng.integers(1, self.M, size=k, dtype=np.int64).astype(_U64)
        self._b = rng.integers(0, self.M, size=k, dtype=np.int64).astype(_U64)
        if minima is None:
            self.minima = np.full(k, self.M, dtype=_U64)
        else:
            self.minima = np.asarray(minima, dtype=_U64).copy()
            if self.minima.shape != (k,):
                raise InvalidArgument("minima must have length k")

    @classmethod
    def build(cls, keys, k: int, seed: int = 0) -> "MinHashSketch":
        s = cls(k, seed)
        xs = keys_array(keys)
        if xs.size == 0:
            raise InvalidArgument("MinHash of an empty set")
        s.update(xs)
        return s

    def update(self, keys):
        # a fixed bijective pre-mix: linear hashes are poor min-wise hashes on
        # structured inputs such as runs of consecutive integers
        xs = mix64(keys_array(keys)) % _U64(self.M)
        step = max(1, _CHUNK // self.k)
        for lo in range(0, xs.size, step):
            x = xs[lo:lo + step][None, :]
            h = addmod(mulmod(self._a[:, None], x, self.M), self._b[:, None], self.M)
            np.minimum(self.minima, h.min(axis=1), out=self.minima)

    def unit_minima(self) -> np.ndarray:
        return self.minima.astype(np.float64) / self.M

    def compatible(self, other) -> bool:
        return isinstance(other, MinHashSketch) and (self.k, self.seed) == (other.k, other.seed)

    def _need(self, other):
        if not self.compatible(other):
            raise InvalidArgument("sketches were built with different k or seed")

    def merge(self, other) -> "MinHashSketch":
        self._need(other)
        return MinHashSketch(self.k, self.seed, np.minimum(self.minima, other.minima))

    def jaccard(self, other) -> float:
        self._need(other)
        return float(np.count_nonzero(self.minima == other.minima)) / self.k

    def __eq__(self, other):
        return self.compatible(other) and bool(np.array_equal(self.minima, other.minima))


def minhash_build(keys, k: int, seed: int = 0) -> MinHashSketch:
    return MinHashSketch.build(keys, k, seed)


def minhash_merge(s1: MinHashSketch, s2: MinHashSketch) -> MinHashSketch:
    return s1.merge(s2)


def jaccard_estimate(s1: MinHashSketch, s2: MinHashSketch) -> float:
    return s1.jaccard(s2)


def jaccard_exact(a, b) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def hamming_estimate(x, y, k: int, seed: int = 0) -> float:
    """Fraction of k uniformly sampled positions (with replacement) where x and y differ."""
    if len(x) != len(y):
        raise InvalidArgument("strings must have equal length")
    if len(x) == 0:
        raise InvalidArgument("strings must be non-empty")
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    xa, ya = np.asarray(_seq(x)), np.asarray(_seq(y))
    idx = rng_for(seed).integers(0, len(xa), size=k)
    return float(np.count_nonzero(xa[idx] != ya[idx])) / k


def _seq(s):
    if isinstance(s, str):
        return np.frombuffer(s.encode("latin-1"), dtype=np.uint8)
    if isinstance(s, (bytes, bytearray)):
        return np.frombuffer(bytes(s), dtype=np.uint8)
    return s
