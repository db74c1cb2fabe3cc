"""Approximate counting: Morris counter, distinct-element estimators, boosting."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import InvalidArgument
from ..hashing import MERSENNE61, PolyHash, as_key, keys_array, rng_for

MORRIS_CAP = 63


class MorrisCounter:
    """Counts to m in O(log log m) bits: X goes up with probability 2^-X."""

    def __init__(self, seed: int = 0, x: int = 0):
        self.seed = seed
        self.x = x
        self.saturated = x >= MORRIS_CAP
        self._rng = rng_for(seed)

    def tick(self):
        if self.x >= MORRIS_CAP:
            self.saturated = True
            return
        u = int(self._rng.integers(0, 1 << 64, dtype=np.uint64))
        # u < 2^(64-X) exactly with probability 2^-X
        if u >> (64 - self.x) == 0:
            self.x += 1

    def add(self, n: int):
        """n ticks at once.

        Same distribution as calling tick() n times: at level X the number of
        ticks up to and including the next increment is geometric with
        success probability 2^-X, so we jump straight to it.
        """
        while n > 0:
            if self.x >= MORRIS_CAP:
                self.saturated = True
                return
            wait = int(self._rng.geometric(2.0 ** -self.x))
            if wait > n:
                return
            n -= wait
            self.x += 1

    def estimate(self) -> float:
        return float(2 ** self.x - 1)


def morris_tick(c: MorrisCounter):
    c.tick()


def morris_estimate(c: MorrisCounter) -> float:
    return c.estimate()


# ---------------------------------------------------------------- boosting

def lower_median(values):
    v = sorted(values)
    if not v:
        raise InvalidArgument("median of nothing")
    return v[(len(v) - 1) // 2]


def median_copies(delta: float) -> int:
    if not 0 < delta < 1:
        raise InvalidArgument("delta must be in (0, 1)")
    return math.ceil(72 * math.log(1 / delta))


def mean_copies(eps: float, rel_variance: float) -> int:
    """Copies to average so one group mean is eps-accurate w.p. >= 2/3.

    ``rel_variance`` is Var[X] / E[X]^2 of a single estimator.
    """
    if eps <= 0:
        raise InvalidArgument("eps must be positive")
    return max(1, math.ceil(3 * rel_variance / eps ** 2))


@dataclass
class BoostConfig:
    epsilon: float
    delta: float
    s: int
    t: int

    @classmethod
    def for_estimator(cls, epsilon: float, delta: float, rel_variance: float) -> "BoostConfig":
        return cls(epsilon, delta, mean_copies(epsilon, rel_variance), median_copies(delta))

    @classmethod
    def morris(cls, epsilon: float, delta: float) -> "BoostConfig":
        # Var[2^X - 1] <= m^2 / 2, so s = 3 / (2 eps^2)
        return cls.for_estimator(epsilon, delta, 0.5)


def mean_median(values, s: int, t: int) -> float:
    """Median (lower middle) of t means over consecutive groups of s values."""
    values = list(values)
    if len(values) != s * t:
        raise InvalidArgument(f"expected {s * t} values, got {len(values)}")
    means = [sum(values[i * s:(i + 1) * s]) / s for i in range(t)]
    return lower_median(means)


class Boosted:
    """s*t independent copies of an estimator behind one interface.

    ``factory(seed)`` must return an object with an ``estimate()`` method;
    copy i gets seed derived from (base seed, i) so copies are independent.
    Updates are forwarded with :meth:`apply`.
    """

    def __init__(self, factory: Callable, cfg: BoostConfig, seed: int = 0):
        self.cfg = cfg
        seeds = rng_for(seed).integers(0, 1 << 62, size=cfg.s * cfg.t)
        self.instances = [factory(int(sd)) for sd in seeds]

    def apply(self, method: str, *args):
        for inst in self.instances:
            getattr(inst, method)(*args)

    def estimate(self) -> float:
        return mean_median([i.estimate() for i in self.instances], self.cfg.s, self.cfg.t)


def boost_mean_median(factory: Callable, cfg: BoostConfig, seed: int = 0) -> Boosted:
    return Boosted(factory, cfg, seed)


# ---------------------------------------------------------- distinct counts

def bottom_k_size(eps: float) -> int:
    if not 0 < eps < 1:
        raise InvalidArgument("eps must be in (0, 1)")
    return math.ceil(24 / eps ** 2)


class DistinctCounter:
    """Bottom-k estimator: keep the k smallest distinct hash values.

    Hashes are (a x + b) mod M with M = 2^61 - 1 by default, which is
    collision-free with high probability for up to ~2^15 distinct keys under
    the M >= n^4 rule; pass a different prime ``modulus`` if needed.  Integer
    hash values are stored, so a repeated key is recognised exactly.
    """

    def __init__(self, k: int | None = None, seed: int = 0, eps: float | None = None,
                 modulus: int = MERSENNE61):
        if k is None:
            if eps is None:
                raise InvalidArgument("give k or eps")
            k = bottom_k_size(eps)
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        self.k, self.seed = int(k), int(seed)
        self.hash = PolyHash.random(2, modulus, seed, nonzero_lead=True)
        self._heap: list[int] = []  # negated values: a max-heap
        self._set: set[int] = set()

    @property
    def M(self):
        return self.hash.M

    def offer(self, key):
        v = self.hash(as_key(key))
        if v in self._set:
            return
        if len(self._heap) < self.k:
            heapq.heappush(self._heap, -v)
            self._set.add(v)
        elif v < -self._heap[0]:
            old = -heapq.heapreplace(self._heap, -v)
            self._set.discard(old)
            self._set.add(v)

    def offer_many(self, keys):
        vals = np.unique(self.hash.eval_many(keys_array(keys)))
        vals = vals[: self.k].tolist()
        merged = sorted(self._set.union(vals))[: self.k]
        self._set = set(merged)
        self._heap = [-v for v in merged]
        heapq.heapify(self._heap)

    def values(self) -> list[int]:
        return sorted(self._set)

    def estimate(self) -> float:
        if len(self._heap) < self.k:
            return float(len(self._heap))  # fewer than k distinct: exact
        y_k = -self._heap[0] / self.M
        return self.k / y_k


def distinct_offer(c: DistinctCounter, x):
    c.offer(x)


def distinct_estimate(c: DistinctCounter) -> float:
    return c.estimate()


def fm_single_estimate(stream, seed: int = 0, modulus: int = MERSENNE61) -> float:
    """1/y - 1 where y is the smallest unit hash seen."""
    h = PolyHash.random(2, modulus, seed, nonzero_lead=True)
    keys = keys_array(stream)
    if keys.size == 0:
        raise InvalidArgument("empty stream")
    y = int(h.eval_many(keys).min()) / h.M
    if y == 0:
        return math.inf
    return 1 / y - 1

