"""Banded locality-sensitive hashing on top of MinHash sketches.

An index with b bands of r rows needs sketches with at least r*b minima.
Band j looks at minima[j*r:(j+1)*r] (AND of r functions); an item is a
candidate if any band agrees (OR over b bands).
"""
from __future__ import annotations

import math
from typing import Callable

from ..errors import InvalidArgument
from ..hashing import MERSENNE61, rng_for
from .minhash import MinHashSketch


def lsh_scurve(d: float, r: int, b: int) -> float:
    """Probability that two items at Jaccard distance d share at least one band."""
    if not 0 <= d <= 1:
        raise InvalidArgument("distance must be in [0, 1]")
    if r < 1 or b < 1:
        raise InvalidArgument("r and b must be >= 1")
    p = (1.0 - d) ** r
    # 1 - (1-p)^b, written to stay accurate when p is tiny
    return -math.expm1(b * math.log1p(-p)) if p < 1 else 1.0


def lsh_fit_r(b: int, d_center: float) -> int:
    """Rows per band that put the middle of the s-curve near distance d_center."""
    if b < 1:
        raise InvalidArgument("b must be >= 1")
    if not 0 < d_center < 1:
        raise InvalidArgument("d_center must be strictly between 0 and 1")
    r = math.floor(math.log(1 - 2 ** (-1 / b)) / math.log(1 - d_center))
    return max(1, r)


class LshIndex:
    def __init__(self, r: int, b: int, seed: int = 0, candidate_budget: int | None = None):
        if r < 1 or b < 1:
            raise InvalidArgument("r and b must be >= 1")
        self.r, self.b = r, b
        self.candidate_budget = candidate_budget
        self.tables: list[dict[int, list]] = [dict() for _ in range(b)]
        self.store: dict = {}
        # band keys: polynomial combination of the r minima at a random point
        # mod 2^61-1; two different bands collide with prob <= r / 2^61
        self._z = int(rng_for(seed).integers(2, MERSENNE61))
        self.last_checked = 0
        self.last_truncated = False

    def _band_keys(self, sk: MinHashSketch):
        if sk.k < self.r * self.b:
            raise InvalidArgument(f"sketch has {sk.k} minima, index needs {self.r * self.b}")
        mins = sk.minima.tolist()
        z, P, r = self._z, MERSENNE61, self.r
        for j in range(self.b):
            acc = 0
            for v in mins[j * r:(j + 1) * r]:
                acc = (acc * z + v) % P
            yield acc

    def insert(self, item_id, sk: MinHashSketch):
        if item_id in self.store:
            raise InvalidArgument(f"id {item_id!r} already indexed")
        self.store[item_id] = sk
        for table, key in zip(self.tables, self._band_keys(sk)):
            table.setdefault(key, []).append(item_id)

    def candidates(self, sk: MinHashSketch):
        seen = set()
        for table, key in zip(self.tables, self._band_keys(sk)):
            for item in table.get(key, ()):
                if item not in seen:
                    seen.add(item)
                    yield item

    def query(self, sk: MinHashSketch, threshold: float,
              verifier: Callable | None = None):
        """First candidate whose verified distance is <= threshold, or None.

        ``verifier(query_sketch, item_id)`` returns a distance; by default the
        MinHash estimate 1 - J+ against the stored sketch is used.  At most
        ``candidate_budget`` candidates are verified; ``last_truncated``
        reports whether the budget cut the scan short.
        """
        if verifier is None:
            verifier = lambda q, item: 1.0 - q.jaccard(self.store[item])  # noqa: E731
        self.last_checked = 0
        self.last_truncated = False
        for item in self.candidates(sk):
            if self.candidate_budget is not None and self.last_checked >= self.candidate_budget:
                self.last_truncated = True
                return None
            self.last_checked += 1
            if verifier(sk, item) <= threshold:
                return item
        return None

    def __len__(self):
        return len(self.store)


def lsh_insert(ix: LshIndex, item_id, sk):
    ix.insert(item_id, sk)


def lsh_query(ix: LshIndex, sk, threshold, verifier=None):
    return ix.query(sk, threshold, verifier)
