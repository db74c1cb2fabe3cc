"""Streaming matching with up to k mismatches via prime shifts.

For a prime d, shift i of a string keeps every d-th character starting at
offset i.  Two aligned strings at Hamming distance h differ in at most h of
their d shifts, and in exactly h of them when d divides no difference of two
mismatch positions.  Taking enough primes >= k+1 guarantees such a d exists
for any k+1 mismatches, so an alignment is accepted iff every prime sees at
most k mismatching shifts.

Each (prime d, residue class rho, shift i) gets its own exact streaming
matcher over the sub-stream of positions congruent to rho mod d.
"""
from __future__ import annotations

import math

from ..errors import InvalidArgument
from ..hashing import RabinContext, is_prime
from .kr import KrMatcher
from .pp import PpMatcher


def prime_shift_set(k: int, n: int) -> list[int]:
    """Smallest primes >= k+1 whose log2-sum exceeds (k+1)^2 log2 n."""
    if k < 1 or n < 2:
        raise InvalidArgument("need k >= 1 and n >= 2")
    need = (k + 1) ** 2 * math.log2(n)
    out, total, p = [], 0.0, k + 1
    while total <= need:
        if is_prime(p):
            out.append(p)
            total += math.log2(p)
        p += 1
    return out


class _Single:
    """Exact matcher for a length-1 shift: a byte comparison."""

    __slots__ = ("c",)

    def __init__(self, pattern):
        self.c = pattern[0]

    def push(self, c):
        return c == self.c


class KMismatchMatcher:
    def __init__(self, pattern: bytes, k: int, ctx: RabinContext, engine: str = "pp"):
        pattern = bytes(pattern)
        if not pattern:
            raise InvalidArgument("empty pattern")
        if k < 0:
            raise InvalidArgument("k must be >= 0")
        if engine not in ("pp", "kr"):
            raise InvalidArgument("engine must be 'pp' or 'kr'")
        self.n, self.k, self.j = len(pattern), k, 0
        make = PpMatcher if engine == "pp" else KrMatcher
        if k == 0 or self.n == 1:
            # plain exact matching (a single byte needs no machinery either)
            self.primes = []
            self._first = pattern[0]
            self._exact = make(pattern, ctx) if k == 0 else None
            self._tally = None
            return
        self._exact = None
        self.primes = prime_shift_set(k, self.n)
        self.span = max(self.primes)
        n = self.n
        # matchers[d_idx][rho] = list of (matcher, delay) for shifts i = 0..min(d,n)-1;
        # delay = n-1 - offset of the shift's last character in the pattern
        self._m = []
        self._shifts = []
        for d in self.primes:
            shifts = []
            for i in range(min(d, n)):
                sub = pattern[i::d]
                last = i + (len(sub) - 1) * d
                shifts.append((sub, n - 1 - last))
            self._shifts.append(shifts)
            per_res = []
            for _rho in range(d):
                per_res.append([(make(sub, ctx) if len(sub) > 1 else _Single(sub), delay)
                                for sub, delay in shifts])
            self._m.append(per_res)
        # matched-shift tallies for upcoming alignment ends, one ring per prime
        self._tally = [[0] * self.span for _ in self.primes]

    def push(self, c: int):
        """Feed one byte; returns (end position, mismatches) or None."""
        self.j += 1
        j = self.j
        if self._tally is None:
            if self._exact is None:  # n == 1, k >= 1: every byte is an alignment
                return (j, int(c != self._first))
            return (j, 0) if self._exact.push(c) else None
        span = self.span
        for di, d in enumerate(self.primes):
            ring = self._tally[di]
            for matcher, delay in self._m[di][j % d]:
                if matcher.push(c):
                    ring[(j + delay) % span] += 1
        if j < self.n:
            for ring in self._tally:
                ring[j % span] = 0
            return None
        worst = 0
        ok = True
        for di, d in enumerate(self.primes):
            ring = self._tally[di]
            mism = min(d, self.n) - ring[j % span]
            ring[j % span] = 0
            if mism > self.k:
                ok = False
            worst = max(worst, mism)
        return (j, worst) if ok else None

    def feed(self, data: bytes):
        for c in data:
            r = self.push(c)
            if r is not None:
                yield r

    def matcher_count(self) -> int:
        if self._tally is None:
            return 1
        return sum(len(m) for res in self._m for m in res)


def km_push(m: KMismatchMatcher, c: int):
    return m.push(c)
