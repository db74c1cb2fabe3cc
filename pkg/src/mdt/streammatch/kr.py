"""Karp-Rabin streaming matcher and naive reference matchers."""
from __future__ import annotations

from ..errors import InvalidArgument
from ..hashing import RabinContext


def naive_occurrence_ends(pattern: bytes, stream: bytes) -> list[int]:
    """1-based end positions of every (overlapping) occurrence."""
    n = len(pattern)
    return [i + n for i in range(len(stream) - n + 1) if stream[i:i + n] == pattern]


def naive_hamming_ends(pattern: bytes, stream: bytes, k: int) -> list[tuple[int, int]]:
    """(end position, mismatches) of every alignment with at most k mismatches."""
    n = len(pattern)
    out = []
    for i in range(len(stream) - n + 1):
        d = sum(a != b for a, b in zip(stream[i:i + n], pattern))
        if d <= k:
            out.append((i + n, d))
    return out


class KrMatcher:
    """Keeps the last n stream bytes and the fingerprint of that window."""

    def __init__(self, pattern: bytes, ctx: RabinContext):
        pattern = bytes(pattern)
        if not pattern:
            raise InvalidArgument("empty pattern")
        self.ctx = ctx
        self.n = len(pattern)
        self.pattern_fp = ctx.of(pattern).value
        self.z_pow_nm1 = ctx.power(self.n - 1)
        self.window = bytearray(self.n)  # ring buffer
        self.window_fp = ctx.empty
        self.j = 0
        self.occ = 0

    def push(self, c: int) -> bool:
        """Feed one byte; True if an occurrence ends here."""
        slot = self.j % self.n
        if self.j < self.n:
            self.window_fp = self.ctx.append(self.window_fp, c)
        else:
            self.window_fp = self.ctx.slide(self.window_fp, self.window[slot], c, self.z_pow_nm1)
        self.window[slot] = c
        self.j += 1
        hit = self.j >= self.n and self.window_fp.value == self.pattern_fp
        self.occ += hit
        return hit

    def feed(self, data: bytes):
        """Yield end positions of occurrences in ``data``."""
        for c in data:
            if self.push(c):
                yield self.j

    def window_bytes(self) -> bytes:
        if self.j < self.n:
            return bytes(self.window[: self.j])
        s = self.j % self.n
        return bytes(self.window[s:] + self.window[:s])


def kr_push(m: KrMatcher, c: int) -> bool:
    return m.push(c)
