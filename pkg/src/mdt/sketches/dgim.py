"""Counting 1-bits (and summing small integers) over a sliding window.

Groups of 2^k one-bits are identified by the timestamp of their newest bit.
``levels[k]`` holds the groups of size 2^k, newest first, so reading the
levels in order walks the stream from the head into the past.  Timestamps
are stored modulo 2W; only groups that still touch the last W bits are kept,
so the age of any stored group is below W and the modular difference is
unambiguous.
"""
from __future__ import annotations

import math
from collections import deque

from ..errors import InvalidArgument


class DgimWindow:
    def __init__(self, window: int, eps: float):
        if window < 1:
            raise InvalidArgument("window must be >= 1")
        if not 0 < eps <= 1:
            raise InvalidArgument("eps must be in (0, 1]")
        self.W = int(window)
        self.eps = eps
        self.B = math.ceil(1 / eps)
        self.levels: list[deque] = []
        self.clock = 0  # number of bits pushed so far
        self._mod = 2 * self.W

    # ages: the newest bit has age 0
    def _age(self, stamp: int) -> int:
        return (self.clock - 1 - stamp) % self._mod

    def push(self, bit: int):
        if bit not in (0, 1):
            raise InvalidArgument("bit must be 0 or 1")
        now = self.clock % self._mod
        self.clock += 1
        if bit:
            if not self.levels:
                self.levels.append(deque())
            self.levels[0].appendleft(now)
            k = 0
            while len(self.levels[k]) == self.B + 2:
                # merge the two oldest groups of this size; the merged group
                # ends where the newer of the two ended
                self.levels[k].pop()
                newer = self.levels[k].pop()
                if k + 1 == len(self.levels):
                    self.levels.append(deque())
                self.levels[k + 1].appendleft(newer)
                k += 1
        self._expire()

    def _expire(self):
        while self.levels:
            top = self.levels[-1]
            while top and self._age(top[-1]) >= self.W:
                top.pop()
            if top:
                break
            self.levels.pop()

    def groups(self) -> list[tuple[int, int]]:
        """(age of newest bit, size) for every group, newest first."""
        return [(self._age(s), 1 << k) for k, lv in enumerate(self.levels) for s in lv]

    def count(self, m_bar: int) -> int:
        """Estimate of the number of 1s among the last m_bar bits."""
        if not 1 <= m_bar <= self.W:
            raise InvalidArgument(f"window {m_bar} outside 1..{self.W}")
        total = 0
        for k, lv in enumerate(self.levels):
            for s in lv:
                if self._age(s) >= m_bar:
                    return total
                total += 1 << k
        return total

    def num_groups(self) -> int:
        return sum(len(lv) for lv in self.levels)


def check_rules(w: DgimWindow, stream_bits, ones_prefix=None, one_positions=None):
    """Assert the group structure against the full stream seen so far.

    ``stream_bits`` is the whole stream (indexable, oldest first); the
    prefix counts of ones and the positions of the ones can be passed in
    when checking after every push.  Rules:
    groups start and end on a 1 (1), only zeros between consecutive groups
    (2), sizes are powers of two (3) that never grow toward the head and
    only step down by halves (4), and every size except the largest occurs
    between B and B+1 times (5).
    """
    n = w.clock
    if ones_prefix is None:
        ones_prefix = [0]
        for b in stream_bits:
            ones_prefix.append(ones_prefix[-1] + b)
    if one_positions is None:
        one_positions = [i for i, b in enumerate(stream_bits) if b]
    groups = w.groups()
    prev_right = n  # exclusive bound: position just after the newer group
    prev_size = None
    for age, size in groups:
        right = n - 1 - age  # 0-based absolute position
        if not 0 <= right < prev_right:
            raise AssertionError("groups out of order")
        if stream_bits[right] != 1:
            raise AssertionError("group does not end on a 1")
        # rule 2: nothing but zeros between this group and the newer one
        if ones_prefix[prev_right] - ones_prefix[right + 1] != 0:
            raise AssertionError("1-bits between groups")
        if size & (size - 1):
            raise AssertionError("size not a power of two")
        if prev_size is not None and size not in (prev_size, 2 * prev_size):
            raise AssertionError("size sequence breaks the halving rule")
        if ones_prefix[right + 1] < size:
            raise AssertionError("group larger than the stream")
        # rule 1: the group's first bit is the size-th one counting back
        prev_right = one_positions[ones_prefix[right + 1] - size]
        prev_size = size
    sizes = [len(lv) for lv in w.levels]
    for k, z in enumerate(sizes):
        if z > w.B + 1:
            raise AssertionError(f"{z} groups of size 2^{k}")
        if k < len(sizes) - 1 and z < w.B:
            raise AssertionError(f"only {z} groups of size 2^{k}")


class DgimSum:
    """Sum of the last m_bar q-bit integers via one window per bit plane."""

    def __init__(self, window: int, eps: float, q: int):
        if q < 1:
            raise InvalidArgument("q must be >= 1")
        self.q = q
        self.planes = [DgimWindow(window, eps) for _ in range(q)]

    @property
    def W(self):
        return self.planes[0].W

    def push(self, value: int):
        if not 0 <= value < (1 << self.q):
            raise InvalidArgument(f"value {value} does not fit in {self.q} bits")
        for i, p in enumerate(self.planes):
            p.push((value >> i) & 1)

    def sum(self, m_bar: int) -> int:
        return sum(p.count(m_bar) << i for i, p in enumerate(self.planes))


def bit_planes(values, q: int) -> list[list[int]]:
    """Split a stream of q-bit integers into q bit streams (plane i = weight 2^i)."""
    return [[(v >> i) & 1 for v in values] for i in range(q)]


def dgim_push(w: DgimWindow, bit: int):
    w.push(bit)


def dgim_count(w: DgimWindow, m_bar: int) -> int:
    return w.count(m_bar)


def dgim_sum_push(w: DgimSum, value: int):
    w.push(value)


def dgim_sum(w: DgimSum, m_bar: int) -> int:
    return w.sum(m_bar)
