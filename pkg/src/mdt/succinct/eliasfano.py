"""Elias-Fano encoding of a non-decreasing integer sequence.

Every value is split into ``low_width`` low bits, stored verbatim in a packed
array, and a high part stored as unary gaps in a rank/select bitvector: the
i-th 1 bit is preceded by exactly ``value_i >> low_width`` zeros.
"""
from __future__ import annotations

import numpy as np

from ..errors import BoundsError, InvalidArgument, CorruptArtifact
from .._serial import Reader, Writer
from .bits import PackedIntArray
from .rrr import RsBitvector
from .serial import SerialMixin


def low_width_for(n: int, m: int) -> int:
    """max(1, ceil(log2(n/m))) computed with integers only."""
    L = 0
    while (m << L) < n:
        L += 1
    return max(1, L)


class EliasFano(SerialMixin):
    TAG = 2

    def __init__(self, values, universe: int):
        vals = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                          dtype=np.int64).ravel()
        m = int(vals.size)
        if m < 1:
            raise InvalidArgument("Elias-Fano needs at least one value")
        if universe < 1:
            raise InvalidArgument("universe must be positive")
        if vals.min() < 0 or vals.max() >= universe:
            raise InvalidArgument("values must lie in [0, universe)")
        if m > 1 and np.any(np.diff(vals) < 0):
            raise InvalidArgument("values must be non-decreasing")
        self.m = m
        self.universe = int(universe)
        self.low_width = ell = low_width_for(self.universe, m)
        self.low = PackedIntArray(vals & ((1 << ell) - 1), width=ell)
        high = vals >> ell
        bits = np.zeros(m + int(high[-1]), dtype=np.uint8)
        bits[high + np.arange(m)] = 1
        self.high = RsBitvector(bits)

    def __len__(self):
        return self.m

    def get(self, i: int) -> int:
        """i-th value, 1-based."""
        if not 1 <= i <= self.m:
            raise BoundsError(f"index {i} outside 1..{self.m}")
        # rank0(select1(i)) == select1(i) - i: the i-th one has i-1 ones before it
        prefix = self.high.select1(i) - i
        return (prefix << self.low_width) + self.low.get(i - 1)

    __getitem__ = get

    def get_many(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() > self.m):
            raise BoundsError("index out of range")
        prefix = self.high.select_many(1, idx) - idx
        return (prefix << self.low_width) + self.low.get_many(idx - 1).astype(np.int64)

    def to_list(self) -> list:
        return [int(v) for v in self.get_many(np.arange(1, self.m + 1))]

    def lower_bound(self, y: int) -> int:
        """Smallest 1-based index whose value is >= y (m+1 if none)."""
        lo, hi = 1, self.m + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.get(mid) < y:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def search(self, y: int):
        """(member, predecessor < y or None, successor >= y or None)."""
        k = self.lower_bound(y)
        succ = self.get(k) if k <= self.m else None
        pred = self.get(k - 1) if k > 1 else None
        return succ == y, pred, succ

    def high_bits(self) -> str:
        return "".join(map(str, self.high.to_numpy().tolist()))

    @property
    def low_bits(self) -> int:
        return self.low.space_bits()

    def space_bits(self) -> int:
        return self.low.space_bits() + self.high.space_bits()

    def write(self, w: Writer):
        w.u64(self.m)
        w.u64(self.universe)
        w.u8(self.low_width)
        self.low.write(w)
        self.high.write(w)

    @classmethod
    def read(cls, r: Reader) -> "EliasFano":
        obj = cls.__new__(cls)
        obj.m = r.u64()
        obj.universe = r.u64()
        obj.low_width = r.u8()
        obj.low = PackedIntArray.read(r)
        obj.high = RsBitvector.read(r)
        if obj.m < 1 or obj.low.count != obj.m or obj.high.ones != obj.m \
                or obj.low_width != low_width_for(obj.universe, obj.m):
            raise CorruptArtifact("Elias-Fano header inconsistent with payload")
        return obj
