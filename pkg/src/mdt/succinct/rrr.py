"""Zero-order compressed rank/select bitvector (class/offset block encoding).

The bit sequence is cut into blocks of ``b`` bits.  Each block is stored as

* its *class*: the number of 1s in it (fixed width), and
* its *offset*: the block's 0-based position inside the sorted list of all
  b-bit patterns with that many 1s (variable width).

Blocks are grouped into macroblocks of ``b`` blocks.  Per macroblock we keep
the absolute start of its first offset and the number of 1s before it; per
block, the same two quantities relative to the macroblock.  Both sample
levels are stored as interleaved (position, rank) records so a rank query
reads exactly three sampled arrays (macro records, block records, classes)
plus one offset.

Blocks are rebuilt from (class, offset) by combinatorial unranking instead
of a precomputed table; select is a binary search driven by the rank samples.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import BoundsError, InvalidArgument, NotFound, CorruptArtifact
from .._serial import Reader, Writer
from .serial import SerialMixin
from .bits import PackedBits, PackedIntArray, bits_from_any, extract_many

MAX_BLOCK = 63
# below this many queries the scalar path beats numpy's per-call overhead
SMALL_BATCH = 24
_U64 = np.uint64


def block_size_for(n: int) -> int:
    if n < 4:
        return 1
    b = math.ceil(math.log2(n) / 2)
    return min(max(b, 1), MAX_BLOCK)


@lru_cache(maxsize=None)
def binomials(b: int) -> tuple:
    """(python table, numpy table) with C[p][c] for 0 <= p, c <= b."""
    tab = [[math.comb(p, c) for c in range(b + 2)] for p in range(b + 1)]
    return tab, np.array(tab, dtype=_U64)


@lru_cache(maxsize=None)
def offset_widths(b: int) -> tuple:
    # a pointer into a list of length L needs ceil(log2 L) bits; lists of length
    # one still get a single bit, matching the worked example's layout
    return tuple(max(1, (math.comb(b, c) - 1).bit_length()) for c in range(b + 1))


def rank_block(value: int, b: int) -> tuple[int, int]:
    """Return (class, offset) of a b-bit block given as an int (first bit = MSB)."""
    tab = binomials(b)[0]
    cls = off = 0
    for p in range(b):
        if (value >> p) & 1:
            cls += 1
            off += tab[p][cls]
    return cls, off


def unrank_block(cls: int, off: int, b: int) -> int:
    tab = binomials(b)[0]
    val = 0
    for p in range(b - 1, -1, -1):
        if cls == 0:
            break
        c = tab[p][cls]
        if c <= off:
            val |= 1 << p
            off -= c
            cls -= 1
    return val


def unrank_many(cls: np.ndarray, off: np.ndarray, b: int) -> np.ndarray:
    tab = binomials(b)[1]
    cls = cls.astype(np.int64).copy()
    off = off.astype(_U64).copy()
    val = np.zeros(cls.shape, dtype=_U64)
    for p in range(b - 1, -1, -1):
        c = tab[p][cls]
        take = (cls > 0) & (c <= off)
        val |= take.astype(_U64) << _U64(p)
        off -= np.where(take, c, _U64(0))
        cls -= take
    return val


class RsBitvector(SerialMixin):
    """Compressed bitvector with access / rank / select (positions are 1-based)."""

    TAG = 1

    def __init__(self, bits):
        if isinstance(bits, PackedBits):
            arr = bits.to_numpy()
        else:
            arr = bits_from_any(bits)
        n = int(arr.size)
        if n < 1:
            raise InvalidArgument("bitvector must have at least one bit")
        self.n = n
        b = self.b = block_size_for(n)
        nblocks = -(-n // b)
        padded = np.zeros(nblocks * b, dtype=np.uint8)
        padded[:n] = arr
        blocks = padded.reshape(nblocks, b)

        tab = binomials(b)[1]
        cls = np.zeros(nblocks, dtype=np.int64)
        off = np.zeros(nblocks, dtype=_U64)
        for p in range(b):  # p counts from the least significant (last) bit
            bit = blocks[:, b - 1 - p].astype(bool)
            cls += bit
            off += np.where(bit, tab[p][cls], _U64(0))
        widths = np.array(offset_widths(b), dtype=np.int64)[cls]

        self._widths = offset_widths(b)
        self.ones = int(cls.sum())
        self.nblocks = nblocks
        self._cls = PackedIntArray(cls, width=max(1, b.bit_length()))
        self._off = PackedBits.from_fields(off, widths)

        starts = np.concatenate([[0], np.cumsum(widths)[:-1]])
        before = np.concatenate([[0], np.cumsum(cls)[:-1]])
        first = np.arange(0, nblocks, b)
        macro = np.empty(2 * first.size, dtype=np.int64)
        macro[0::2] = starts[first]
        macro[1::2] = before[first]
        owner = np.arange(nblocks) // b
        rel = np.empty(2 * nblocks, dtype=np.int64)
        rel[0::2] = starts - starts[first][owner]
        rel[1::2] = before - before[first][owner]
        self._macro = PackedIntArray(macro)
        self._blk = PackedIntArray(rel)

    # ------------------------------------------------------------------ blocks
    def _block(self, j: int) -> tuple[int, int]:
        """Decode block j (0-based): returns (bits as int, ones before block)."""
        b = self.b
        macro, blk = self._macro, self._blk
        mb2 = 2 * (j // b)
        pos = macro.get(mb2) + blk.get(2 * j)
        before = macro.get(mb2 + 1) + blk.get(2 * j + 1)
        c = self._cls.get(j)
        o = self._off._extract0(pos, self._widths[c])
        if c == 0:
            return 0, before
        return unrank_block(c, o, b), before

    def _blocks_many(self, j: np.ndarray):
        b = self.b
        mb2 = 2 * (j // b)
        pos = self._macro.get_many(mb2) + self._blk.get_many(2 * j)
        before = self._macro.get_many(mb2 + 1) + self._blk.get_many(2 * j + 1)
        c = self._cls.get_many(j).astype(np.int64)
        widths = np.array(offset_widths(b), dtype=np.int64)[c]
        o = extract_many(self._off.words, pos.astype(np.int64), widths)
        return unrank_many(c, o, b), before.astype(np.int64)

    # ------------------------------------------------------------------ access
    def __len__(self):
        return self.n

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise BoundsError(f"position {i} outside 1..{self.n}")
        j, r = divmod(i - 1, self.b)
        val, _ = self._block(j)
        return (val >> (self.b - 1 - r)) & 1

    __getitem__ = access

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise BoundsError(f"rank position {i} outside 0..{self.n}")
        if i == 0:
            return 0
        j, r = divmod(i - 1, self.b)
        val, before = self._block(j)
        return before + (val >> (self.b - 1 - r)).bit_count()

    def access_rank1(self, i: int) -> tuple[int, int]:
        """(B[i], rank1(i)) from a single block decode."""
        if not 1 <= i <= self.n:
            raise BoundsError(f"position {i} outside 1..{self.n}")
        j, r = divmod(i - 1, self.b)
        val, before = self._block(j)
        v = val >> (self.b - 1 - r)
        return v & 1, before + v.bit_count()

    def rank(self, bit: int, i: int) -> int:
        r1 = self.rank1(i)
        return r1 if bit else i - r1

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def count(self, bit: int) -> int:
        return self.ones if bit else self.n - self.ones

    def select(self, bit: int, j: int) -> int:
        """Position of the j-th occurrence of ``bit``."""
        if not 1 <= j <= self.count(bit):
            raise NotFound(f"no {j}-th {bit}-bit (only {self.count(bit)})")
        b = self.b
        span = b * b

        def before_macro(m):
            r = self._macro.get(2 * m + 1)
            return r if bit else m * span - r

        # last macroblock whose preceding count is < j
        lo, hi = 0, (self.nblocks - 1) // b
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if before_macro(mid) < j:
                lo = mid
            else:
                hi = mid - 1
        mb = lo
        base = before_macro(mb)
        lo, hi = mb * b, min(mb * b + b, self.nblocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            r = self._blk.get(2 * mid + 1)
            if (r if bit else (mid - mb * b) * b - r) + base < j:
                lo = mid
            else:
                hi = mid - 1
        val, before = self._block(lo)
        seen = before if bit else lo * b - before
        for r in range(b):
            if ((val >> (b - 1 - r)) & 1) == bit:
                seen += 1
                if seen == j:
                    return lo * b + r + 1
        raise AssertionError("select fell off the end of a block")  # pragma: no cover

    def select1(self, j):
        return self.select(1, j)

    def select0(self, j):
        return self.select(0, j)

    # ------------------------------------------------------------------ bulk
    def access_many(self, pos) -> np.ndarray:
        return self.access_rank1_many(pos)[0]

    def rank1_many(self, pos) -> np.ndarray:
        pos = np.asarray(pos, dtype=np.int64)
        if pos.size and (pos.min() < 0 or pos.max() > self.n):
            raise BoundsError("rank position out of range")
        if pos.size <= SMALL_BATCH:
            return np.array([self.rank1(p) for p in pos.tolist()], dtype=np.int64)
        out = np.zeros(pos.shape, dtype=np.int64)
        nz = pos > 0
        j, r = np.divmod(pos[nz] - 1, self.b)
        val, before = self._blocks_many(j)
        out[nz] = before + np.bitwise_count(val >> (self.b - 1 - r).astype(_U64)).astype(np.int64)
        return out

    def access_rank1_many(self, pos):
        pos = np.asarray(pos, dtype=np.int64)
        if pos.size and (pos.min() < 1 or pos.max() > self.n):
            raise BoundsError("position out of range")
        if pos.size <= SMALL_BATCH:
            pairs = [self.access_rank1(p) for p in pos.tolist()]
            return (np.array([a for a, _ in pairs], dtype=np.int64),
                    np.array([b for _, b in pairs], dtype=np.int64))
        j, r = np.divmod(pos - 1, self.b)
        val, before = self._blocks_many(j)
        v = val >> (self.b - 1 - r).astype(_U64)
        return (v & _U64(1)).astype(np.int64), before + np.bitwise_count(v).astype(np.int64)

    def rank_many(self, bit: int, pos) -> np.ndarray:
        r1 = self.rank1_many(pos)
        return r1 if bit else np.asarray(pos, dtype=np.int64) - r1

    def select_many(self, bit: int, js) -> np.ndarray:
        js = np.asarray(js, dtype=np.int64)
        if js.size and (js.min() < 1 or js.max() > self.count(bit)):
            raise NotFound("select index out of range")
        if js.size <= SMALL_BATCH:
            return np.array([self.select(bit, j) for j in js.tolist()], dtype=np.int64)
        b = self.b
        nmacro = (self.nblocks - 1) // b + 1
        m = np.arange(nmacro)
        mrank = self._macro.get_many(2 * m + 1).astype(np.int64)
        if not bit:
            mrank = m * b * b - mrank
        mb = np.searchsorted(mrank, js, side="left") - 1
        base = mrank[mb]
        # candidate blocks inside the macroblock, shape (q, b)
        cand = mb[:, None] * b + np.arange(b)[None, :]
        valid = cand < self.nblocks
        cc = np.where(valid, cand, 0)
        r = self._blk.get_many(2 * cc + 1).astype(np.int64)
        if not bit:
            r = np.arange(b)[None, :] * b - r
        r = np.where(valid, r + base[:, None], np.iinfo(np.int64).max)
        blk = mb * b + (r < js[:, None]).sum(axis=1) - 1
        val, before = self._blocks_many(blk)
        seen = before if bit else blk * b - before
        need = js - seen
        out = np.zeros(js.shape, dtype=np.int64)
        acc = np.zeros(js.shape, dtype=np.int64)
        for t in range(b):
            bt = ((val >> _U64(b - 1 - t)) & _U64(1)).astype(np.int64)
            hit = bt if bit else 1 - bt
            acc += hit
            out = np.where((out == 0) & (acc == need) & (hit == 1), blk * b + t + 1, out)
        return out

    # ------------------------------------------------------------------ introspection
    def to_numpy(self) -> np.ndarray:
        return self.access_many(np.arange(1, self.n + 1)).astype(np.uint8)

    def classes(self) -> list:
        return self._cls.tolist()

    def offsets(self) -> list:
        return [rank_block(self._block(j)[0], self.b)[1] for j in range(self.nblocks)]

    def offset_widths(self) -> list:
        w = offset_widths(self.b)
        return [w[c] for c in self.classes()]

    @property
    def offset_bits(self) -> int:
        return self._off.length

    def space_bits(self) -> int:
        return (self._cls.space_bits() + self._off.length
                + self._macro.space_bits() + self._blk.space_bits())

    # ------------------------------------------------------------------ serialization
    def write(self, w: Writer):
        w.u64(self.n)
        w.u8(self.b)
        w.u64(self.ones)
        self._cls.write(w)
        self._off.write(w)
        self._macro.write(w)
        self._blk.write(w)

    @classmethod
    def read(cls, r: Reader) -> "RsBitvector":
        obj = cls.__new__(cls)
        obj.n = r.u64()
        obj.b = r.u8()
        obj.ones = r.u64()
        obj._cls = PackedIntArray.read(r)
        obj._off = PackedBits.read(r)
        obj._macro = PackedIntArray.read(r)
        obj._blk = PackedIntArray.read(r)
        if obj.n < 1 or obj.b != block_size_for(obj.n):
            raise CorruptArtifact("inconsistent block size")
        obj.nblocks = -(-obj.n // obj.b)
        obj._widths = offset_widths(obj.b)
        if (obj._cls.count != obj.nblocks or obj._blk.count != 2 * obj.nblocks
                or obj._macro.count != 2 * ((obj.nblocks - 1) // obj.b + 1)):
            raise CorruptArtifact("sample array lengths do not match n")
        return obj
