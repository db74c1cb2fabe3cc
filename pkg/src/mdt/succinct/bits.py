"""Packed bit storage.

Bits are numbered from 1 and laid out most-significant-bit first inside
64-bit words, so bit 1 is the top bit of ``words[0]``.  Scalar helpers work on
Python ints; the ``*_many`` helpers are the numpy-vectorised equivalents used
for bulk queries.
"""
from __future__ import annotations

import numpy as np

from ..errors import BoundsError, InvalidArgument
from .._serial import Reader, Writer

WORD = 64
_U64 = np.uint64


def bits_from_any(bits) -> np.ndarray:
    """Normalise a '0101' string, a sequence of 0/1 or a bool array to uint8."""
    if isinstance(bits, str):
        s = bits.replace(" ", "")
        if s.strip("01"):
            raise InvalidArgument("bit string may only contain 0 and 1")
        return (np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")).astype(np.uint8)
    arr = np.asarray(bits)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise InvalidArgument("bits must be 0 or 1")
    return arr.astype(np.uint8).ravel()


def words_from_bits(bits: np.ndarray) -> np.ndarray:
    packed = np.packbits(bits, bitorder="big")
    pad = (-packed.size) % 8
    if pad or packed.size == 0:
        packed = np.concatenate([packed, np.zeros(pad if packed.size else 8, np.uint8)])
    return np.frombuffer(packed.tobytes(), dtype=">u8").astype(_U64)


def pack_fields(values, widths) -> tuple[np.ndarray, int]:
    """Concatenate ``values[j]`` written in ``widths[j]`` bits (MSB first).

    Returns (words, total_bits).  Zero-width fields are allowed and skipped.
    """
    if len(widths) <= 256:
        # small inputs: a Python big int is much cheaper than numpy setup
        acc = total = 0
        for v, wd in zip(np.asarray(values).tolist(), np.asarray(widths).tolist()):
            acc = (acc << wd) | v
            total += wd
        nwords = max(1, -(-total // WORD))
        acc <<= nwords * WORD - total
        words = np.frombuffer(acc.to_bytes(nwords * 8, "big"), dtype=">u8").astype(_U64)
        return words, total
    values = np.asarray(values, dtype=_U64)
    widths = np.asarray(widths, dtype=np.int64)
    total = int(widths.sum())
    out = np.zeros(total, dtype=np.uint8)
    if total:
        starts = np.concatenate([[0], np.cumsum(widths)[:-1]])
        for k in range(int(widths.max())):
            sel = widths > k
            shift = (widths[sel] - 1 - k).astype(_U64)
            out[starts[sel] + k] = ((values[sel] >> shift) & _U64(1)).astype(np.uint8)
    return words_from_bits(out), total


def extract_many(words: np.ndarray, pos0, lens) -> np.ndarray:
    """Vectorised extraction: ``lens`` bits starting at 0-based ``pos0``.

    ``words`` must carry at least one trailing zero word past the last field
    (``PackedBits`` guarantees this).  Widths must be in 1..64.
    """
    pos0 = np.asarray(pos0, dtype=np.int64)
    k = pos0 >> 6
    off = (pos0 & 63).astype(_U64)
    # the low word is shifted in two steps so that off == 0 yields 0, not w1
    window = (words[k] << off) | ((words[k + 1] >> _U64(1)) >> (_U64(63) - off))
    return window >> (_U64(64) - np.asarray(lens).astype(_U64))


class PackedBits:
    """A fixed bit sequence of ``length`` bits packed into uint64 words."""

    def __init__(self, bits=(), *, words=None, length=None):
        if words is None:
            b = bits_from_any(bits)
            length = b.size
            words = words_from_bits(b)
        self.length = int(length)
        # one spare zero word so two-word reads never run off the end
        need = self.length // WORD + 2
        w = np.zeros(max(need, len(words)), dtype=_U64)
        w[: len(words)] = words
        self.words = w
        self._wl = w.tolist()   # python-int mirror: scalar reads avoid numpy boxing

    @classmethod
    def from_fields(cls, values, widths) -> "PackedBits":
        words, total = pack_fields(values, widths)
        return cls(words=words, length=total)

    def __len__(self):
        return self.length

    def _check(self, i, ln):
        if not (1 <= ln <= WORD):
            raise InvalidArgument("extract length must be in 1..64")
        if i < 1 or i + ln - 1 > self.length:
            raise BoundsError(f"bits [{i}, {i + ln - 1}] outside 1..{self.length}")

    def extract(self, i: int, ln: int) -> int:
        """Return bits B[i .. i+ln-1] (1-based) right-aligned in an int."""
        self._check(i, ln)
        return self._extract0(i - 1, ln)

    def _extract0(self, p: int, ln: int) -> int:
        # unchecked, 0-based
        k = p >> 6
        off = p & 63
        wl = self._wl
        if off + ln <= WORD:
            return (wl[k] >> (WORD - off - ln)) & ((1 << ln) - 1)
        return (((wl[k] << WORD) | wl[k + 1]) >> (2 * WORD - off - ln)) & ((1 << ln) - 1)

    def get(self, i: int) -> int:
        self._check(i, 1)
        p = i - 1
        return (self._wl[p >> 6] >> (63 - (p & 63))) & 1

    def to_numpy(self) -> np.ndarray:
        return np.unpackbits(self.words.astype(">u8").view(np.uint8))[: self.length]

    def __str__(self):
        return "".join(map(str, self.to_numpy().tolist()))

    def __eq__(self, other):
        return isinstance(other, PackedBits) and self.length == other.length and \
            np.array_equal(self.to_numpy(), other.to_numpy())

    def space_bits(self) -> int:
        return self.length

    def write(self, w: Writer):
        w.u64(self.length)
        w.words(self.words[: (self.length + 63) // 64])

    @classmethod
    def read(cls, r: Reader) -> "PackedBits":
        n = r.u64()
        words = r.words()
        if words.size != (n + 63) // 64:
            from ..errors import CorruptArtifact
            raise CorruptArtifact("bit length does not match word count")
        return cls(words=words, length=n)


class PackedIntArray:
    """``count`` unsigned integers of ``width`` bits each, 0-based."""

    def __init__(self, values=(), width: int | None = None):
        vals = np.asarray(values, dtype=np.int64).ravel()
        if vals.size and vals.min() < 0:
            raise InvalidArgument("packed integers must be non-negative")
        vals = vals.astype(_U64)
        if width is None:
            width = max(1, int(vals.max()).bit_length()) if vals.size else 1
        if not 1 <= width <= WORD:
            raise InvalidArgument("width must be in 1..64")
        if vals.size and width < WORD and int(vals.max()) >> width:
            raise InvalidArgument(f"value does not fit in {width} bits")
        self.width = int(width)
        self.count = int(vals.size)
        self.bits = PackedBits.from_fields(vals, np.full(vals.size, width))

    def __len__(self):
        return self.count

    def get(self, i: int) -> int:
        if not 0 <= i < self.count:
            raise BoundsError(f"index {i} outside 0..{self.count - 1}")
        w = self.width
        p = i * w
        k, off = p >> 6, p & 63
        wl = self.bits._wl
        if off + w <= 64:
            return (wl[k] >> (64 - off - w)) & ((1 << w) - 1)
        return (((wl[k] << 64) | wl[k + 1]) >> (128 - off - w)) & ((1 << w) - 1)

    __getitem__ = get

    def get_many(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.count):
            raise BoundsError("index out of range")
        if idx.size <= 8:
            return np.array([self.get(i) for i in idx.ravel().tolist()], dtype=_U64).reshape(idx.shape)
        return extract_many(self.bits.words, idx * self.width, self.width)

    def to_numpy(self) -> np.ndarray:
        if self.count == 0:
            return np.zeros(0, dtype=_U64)
        return self.get_many(np.arange(self.count))

    def tolist(self):
        return [int(v) for v in self.to_numpy()]

    def space_bits(self) -> int:
        return self.count * self.width

    def write(self, w: Writer):
        w.u64(self.count)
        w.u8(self.width)
        self.bits.write(w)

    @classmethod
    def read(cls, r: Reader) -> "PackedIntArray":
        obj = cls.__new__(cls)
        obj.count = r.u64()
        obj.width = r.u8()
        obj.bits = PackedBits.read(r)
        if obj.bits.length != obj.count * obj.width:
            from ..errors import CorruptArtifact
            raise CorruptArtifact("packed array size mismatch")
        return obj


class MutablePackedArray:
    """Fixed-length array of ``width``-bit cells that can be rewritten in place.

    Cells are packed back to back (a cell may straddle two words), so the
    payload is exactly ``count * width`` bits.  The words live in a plain
    Python list: single-cell reads and writes are the hot path for the
    filters and list indexing beats numpy scalar access there.
    """

    def __init__(self, count: int, width: int):
        if not 1 <= width <= WORD:
            raise InvalidArgument("cell width must be in 1..64")
        self.count, self.width = int(count), int(width)
        self.mask = (1 << width) - 1
        self._w = [0] * ((count * width + WORD - 1) // WORD + 1)

    def __len__(self):
        return self.count

    def get(self, i: int) -> int:
        p = i * self.width
        k, off = p >> 6, p & 63
        end = off + self.width
        if end <= WORD:
            return (self._w[k] >> (WORD - end)) & self.mask
        lo = end - WORD
        return ((self._w[k] << lo) | (self._w[k + 1] >> (WORD - lo))) & self.mask

    __getitem__ = get

    def set(self, i: int, v: int):
        w, p = self.width, i * self.width
        k, off = p >> 6, p & 63
        end = off + w
        if end <= WORD:
            sh = WORD - end
            self._w[k] = (self._w[k] & ~(self.mask << sh)) | (v << sh)
        else:
            lo = end - WORD
            self._w[k] = (self._w[k] & ~(self.mask >> lo)) | (v >> lo)
            sh = WORD - lo
            m2 = ((1 << lo) - 1) << sh
            self._w[k + 1] = (self._w[k + 1] & ~m2 & 0xFFFFFFFFFFFFFFFF) | ((v << sh) & m2)

    __setitem__ = set

    def tolist(self):
        return [self.get(i) for i in range(self.count)]

    def space_bits(self) -> int:
        return self.count * self.width

    def write(self, wr: Writer):
        wr.u64(self.count)
        wr.u8(self.width)
        wr.words(np.array(self._w, dtype=_U64))

    @classmethod
    def read(cls, r: Reader) -> "MutablePackedArray":
        from ..errors import CorruptArtifact
        count, width = r.u64(), r.u8()
        if not 1 <= width <= WORD:
            raise CorruptArtifact("bad cell width")
        words = r.words()
        obj = cls(count, width)
        if words.size != len(obj._w):
            raise CorruptArtifact("cell array size mismatch")
        obj._w = [int(x) for x in words]
        return obj
