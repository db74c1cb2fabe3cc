"""FM-index: a wavelet tree over the BWT plus SA/ISA samples."""
from __future__ import annotations

import math

import numpy as np

from ..errors import BoundsError, CorruptArtifact
from .._serial import Reader, Writer
from ..succinct import PackedIntArray, RsBitvector, WaveletTree
from .suffix import bwt_symbols, inverse_sa, prepare_text, suffix_array, to_display


def sample_rate(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def _pattern(p) -> bytes:
    return p.encode("latin-1") if isinstance(p, str) else bytes(p)


class FmIndex:
    KIND = 2

    def __init__(self, text, code=None):
        t = prepare_text(text)
        n = self.n = int(t.size)
        sa = suffix_array(t)
        isa = inverse_sa(sa)
        L = bwt_symbols(t, sa)
        self.wt = WaveletTree(L, code)
        counts = np.bincount(t, minlength=256)
        self.c_array = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        self.present = counts > 0
        self.rho = rho = sample_rate(n)
        # rows whose SA value is a multiple of rho, plus the row of position 1
        marked = (sa % rho == 0) | (sa == 1)
        self.mark = RsBitvector(marked.astype(np.uint8))
        self.ssa = PackedIntArray(sa[marked])
        # ISA at positions rho, 2rho, ... and at n (the sentinel, row 1)
        pts = list(range(rho, n, rho)) + [n]
        self.isa_samples = PackedIntArray(isa[pts])

    @property
    def sigma(self) -> int:
        return int(self.present.sum())

    # ----------------------------------------------------------- LF
    def lf_step(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise BoundsError(f"row {i} outside 1..{self.n}")
        c, r = self.wt.access_rank(i)
        return int(self.c_array[c]) + r

    def lf_many(self, rows):
        c, r = self.wt.access_rank_many(rows)
        return self.c_array[c] + r

    # ----------------------------------------------------------- count
    def count_range(self, p):
        """Backward search.  Returns (lo, hi); hi < lo means no occurrence."""
        p = _pattern(p)
        lo, hi = 1, self.n
        for c in reversed(p):
            if c == 0 or not self.present[c]:
                return 1, 0
            base = int(self.c_array[c])
            lo = base + self.wt.rank(c, lo - 1) + 1
            hi = base + self.wt.rank(c, hi)
            if lo > hi:
                return lo, hi
        return lo, hi

    def count(self, p) -> int:
        if not _pattern(p):
            return 0
        lo, hi = self.count_range(p)
        return max(0, hi - lo + 1)

    # ----------------------------------------------------------- locate
    def sa_value(self, i: int) -> int:
        """SA[i] = SSA[M.rank1(LF^k(i))] + k for the first marked LF^k(i)."""
        k = 0
        while not self.mark.access(i):
            i = self.lf_step(i)
            k += 1
        return self.ssa.get(self.mark.rank1(i) - 1) + k

    def sa_values(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).copy()
        out = np.zeros(rows.size, dtype=np.int64)
        todo = np.arange(rows.size)
        k = 0
        while todo.size:
            cur = rows[todo]
            hit = self.mark.access_many(cur) == 1
            if hit.any():
                idx = self.mark.rank1_many(cur[hit]) - 1
                out[todo[hit]] = self.ssa.get_many(idx).astype(np.int64) + k
            todo = todo[~hit]
            if todo.size:
                rows[todo] = self.lf_many(rows[todo])
            k += 1
            assert k <= self.rho + 1, "sampling invariant broken"
        return out

    def locate(self, p) -> list:
        if not _pattern(p):
            return []
        lo, hi = self.count_range(p)
        if hi < lo:
            return []
        return sorted(self.sa_values(np.arange(lo, hi + 1)).tolist())

    # ----------------------------------------------------------- extract
    def extract(self, i: int, length: int) -> bytes:
        """T[i .. i+length-1], sentinel rendered as '$'."""
        end = i + length - 1
        if length < 0 or i < 1 or end > self.n:
            raise BoundsError(f"extract [{i}, {end}] outside 1..{self.n}")
        if length == 0:
            return b""
        tail = b""
        if end == self.n:
            tail, end = b"$", end - 1
            if end < i:
                return tail
        # nearest sampled position strictly after `end`, walk LF backwards
        rho = self.rho
        q = (end // rho + 1) * rho
        if q >= self.n:
            q, slot = self.n, self.isa_samples.count - 1
        else:
            slot = q // rho - 1
        row = self.isa_samples.get(slot)
        out = bytearray()
        pos = q
        while pos > i:
            c, r = self.wt.access_rank(row)
            if pos - 1 <= end:
                out.append(c)
            row = int(self.c_array[c]) + r
            pos -= 1
        out.reverse()
        return bytes(out) + tail

    def text(self) -> bytes:
        return self.extract(1, self.n)

    # ----------------------------------------------------------- accounting
    def space_bits(self) -> dict:
        return {
            "wavelet_tree": self.wt.space_bits(),
            "c_array": 256 * 64,
            "mark": self.mark.space_bits(),
            "ssa": self.ssa.space_bits(),
            "isa_samples": self.isa_samples.space_bits(),
        }

    def bits_per_symbol(self) -> float:
        return sum(self.space_bits().values()) / self.n

    # ----------------------------------------------------------- serialization
    def write(self, w: Writer):
        self.wt.write(w)
        w.words(self.c_array.astype(np.uint64))
        self.mark.write(w)
        self.ssa.write(w)
        self.isa_samples.write(w)

    @classmethod
    def read(cls, r: Reader, n: int, rho: int) -> "FmIndex":
        obj = cls.__new__(cls)
        obj.n, obj.rho = n, rho
        obj.wt = WaveletTree.read(r)
        obj.c_array = r.words().astype(np.int64)
        obj.mark = RsBitvector.read(r)
        obj.ssa = PackedIntArray.read(r)
        obj.isa_samples = PackedIntArray.read(r)
        if obj.c_array.size != 256 or obj.wt.n != n or obj.mark.n != n \
                or obj.ssa.count != obj.mark.ones or rho != sample_rate(n):
            raise CorruptArtifact("FM-index components disagree on sizes")
        counts = np.diff(np.concatenate([obj.c_array, [n]]))
        if counts.min() < 0:
            raise CorruptArtifact("C array is not monotone")
        obj.present = counts > 0
        return obj

    def __repr__(self):
        return f"FmIndex(n={self.n}, sigma={self.sigma}, rho={self.rho})"


def display_bwt(fm: FmIndex) -> bytes:
    return to_display(fm.wt.access_many(np.arange(1, fm.n + 1)))
