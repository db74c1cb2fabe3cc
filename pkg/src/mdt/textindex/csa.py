"""Compressed suffix array built on the psi function.

psi[i] is the row of the suffix that starts one position after the suffix
of row i.  Rows sharing the same first character c form an increasing run of
psi, stored as one Elias-Fano sequence per symbol.  The first column F is
simulated with a bitvector marking where each symbol's rows begin.
"""
from __future__ import annotations

import numpy as np

from ..errors import BoundsError, CorruptArtifact
from .._serial import Reader, Writer
from ..succinct import EliasFano, PackedIntArray, RsBitvector
from .fm import sample_rate, _pattern
from .suffix import inverse_sa, prepare_text, suffix_array


class CsaIndex:
    KIND = 1

    def __init__(self, text):
        t = prepare_text(text)
        n = self.n = int(t.size)
        sa = suffix_array(t)
        isa = inverse_sa(sa)
        nxt = sa + 1
        nxt[nxt > n] = 1            # the sentinel row wraps to text position 1
        psi = isa[nxt]
        F = t[sa - 1]
        fo = np.ones(n, dtype=np.uint8)
        fo[1:] = F[1:] != F[:-1]
        self.fo = RsBitvector(fo)
        self.sigma_syms = bytes(F[fo == 1].tolist())
        self.psi_c = [EliasFano(psi[F == c], n + 1) for c in self.sigma_syms]
        self.rho = rho = sample_rate(n)
        marked = (sa % rho == 0) | (sa == n)
        self.mark = RsBitvector(marked.astype(np.uint8))
        self.ssa = PackedIntArray(sa[marked])
        # ISA at positions 1, 1+rho, 1+2rho, ...
        self.isa_samples = PackedIntArray(isa[1:n + 1:rho])

    @property
    def sigma(self) -> int:
        return len(self.sigma_syms)

    # ------------------------------------------------------------ F and psi
    def f_symbol(self, i: int) -> int:
        return self.sigma_syms[self.fo.rank1(i) - 1]

    def psi(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise BoundsError(f"row {i} outside 1..{self.n}")
        k = self.fo.rank1(i)
        j = self.fo.select1(k)
        return self.psi_c[k - 1].get(i - j + 1)

    def psi_many(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        k = self.fo.rank1_many(rows)
        j = self.fo.select_many(1, k)
        out = np.zeros(rows.size, dtype=np.int64)
        for c in np.unique(k):
            sel = k == c
            out[sel] = self.psi_c[c - 1].get_many(rows[sel] - j[sel] + 1)
        return out

    def psi_array(self) -> list:
        """[None, psi[2], ..., psi[n]] in 1-based row order (psi[1] undefined)."""
        vals = self.psi_many(np.arange(1, self.n + 1)).tolist()
        return [None] + vals[1:]

    # ------------------------------------------------------------ count
    def _compare(self, row: int, p: bytes) -> int:
        """Sign of (suffix at row, truncated to |p|) versus p."""
        for ch in p:
            c = self.f_symbol(row)
            if c != ch:
                return -1 if c < ch else 1
            row = self.psi(row)
        return 0

    def count_range(self, p):
        p = _pattern(p)
        n = self.n
        if 0 in p:  # the internal sentinel symbol never occurs in a pattern
            return 1, 0
        lo, hi = 1, n + 1
        while lo < hi:                       # first row with suffix >= p
            mid = (lo + hi) // 2
            if self._compare(mid, p) < 0:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        lo, hi = first, n + 1
        while lo < hi:                       # first row with suffix > p
            mid = (lo + hi) // 2
            if self._compare(mid, p) <= 0:
                lo = mid + 1
            else:
                hi = mid
        return first, lo - 1

    def count(self, p) -> int:
        if not _pattern(p):
            return 0
        lo, hi = self.count_range(p)
        return max(0, hi - lo + 1)

    # ------------------------------------------------------------ locate
    def sa_value(self, i: int):
        """(SA[i], steps): SA[i] = SSA[M.rank1(psi^k[i])] - k."""
        k = 0
        while not self.mark.access(i):
            i = self.psi(i)
            k += 1
        return self.ssa.get(self.mark.rank1(i) - 1) - k, k

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
                out[todo[hit]] = self.ssa.get_many(idx).astype(np.int64) - k
            todo = todo[~hit]
            if todo.size:
                rows[todo] = self.psi_many(rows[todo])
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

    # ------------------------------------------------------------ extract
    def extract(self, i: int, length: int) -> bytes:
        end = i + length - 1
        if length < 0 or i < 1 or end > self.n:
            raise BoundsError(f"extract [{i}, {end}] outside 1..{self.n}")
        if length == 0:
            return b""
        slot = (i - 1) // self.rho           # sample at position slot*rho + 1 <= i
        row = self.isa_samples.get(slot)
        for _ in range(i - (slot * self.rho + 1)):
            row = self.psi(row)
        out = bytearray()
        for k in range(length):
            c = self.f_symbol(row)
            out.append(c if c else ord("$"))
            if k + 1 < length:
                row = self.psi(row)
        return bytes(out)

    def text(self) -> bytes:
        return self.extract(1, self.n)

    # ------------------------------------------------------------ accounting
    def space_bits(self) -> dict:
        return {
            "fo": self.fo.space_bits(),
            "sigma": 8 * self.sigma,
            "psi": sum(e.space_bits() for e in self.psi_c),
            "mark": self.mark.space_bits(),
            "ssa": self.ssa.space_bits(),
            "isa_samples": self.isa_samples.space_bits(),
        }

    def bits_per_symbol(self) -> float:
        return sum(self.space_bits().values()) / self.n

    # ------------------------------------------------------------ serialization
    def write(self, w: Writer):
        self.fo.write(w)
        w.blob(self.sigma_syms)
        for e in self.psi_c:
            e.write(w)
        self.mark.write(w)
        self.ssa.write(w)
        self.isa_samples.write(w)

    @classmethod
    def read(cls, r: Reader, n: int, rho: int) -> "CsaIndex":
        obj = cls.__new__(cls)
        obj.n, obj.rho = n, rho
        obj.fo = RsBitvector.read(r)
        obj.sigma_syms = r.blob()
        if obj.fo.n != n or obj.fo.ones != len(obj.sigma_syms) or rho != sample_rate(n):
            raise CorruptArtifact("CSA header inconsistent")
        obj.psi_c = [EliasFano.read(r) for _ in obj.sigma_syms]
        obj.mark = RsBitvector.read(r)
        obj.ssa = PackedIntArray.read(r)
        obj.isa_samples = PackedIntArray.read(r)
        if sum(e.m for e in obj.psi_c) != n or obj.mark.n != n or obj.ssa.count != obj.mark.ones:
            raise CorruptArtifact("CSA components disagree on sizes")
        return obj

    def __repr__(self):
        return f"CsaIndex(n={self.n}, sigma={self.sigma}, rho={self.rho})"
