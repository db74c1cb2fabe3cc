"""Porat-Porat streaming matcher: O(log n) words of state.

Let e = floor(log2 n).  Level i < e holds the occurrences of the prefix
y[1, 2^i] that start inside the last 2^(i+1) stream positions; level e holds
occurrences of y[1, 2^e] inside the last n positions and checks them against
the whole pattern (for n a power of two this check is immediate).  All
occurrences of one level fit in a window at most twice the prefix length,
so they form an arithmetic progression r1, r1 + p, ..., stored as
(r1, t, p).

Fingerprints kept per level (x is the stream read so far, A = kappa(x)):
    C = kappa(x[1, r1-1])           when t >= 1
    B = kappa(x[r1, r2-1])          when t >= 2
    zrun, izrun = z^{+-|x[r1, end]|} when t >= 1 (updated once per byte)
    zB, izB = z^{+-(r2 - r1)}       when t >= 2

Each push does the arrival of the byte first and then the window checks
that precede the next byte.  This is the same sequence of operations as
checking before every arrival, but an occurrence is reported at the byte
that completes it, so no end-of-stream sentinel is needed to flush the
last one; :meth:`PpMatcher.finish` is kept for API symmetry.
"""
from __future__ import annotations

from ..errors import InvalidArgument
from ..hashing import RabinContext


class PpLevel:
    __slots__ = ("i", "prefix_len", "window", "check_fp", "r1", "t", "p",
                 "B", "C", "zrun", "izrun", "zB", "izB")

    def __init__(self, i, prefix_len, window, check_fp):
        self.i = i
        self.prefix_len = prefix_len  # length of the prefix whose occurrences are stored
        self.window = window          # occurrences expire this many positions later
        self.check_fp = check_fp      # fingerprint of y[1, window]
        self.r1 = self.t = self.p = 0
        self.B = self.C = 0
        self.zrun = self.izrun = 1
        self.zB = self.izB = 1

    def positions(self):
        return [self.r1 + k * self.p for k in range(self.t)]


class PpMatcher:
    def __init__(self, pattern: bytes, ctx: RabinContext, debug: bool = False):
        pattern = bytes(pattern)
        if not pattern:
            raise InvalidArgument("empty pattern")
        self.ctx = ctx
        self.n = n = len(pattern)
        self.e = e = n.bit_length() - 1
        if len(ctx.pow2) <= e + 1:
            raise InvalidArgument("context power tables too short for this pattern")
        q = ctx.q
        self.first = pattern[0]
        self.prefix_fps = [ctx.of(pattern[: 1 << i]).value for i in range(e + 1)]
        self.full_fp = ctx.of(pattern).value
        self.z_n = ctx.power(n)
        self.levels = []
        for i in range(e):
            self.levels.append(PpLevel(i, 1 << i, 1 << (i + 1), self.prefix_fps[i + 1]))
        self.levels.append(PpLevel(e, 1 << e, n, self.full_fp))
        self.A = 0
        self.j = 0  # bytes read so far
        self.occ = 0
        self.ops = 0  # level visits, for delay accounting
        self.anomalies = 0  # insertions that broke the progression (fingerprint collisions)
        self.debug = debug
        self._stream = bytearray() if debug else None
        self._pattern = pattern if debug else None
        self._q = q

    # ---------------------------------------------------------------
    def _insert(self, lv: PpLevel, pos: int, D: int, L: int):
        """Add occurrence ``pos`` whose prefix x[pos, j] (length L) has fingerprint D."""
        ctx, q = self.ctx, self._q
        L_log = L.bit_length() - 1  # L is a power of two
        if lv.t == 0:
            # C1: the new r1 is the first stored occurrence
            lv.r1, lv.t = pos, 1
            lv.C = (self.A - D) * ctx.inv_pow2[L_log] % q
            lv.zrun = ctx.pow2[L_log]
            lv.izrun = ctx.inv_pow2[L_log]
        elif lv.t == 1:
            # B1: r2 arrives; zrun = z^{|B| + |D|}
            lv.p = pos - lv.r1
            lv.t = 2
            lv.B = (self.A - D - lv.C * lv.zrun) * ctx.inv_pow2[L_log] % q
            lv.zB = lv.zrun * ctx.inv_pow2[L_log] % q
            lv.izB = lv.izrun * ctx.pow2[L_log] % q
        else:
            if pos - (lv.r1 + (lv.t - 1) * lv.p) != lv.p:
                self.anomalies += 1
                return
            lv.t += 1

    def _pop(self, lv: PpLevel):
        """Drop r1 from the level (it has left the window)."""
        q = self._q
        if lv.t >= 2:
            # C2; B is unchanged (B2) because consecutive gaps are equal
            lv.C = (lv.C * lv.zB + lv.B) % q
            lv.zrun = lv.zrun * lv.izB % q
            lv.izrun = lv.izrun * lv.zB % q
            lv.r1 += lv.p
            lv.t -= 1
            if lv.t == 1:
                lv.p = 0
                lv.B, lv.zB, lv.izB = 0, 1, 1
        else:
            lv.t = 0
            lv.r1 = lv.p = 0
            lv.B = lv.C = 0
            lv.zrun = lv.izrun = 1
            lv.zB = lv.izB = 1

    def push(self, c: int) -> int:
        """Feed one byte; returns the number of occurrences ending here (0 or 1)."""
        ctx, q = self.ctx, self._q
        z, iz = ctx.z, ctx.inv_z
        self.j += 1
        j = self.j
        if self.debug:
            self._stream.append(c)
        if self.n == 1:
            hit = int(c == self.first)
            self.occ += hit
            return hit
        # arrival of x_j
        self.A = (self.A * z + c) % q
        for lv in self.levels:
            self.ops += 1
            if lv.t:
                lv.zrun = lv.zrun * z % q
                lv.izrun = lv.izrun * iz % q
        if c == self.first:
            self._insert(self.levels[0], j, c, 1)
        # checks that precede x_{j+1}
        found = 0
        nxt = j + 1
        last = len(self.levels) - 1
        for lv in self.levels:
            self.ops += 1
            if lv.t and lv.r1 == nxt - lv.window:
                pos = lv.r1
                w = (self.A - lv.C * (ctx.pow2[lv.i + 1] if lv.i < self.e else self.z_n)) % q
                self._pop(lv)
                if w == lv.check_fp:
                    if lv.i == last:
                        found += 1
                    else:
                        self._insert(self.levels[lv.i + 1], pos, w, lv.window)
        self.occ += found
        if self.debug:
            self.check_shadow()
        return found

    def feed(self, data: bytes):
        for c in data:
            if self.push(c):
                yield self.j

    def finish(self) -> int:
        """End of stream.  Every check already ran after the last byte, so
        there is nothing left to flush; returns 0."""
        return 0

    def state_words(self) -> int:
        """Number of integers held, for the O(log n) space claim."""
        return len(self.levels) * len(PpLevel.__slots__) + len(self.prefix_fps) + 6

    # ---------------------------------------------------------------
    def check_shadow(self):
        """Compare every level with a from-scratch recomputation (debug only)."""
        if self._stream is None:
            raise RuntimeError("shadow checks need debug=True")
        x = bytes(self._stream)
        ctx, q, j = self.ctx, self._q, self.j
        if self.n == 1:
            return
        assert self.A == ctx.of(x).value, "A out of sync"
        for lv in self.levels:
            L = lv.prefix_len
            # positions that should be stored: start in the window that
            # remains for the next byte, prefix fully read
            lo = max(1, j + 2 - lv.window)
            hi = j - L + 1
            head = self._pattern[:L]
            want = [pos for pos in range(lo, hi + 1) if x[pos - 1:pos - 1 + L] == head]
            got = lv.positions()
            if got != want:
                raise AssertionError(f"level {lv.i}: stored {got}, expected {want}")
            if lv.t >= 1:
                assert lv.C == ctx.of(x[: lv.r1 - 1]).value, f"level {lv.i}: C wrong"
                assert lv.zrun == pow(ctx.z, j - lv.r1 + 1, q), f"level {lv.i}: zrun wrong"
                assert lv.zrun * lv.izrun % q == 1
            if lv.t >= 2:
                r2 = lv.r1 + lv.p
                assert lv.B == ctx.of(x[lv.r1 - 1:r2 - 1]).value, f"level {lv.i}: B wrong"
                assert lv.zB == pow(ctx.z, lv.p, q) and lv.zB * lv.izB % q == 1


def pp_push(m: PpMatcher, c: int) -> int:
    return m.push(c)


def make_context(m_max: int, pattern_len: int, seed: int = 0) -> RabinContext:
    """Context with q a prime in [m_max^3, 2 m_max^3] and tables for the pattern."""
    return RabinContext.random(seed, m_max=max(m_max, pattern_len, 2), max_len=pattern_len)
