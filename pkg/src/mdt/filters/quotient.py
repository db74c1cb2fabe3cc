"""Quotient filter.

A p-bit fingerprint f = hash(x) is split into a quotient (top q bits, the
home slot) and a remainder (low r bits, what gets stored).  Every slot holds
r + 3 bits: the remainder plus three flags

    occupied      - some stored fingerprint has this slot as its home
    continuation  - this slot continues the run started in an earlier slot
    shifted       - the remainder here is not in its home slot

Runs (all remainders of one quotient) are kept sorted and contiguous, and a
cluster is a maximal sequence of non-empty slots.  The table is circular and
has a fixed size.
"""
from __future__ import annotations

import math
from collections import Counter

from ..errors import CapacityError, ContractViolation, InvalidArgument
from ..hashing import as_key, mix64
from ..succinct.bits import MutablePackedArray

OCC, CONT, SHIFT = 1, 2, 4


def qf_params(m: int, delta: float, alpha: float = 0.9) -> tuple[int, int]:
    # alpha = 0.5 is the usual sizing, so the lower end is closed here
    if m < 1 or not 0 < delta < 1 or not 0.5 <= alpha < 1:
        raise InvalidArgument("need m >= 1, 0 < delta < 1, 0.5 <= alpha < 1")
    r = max(1, math.ceil(math.log2(1 / delta) - 1e-12))
    q = max(1, math.ceil(math.log2(m / alpha) - 1e-12))
    return q, r


class QuotientFilter:
    def __init__(self, q: int, r: int, seed: int = 0, max_load: float = 0.9):
        if q < 1 or r < 1 or q + r > 64:
            raise InvalidArgument("need q, r >= 1 and q + r <= 64")
        if not 0 < max_load < 1:
            raise InvalidArgument("max_load must be in (0, 1)")
        self.q, self.r, self.seed = q, r, seed
        self.size = 1 << q
        self.max_load = max_load
        self.limit = min(self.size - 1, int(max_load * self.size))
        self.count = 0
        self.slots = MutablePackedArray(self.size, r + 3)

    @classmethod
    def for_capacity(cls, m, delta, alpha=0.5, seed=0, max_load=0.9):
        q, r = qf_params(m, delta, alpha)
        return cls(q, r, seed, max_load)

    # ---- fingerprints
    def fingerprint(self, key) -> tuple[int, int]:
        f = mix64(as_key(key), self.seed) >> (64 - self.q - self.r)
        return f >> self.r, f & ((1 << self.r) - 1)

    # ---- slot helpers
    def _incr(self, i):
        return (i + 1) & (self.size - 1)

    def _decr(self, i):
        return (i - 1) & (self.size - 1)

    def _run_start(self, fq: int) -> int:
        """First slot of the run for quotient fq (fq must be occupied)."""
        get = self.slots.get
        b = fq
        while get(b) & SHIFT:
            b = self._decr(b)
        s = b
        while b != fq:
            # skip one run, then move b to the next occupied home slot
            s = self._incr(s)
            while get(s) & CONT:
                s = self._incr(s)
            b = self._incr(b)
            while not get(b) & OCC:
                b = self._incr(b)
        return s

    def _cluster_start(self, i: int) -> int:
        get = self.slots.get
        while get(i) & SHIFT:
            i = self._decr(i)
        return i

    # ---- queries
    def contains_fp(self, fq: int, fr: int) -> bool:
        get = self.slots.get
        if not get(fq) & OCC:
            return False
        s = self._run_start(fq)
        while True:
            v = get(s)
            rem = v >> 3
            if rem == fr:
                return True
            if rem > fr:  # runs are sorted
                return False
            s = self._incr(s)
            if not get(s) & CONT:
                return False

    def __contains__(self, key) -> bool:
        return self.contains_fp(*self.fingerprint(key))

    contains = __contains__

    # ---- updates
    def insert_fp(self, fq: int, fr: int):
        if self.count >= self.limit:
            raise CapacityError(f"quotient filter full ({self.count} of {self.size} slots)")
        slots = self.slots
        home = slots.get(fq)
        if home & 7 == 0:  # empty home slot
            slots.set(fq, (fr << 3) | OCC)
            self.count += 1
            return
        had_run = home & OCC
        slots.set(fq, home | OCC)
        s = self._run_start(fq)
        run_head = s
        if had_run:
            # position inside the sorted run; equal remainders stay in arrival order
            while (slots.get(s) >> 3) <= fr:
                s = self._incr(s)
                if not slots.get(s) & CONT:
                    break
        at_head = s == run_head
        entry = fr << 3
        if not at_head:
            entry |= CONT
        if s != fq:
            entry |= SHIFT
        first_displaced = at_head and had_run
        i = s
        while True:
            old = slots.get(i)
            slots.set(i, entry | (old & OCC))
            if old & 7 == 0:
                break
            # the displaced remainder moves one slot right: always shifted now
            entry = (old & ~OCC) | SHIFT
            if first_displaced:
                entry |= CONT
                first_displaced = False
            i = self._incr(i)
        self.count += 1

    def add(self, key):
        self.insert_fp(*self.fingerprint(key))

    insert = add

    def remove_fp(self, fq: int, fr: int):
        if not self.contains_fp(fq, fr):
            raise ContractViolation("removing a fingerprint that is not stored")
        start = self._cluster_start(fq)
        entries, end = self._decode_from(start)
        entries.remove((fq, fr))
        self._encode_range(start, end, entries)
        self.count -= 1

    def remove(self, key):
        self.remove_fp(*self.fingerprint(key))

    def _decode_from(self, start: int):
        """Decode the cluster beginning at ``start``.

        Returns the (quotient, remainder) list in slot order and the first
        empty slot after the cluster.
        """
        get = self.slots.get
        out = []
        b = start  # current home quotient
        s = start
        first = True
        while True:
            v = get(s)
            if v & 7 == 0:
                break
            if not v & CONT and not first:
                b = self._incr(b)
                while not get(b) & OCC:
                    b = self._incr(b)
            first = False
            out.append((b, v >> 3))
            s = self._incr(s)
            if s == start:
                break
        return out, s

    def _encode_range(self, start: int, end: int, entries):
        """Rewrite slots [start, end) greedily from entries sorted by slot order."""
        slots, N = self.slots, self.size
        i = start
        while i != end:
            slots.set(i, 0)
            i = self._incr(i)
        pos = 0  # offset from start
        prev_q = None
        for fq, fr in entries:
            rel = (fq - start) % N
            if fq != prev_q:
                pos = max(pos, rel)
                cont = 0
            else:
                cont = CONT
            at = (start + pos) % N
            v = (fr << 3) | cont | (SHIFT if pos != rel else 0)
            slots.set(at, v | (slots.get(at) & OCC))
            slots.set(fq, slots.get(fq) | OCC)
            prev_q = fq
            pos += 1

    # ---- inspection
    def entries(self) -> list[tuple[int, int]]:
        """Every stored (quotient, remainder), decoded from scratch."""
        out = []
        get, N = self.slots.get, self.size
        e0 = next((i for i in range(N) if get(i) & 7 == 0), None)
        if e0 is None:
            return []  # cannot happen below the load limit
        k = 1
        while k <= N:
            i = (e0 + k) % N
            if get(i) & 7 == 0:
                k += 1
                continue
            # a slot right after an empty one starts a cluster
            part, end = self._decode_from(i)
            out.extend(part)
            k += len(part)
        return sorted(out)

    def cluster_lengths(self) -> list[int]:
        lengths = []
        N = self.size
        empty = [self.slots.get(i) & 7 == 0 for i in range(N)]
        if not any(empty):
            return [N]
        e0 = empty.index(True)
        run = 0
        for k in range(1, N + 1):
            i = (e0 + k) % N
            if empty[i]:
                if run:
                    lengths.append(run)
                run = 0
            else:
                run += 1
        return lengths

    def load(self) -> float:
        return self.count / self.size

    def measured_space_bits(self) -> int:
        return self.slots.space_bits()

    def check(self):
        """Recompute the layout from the decoded fingerprints and compare."""
        ref = reference_layout(self.q, Counter(self.entries()))
        got = self.slots.tolist()
        if ref != got:
            bad = next(i for i in range(self.size) if ref[i] != got[i])
            raise AssertionError(f"slot {bad}: expected {ref[bad]:b}, found {got[bad]:b}")
        if len(self.entries()) != self.count:
            raise AssertionError("count out of sync")


def reference_layout(q: int, fingerprints: Counter) -> list[int]:
    """Slot contents for a multiset of (quotient, remainder) pairs.

    Logical model: a chained table T[quotient] -> sorted remainders.  Runs
    are laid out greedily in quotient order; to handle wrap-around the
    quotient sequence is repeated three times on a line and the middle copy
    is read back (by then any spill from the end of the table has settled).
    """
    N = 1 << q
    chains: dict[int, list[int]] = {}
    for (fq, fr), c in fingerprints.items():
        chains.setdefault(fq, []).extend([fr] * c)
    if sum(len(v) for v in chains.values()) >= N:
        raise InvalidArgument("too many fingerprints for the table")
    out = [0] * N
    pos = 0
    for copy in range(3):
        for fq in sorted(chains):
            home = fq + copy * N
            pos = max(pos, home)
            for j, fr in enumerate(sorted(chains[fq])):
                if copy == 1:
                    v = (fr << 3) | (CONT if j else 0) | (SHIFT if pos != home else 0)
                    out[pos % N] |= v
                pos += 1
            if copy == 1:
                out[fq] |= OCC
    return out


def longest_cluster_bound(q: int, alpha: float) -> float:
    """3 ln(2^q) / (1/alpha + alpha - 2): cluster length that is unlikely to be exceeded."""
    return 3 * math.log(2 ** q) / (1 / alpha + alpha - 2)


def qf_insert(f, x):
    f.add(x)


def qf_remove(f, x):
    f.remove(x)


def qf_contains(f, x) -> bool:
    return x in f
