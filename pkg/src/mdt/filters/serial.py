"""Binary format for filters: b"MDTF", u16 version, u8 kind, parameters, arrays."""
import numpy as np

from .._serial import Reader, Writer
from ..errors import CorruptArtifact, InvalidArgument
from ..succinct.bits import MutablePackedArray
from .bloom import BloomFilter, CountingBloomFilter
from .quotient import QuotientFilter

MAGIC = b"MDTF"
VERSION = 1
BLOOM, CBF, QF = 1, 2, 3


def dump_filter(f) -> bytes:
    w = Writer()
    w.raw(MAGIC)
    w.u16(VERSION)
    if isinstance(f, BloomFilter):
        w.u8(BLOOM)
        w.u64(f.M); w.u8(f.k); w.u64(f.seed); w.u64(f.capacity or 0); w.u64(f.inserted)
        w.words(f.words)
    elif isinstance(f, CountingBloomFilter):
        w.u8(CBF)
        w.u64(f.M); w.u8(f.k); w.u8(f.t); w.u64(f.seed); w.u64(f.capacity or 0); w.u64(f.inserted)
        f.counters.write(w)
    elif isinstance(f, QuotientFilter):
        w.u8(QF)
        w.u8(f.q); w.u8(f.r); w.u64(f.seed); w.f64(f.max_load); w.u64(f.count)
        f.slots.write(w)
    else:
        raise InvalidArgument(f"cannot serialize {type(f).__name__}")
    return w.getvalue()


def load_filter(data: bytes):
    r = Reader(data)
    r.expect(MAGIC)
    if r.u16() != VERSION:
        raise CorruptArtifact("unsupported filter version")
    kind = r.u8()
    try:
        if kind == BLOOM:
            M, k, seed, cap, ins = r.u64(), r.u8(), r.u64(), r.u64(), r.u64()
            f = BloomFilter(M, k, seed, cap or None)
            words = r.words()
            if words.size != f.words.size:
                raise CorruptArtifact("bloom bit array size mismatch")
            f.words = words.astype(np.uint64)
            f.inserted = ins
        elif kind == CBF:
            M, k, t, seed, cap, ins = r.u64(), r.u8(), r.u8(), r.u64(), r.u64(), r.u64()
            f = CountingBloomFilter(M, k, t, seed, cap or None)
            f.counters = MutablePackedArray.read(r)
            if (f.counters.count, f.counters.width) != (M, t):
                raise CorruptArtifact("counter array shape mismatch")
            f.inserted = ins
        elif kind == QF:
            q, rr, seed, ml, cnt = r.u8(), r.u8(), r.u64(), r.f64(), r.u64()
            f = QuotientFilter(q, rr, seed, ml)
            f.slots = MutablePackedArray.read(r)
            if (f.slots.count, f.slots.width) != (1 << q, rr + 3):
                raise CorruptArtifact("slot array shape mismatch")
            f.count = cnt
        else:
            raise CorruptArtifact(f"unknown filter kind {kind}")
    except InvalidArgument as e:
        raise CorruptArtifact(str(e)) from e
    r.done()
    return f
