"""Index files: b"MDTI", kind (u8: CSA=1, FM=2), version (u16), n, sigma, rho."""
from __future__ import annotations

from ..errors import CorruptArtifact
from .._serial import Reader, Writer
from .csa import CsaIndex
from .fm import FmIndex

MAGIC = b"MDTI"
VERSION = 1
KINDS = {CsaIndex.KIND: CsaIndex, FmIndex.KIND: FmIndex}


def dump_index(ix) -> bytes:
    w = Writer()
    w.raw(MAGIC)
    w.u8(ix.KIND)
    w.u16(VERSION)
    w.u64(ix.n)
    w.u16(ix.sigma)
    w.u32(ix.rho)
    ix.write(w)
    return w.getvalue()


def load_index(data: bytes):
    r = Reader(data)
    r.expect(MAGIC)
    kind = r.u8()
    if kind not in KINDS:
        raise CorruptArtifact(f"unknown index kind {kind}")
    if r.u16() != VERSION:
        raise CorruptArtifact("unsupported index version")
    n, sigma, rho = r.u64(), r.u16(), r.u32()
    ix = KINDS[kind].read(r, n, rho)
    r.done()
    if ix.sigma != sigma:
        raise CorruptArtifact("alphabet size mismatch")
    return ix
