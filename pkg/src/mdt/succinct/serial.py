"""Framing for serialized succinct structures.

Layout (little-endian): b"MDT1", tag (u8), version (u16), payload.
"""
from __future__ import annotations

from ..errors import CorruptArtifact
from .._serial import Reader, Writer

MAGIC = b"MDT1"
VERSION = 1


def dump(obj) -> bytes:
    w = Writer()
    w.raw(MAGIC)
    w.u8(obj.TAG)
    w.u16(VERSION)
    obj.write(w)
    return w.getvalue()


def load(data: bytes, cls=None):
    from .rrr import RsBitvector
    from .eliasfano import EliasFano
    from .wavelet import WaveletTree
    kinds = {c.TAG: c for c in (RsBitvector, EliasFano, WaveletTree)}
    r = Reader(data)
    r.expect(MAGIC)
    tag = r.u8()
    if r.u16() != VERSION:
        raise CorruptArtifact("unsupported version")
    if tag not in kinds or (cls is not None and kinds[tag] is not cls):
        raise CorruptArtifact(f"unexpected structure tag {tag}")
    obj = kinds[tag].read(r)
    r.done()
    return obj


class SerialMixin:
    def to_bytes(self) -> bytes:
        return dump(self)

    @classmethod
    def from_bytes(cls, data: bytes):
        return load(data, cls)
