"""Tiny little-endian binary reader/writer used by all serializers."""
import struct

import numpy as np

from .errors import CorruptArtifact


class Writer:
    def __init__(self):
        self._parts = []

    def raw(self, b: bytes):
        self._parts.append(bytes(b))

    def u8(self, v):
        self._parts.append(struct.pack("<B", v))

    def u16(self, v):
        self._parts.append(struct.pack("<H", v))

    def u32(self, v):
        self._parts.append(struct.pack("<I", v))

    def u64(self, v):
        self._parts.append(struct.pack("<Q", v))

    def f64(self, v):
        self._parts.append(struct.pack("<d", v))

    def blob(self, b: bytes):
        self.u64(len(b))
        self._parts.append(bytes(b))

    def words(self, arr):
        arr = np.ascontiguousarray(arr, dtype="<u8")
        self.u64(arr.size)
        self._parts.append(arr.tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = memoryview(data)
        self.pos = pos

    def _take(self, n):
        if n < 0 or self.pos + n > len(self.data):
            raise CorruptArtifact("truncated data")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def raw(self, n) -> bytes:
        return bytes(self._take(n))

    def u8(self):
        return self._take(1)[0]

    def u16(self):
        return struct.unpack("<H", self._take(2))[0]

    def u32(self):
        return struct.unpack("<I", self._take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self._take(8))[0]

    def f64(self):
        return struct.unpack("<d", self._take(8))[0]

    def blob(self) -> bytes:
        return bytes(self._take(self.u64()))

    def words(self):
        n = self.u64()
        return np.frombuffer(self._take(8 * n), dtype="<u8").astype(np.uint64)

    def expect(self, magic: bytes):
        got = self.raw(len(magic))
        if got != magic:
            raise CorruptArtifact(f"bad magic {got!r}, expected {magic!r}")

    def done(self):
        if self.pos != len(self.data):
            raise CorruptArtifact("trailing bytes after artifact")
