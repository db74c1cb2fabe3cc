"""Pointer-based wavelet tree over a byte string.

The tree shape is given by a prefix-free code: the root routes every
character by the first bit of its codeword, the children by the second bit,
and so on.  A balanced fixed-width code is used by default; passing a Huffman
code gives a Huffman-shaped tree.
"""
from __future__ import annotations

import numpy as np

from ..errors import BoundsError, InvalidArgument, NotFound, CorruptArtifact
from .._serial import Reader, Writer
from ..entropy import HuffmanCode, huffman_build, FrequencyTable, is_prefix_free
from .rrr import RsBitvector
from .serial import SerialMixin


def balanced_code(symbols) -> dict:
    syms = sorted(set(symbols))
    if not syms:
        raise InvalidArgument("empty alphabet")
    width = (len(syms) - 1).bit_length()
    return {s: format(i, f"0{width}b") if width else "" for i, s in enumerate(syms)}


def huffman_code_for(s) -> dict:
    return huffman_build(FrequencyTable.of(s)).codewords


class _Node:
    __slots__ = ("bv", "kids", "symbol")

    def __init__(self):
        self.bv = None          # RsBitvector, or None for leaves / empty nodes
        self.kids = [None, None]
        self.symbol = None


def _as_array(s) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return s.astype(np.int64)
    if isinstance(s, str):
        s = s.encode("latin-1")
    return np.frombuffer(bytes(s), dtype=np.uint8).astype(np.int64)


class WaveletTree(SerialMixin):
    TAG = 3

    def __init__(self, s, code=None):
        seq = _as_array(s)
        if code is None:
            code = balanced_code(seq.tolist()) if seq.size else {}
        elif isinstance(code, HuffmanCode):
            code = code.codewords
        elif code == "huffman":
            code = huffman_code_for(bytes(seq.astype(np.uint8)))
        code = {int(k): str(v) for k, v in code.items()}
        if len(code) > 1 and not is_prefix_free(code):
            raise InvalidArgument("code is not prefix-free")
        missing = set(np.unique(seq).tolist()) - set(code)
        if missing:
            raise InvalidArgument(f"symbols without codeword: {sorted(missing)}")
        self.code = code
        self.n = int(seq.size)
        self.root = self._make_shape()
        self._fill(self.root, seq, 0)

    def _make_shape(self):
        root = _Node()
        for sym, word in self.code.items():
            node = root
            for ch in word:
                bit = int(ch)
                if node.kids[bit] is None:
                    node.kids[bit] = _Node()
                node = node.kids[bit]
            node.symbol = sym
        return root

    def _fill(self, node, seq, depth):
        if node.symbol is not None or seq.size == 0:
            return
        lut = np.zeros(256, dtype=np.uint8)
        for sym, word in self.code.items():
            if len(word) > depth:
                lut[sym] = int(word[depth])
        bits = lut[seq]
        node.bv = RsBitvector(bits)
        for b in (0, 1):
            if node.kids[b] is not None:
                self._fill(node.kids[b], seq[bits == b], depth + 1)

    def __len__(self):
        return self.n

    @property
    def alphabet(self):
        return sorted(self.code)

    # -------------------------------------------------------------- queries
    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise BoundsError(f"position {i} outside 1..{self.n}")
        return self.access_rank(i)[0]

    __getitem__ = access

    def rank(self, c: int, i: int) -> int:
        if c not in self.code:
            raise InvalidArgument(f"symbol {c!r} not in alphabet")
        if not 0 <= i <= self.n:
            raise BoundsError(f"rank position {i} outside 0..{self.n}")
        node = self.root
        for ch in self.code[c]:
            if i == 0 or node.bv is None:
                return 0
            bit = int(ch)
            i = node.bv.rank(bit, i)
            node = node.kids[bit]
        return i

    def select(self, c: int, j: int) -> int:
        if c not in self.code:
            raise InvalidArgument(f"symbol {c!r} not in alphabet")
        if j < 1 or j > self.rank(c, self.n):
            raise NotFound(f"no {j}-th occurrence of {c!r}")
        path = []
        node = self.root
        for ch in self.code[c]:
            path.append((node, int(ch)))
            node = node.kids[int(ch)]
        for node, bit in reversed(path):
            j = node.bv.select(bit, j)
        return j

    def access_rank(self, i: int):
        """(S[i], rank_{S[i]}(i)) in one root-to-leaf walk."""
        if not 1 <= i <= self.n:
            raise BoundsError(f"position {i} outside 1..{self.n}")
        node = self.root
        while node.symbol is None:
            bit, r1 = node.bv.access_rank1(i)
            i = r1 if bit else i - r1
            node = node.kids[bit]
        return node.symbol, i

    # -------------------------------------------------------------- bulk
    def access_rank_many(self, pos):
        pos = np.asarray(pos, dtype=np.int64)
        if pos.size and (pos.min() < 1 or pos.max() > self.n):
            raise BoundsError("position out of range")
        sym = np.zeros(pos.shape, dtype=np.int64)
        rnk = np.zeros(pos.shape, dtype=np.int64)
        stack = [(self.root, np.arange(pos.size), pos)]
        while stack:
            node, where, p = stack.pop()
            if not where.size:
                continue
            if node.symbol is not None:
                sym[where] = node.symbol
                rnk[where] = p
                continue
            bits, r1 = node.bv.access_rank1_many(p)
            one = bits == 1
            stack.append((node.kids[0], where[~one], (p - r1)[~one]))
            stack.append((node.kids[1], where[one], r1[one]))
        return sym, rnk

    def access_many(self, pos):
        return self.access_rank_many(pos)[0]

    def rank_many(self, c: int, pos) -> np.ndarray:
        if c not in self.code:
            raise InvalidArgument(f"symbol {c!r} not in alphabet")
        p = np.asarray(pos, dtype=np.int64).copy()
        node = self.root
        for ch in self.code[c]:
            if node.bv is None:
                return np.zeros_like(p)
            p = node.bv.rank_many(int(ch), p)
            node = node.kids[int(ch)]
        return p

    def to_bytes_text(self) -> bytes:
        if self.n == 0:
            return b""
        return bytes(self.access_many(np.arange(1, self.n + 1)).astype(np.uint8))

    # -------------------------------------------------------------- accounting
    def nodes(self):
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node is None:
                continue
            out.append(node)
            stack.extend(node.kids)
        return out

    def bitvector_lengths_total(self) -> int:
        return sum(nd.bv.n for nd in self.nodes() if nd.bv is not None)

    def space_bits(self) -> int:
        return sum(nd.bv.space_bits() for nd in self.nodes() if nd.bv is not None)

    def leaf_depths(self) -> dict:
        return {s: len(w) for s, w in self.code.items()}

    # -------------------------------------------------------------- serialization
    def write(self, w: Writer):
        w.u64(self.n)
        w.u16(len(self.code))
        for sym in sorted(self.code):
            word = self.code[sym]
            w.u8(sym)
            w.u16(len(word))
            w.raw(word.encode())
        # preorder over the shape, one presence flag per internal node
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node is None or node.symbol is not None:
                continue
            w.u8(1 if node.bv is not None else 0)
            if node.bv is not None:
                node.bv.write(w)
            stack.extend([node.kids[1], node.kids[0]])

    @classmethod
    def read(cls, r: Reader) -> "WaveletTree":
        obj = cls.__new__(cls)
        obj.n = r.u64()
        code = {}
        for _ in range(r.u16()):
            sym = r.u8()
            word = r.raw(r.u16()).decode("ascii", errors="replace")
            if word.strip("01"):
                raise CorruptArtifact("bad codeword")
            code[sym] = word
        if len(code) > 1 and not is_prefix_free(code):
            raise CorruptArtifact("stored code is not prefix-free")
        obj.code = code
        obj.root = obj._make_shape()
        stack = [obj.root]
        while stack:
            node = stack.pop()
            if node is None or node.symbol is not None:
                continue
            if r.u8():
                node.bv = RsBitvector.read(r)
            stack.extend([node.kids[1], node.kids[0]])
        if obj.root.bv is not None and obj.root.bv.n != obj.n:
            raise CorruptArtifact("root bitvector length differs from n")
        return obj
