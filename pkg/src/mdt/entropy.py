"""Entropy measures and Huffman coding.

All strings are byte strings; symbols are byte values.  Entropies are in bits
per symbol.
"""
from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import DecodingError, EncodingError, InvalidArgument


def worst_case_entropy(universe_size: int) -> int:
    """Bits needed to name one element of a universe of the given size."""
    if universe_size < 1:
        raise InvalidArgument("universe size must be >= 1")
    return (universe_size - 1).bit_length()  # == ceil(log2 u), exact for ints


def _as_bytes(s) -> bytes:
    if isinstance(s, str):
        return s.encode("latin-1")
    return bytes(s)


def _h0_counts(counts, n) -> float:
    return sum(c / n * math.log2(n / c) for c in counts if c)


def h0(s) -> float:
    s = _as_bytes(s)
    if not s:
        raise InvalidArgument("h0 of an empty string is undefined")
    return _h0_counts(Counter(s).values(), len(s))


def context_string(s, w) -> bytes:
    """Characters preceding each occurrence of ``w`` in the circular string ``s``.

    Occurrences may wrap around the end; the character before position 1 is
    the last character of ``s``.
    """
    s, w = _as_bytes(s), _as_bytes(w)
    n, k = len(s), len(w)
    if not 1 <= k <= n:
        raise InvalidArgument("context length must be in 1..len(s)")
    ss = s + s[: k - 1]
    return bytes(s[i - 1] for i in range(n) if ss[i:i + k] == w)


def hk(s, k: int) -> float:
    """k-th order empirical entropy of the circular string ``s``."""
    s = _as_bytes(s)
    n = len(s)
    if n == 0:
        raise InvalidArgument("hk of an empty string is undefined")
    if not 0 <= k <= n:
        raise InvalidArgument("k must be in 0..len(s)")
    if k == 0:
        return h0(s)
    # group preceding characters by the length-k context that follows them
    ss = s + s[: k - 1]
    groups: dict[bytes, Counter] = {}
    for i in range(n):
        groups.setdefault(ss[i:i + k], Counter())[s[i - 1]] += 1
    total = 0.0
    for cnt in groups.values():
        m = sum(cnt.values())
        total += m / n * _h0_counts(cnt.values(), m)
    return total


# --------------------------------------------------------------------- Huffman

@dataclass
class FrequencyTable:
    counts: dict

    def __post_init__(self):
        if any(c < 1 for c in self.counts.values()):
            raise InvalidArgument("stored counts must be >= 1")

    @classmethod
    def of(cls, s) -> "FrequencyTable":
        return cls(dict(Counter(_as_bytes(s))))

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class HuffmanCode:
    codewords: dict            # symbol -> '0'/'1' string
    tree: object = field(repr=False, default=None)  # nested (left, right) tuples / int leaves

    def encoded_length(self, freqs: FrequencyTable) -> int:
        return sum(c * len(self.codewords[s]) for s, c in freqs.counts.items())

    def encode(self, s) -> str:
        return huffman_encode(self, s)

    def decode(self, bits: str) -> bytes:
        return huffman_decode(self, bits)


def huffman_build(freqs) -> HuffmanCode:
    if not isinstance(freqs, FrequencyTable):
        freqs = FrequencyTable(dict(freqs))
    if not freqs.counts:
        raise InvalidArgument("cannot build a code for an empty alphabet")
    syms = sorted(freqs.counts)
    if len(syms) == 1:
        return HuffmanCode({syms[0]: "0"}, (syms[0],))
    # ties: leaves (by symbol) before merged nodes (by creation order)
    heap = [(freqs.counts[s], 0, s, s) for s in syms]
    heapq.heapify(heap)
    made = 0
    while len(heap) > 1:
        f1, _, _, a = heapq.heappop(heap)
        f2, _, _, b = heapq.heappop(heap)
        made += 1
        heapq.heappush(heap, (f1 + f2, 1, made, (a, b)))
    tree = heap[0][3]
    codes = {}
    stack = [(tree, "")]
    while stack:
        node, prefix = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], prefix + "0"))
            stack.append((node[1], prefix + "1"))
        else:
            codes[node] = prefix
    return HuffmanCode(codes, tree)


def huffman_encode(code: HuffmanCode, s) -> str:
    out = []
    for c in _as_bytes(s):
        try:
            out.append(code.codewords[c])
        except KeyError:
            raise EncodingError(f"symbol {c!r} has no codeword") from None
    return "".join(out)


def huffman_decode(code: HuffmanCode, bits: str) -> bytes:
    inverse = {v: k for k, v in code.codewords.items()}
    out = bytearray()
    cur = ""
    for ch in bits:
        if ch not in "01":
            raise DecodingError("bit string may only contain 0 and 1")
        cur += ch
        if cur in inverse:
            out.append(inverse[cur])
            cur = ""
    if cur:
        raise DecodingError("trailing bits do not form a complete codeword")
    return bytes(out)


def is_prefix_free(codewords) -> bool:
    words = sorted(codewords.values())
    return all(not words[i + 1].startswith(words[i]) for i in range(len(words) - 1))
