"""Suffix arrays, the Burrows-Wheeler transform and its inverse.

Texts are byte strings terminated by the sentinel ``$``.  Internally the
sentinel becomes byte 0 so it sorts before every other symbol; a ``$`` or a
zero byte anywhere else is rejected.  All positions and rows are 1-based.
"""
from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument

SENTINEL = ord("$")


def _raw(text) -> bytes:
    if isinstance(text, str):
        return text.encode("latin-1")
    return bytes(text)


def prepare_text(text, *, require_sentinel: bool = False) -> np.ndarray:
    """Return the internal symbol array (uint8, sentinel mapped to 0 at the end).

    A trailing ``$`` is taken as the sentinel; without one, the sentinel is
    appended unless ``require_sentinel`` is set.
    """
    raw = _raw(text)
    if raw.endswith(b"$"):
        body = raw[:-1]
    elif require_sentinel:
        raise InvalidArgument("text must end with the sentinel '$'")
    else:
        body = raw
    if b"$" in body or b"\x00" in body:
        raise InvalidArgument("'$' and NUL may only appear as the final sentinel")
    arr = np.frombuffer(body + b"\x00", dtype=np.uint8)
    return arr.copy()


def to_display(symbols) -> bytes:
    """Internal symbols back to bytes, the sentinel shown as '$'."""
    arr = np.asarray(symbols, dtype=np.uint8)
    return bytes(np.where(arr == 0, SENTINEL, arr).astype(np.uint8))


def suffix_array(t: np.ndarray) -> np.ndarray:
    """Prefix-doubling construction over an internal symbol array.

    Returns 1-based starting positions in lexicographic suffix order.
    """
    n = t.size
    rank = t.astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        # sort by (rank[i], rank[i+k]); positions past the end rank lowest
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        key_a, key_b = rank[sa], second[sa]
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate([[0], np.cumsum((key_a[1:] != key_a[:-1]) | (key_b[1:] != key_b[:-1]))])
        rank = new
        if rank.max() == n - 1 or k >= n:
            break
        k *= 2
    return sa + 1


def sa_build(text) -> np.ndarray:
    """Suffix array of a '$'-terminated text (sentinel required)."""
    return suffix_array(prepare_text(text, require_sentinel=True))


def inverse_sa(sa: np.ndarray) -> np.ndarray:
    """isa[p] = row of text position p; index 0 unused."""
    isa = np.zeros(sa.size + 1, dtype=np.int64)
    isa[sa] = np.arange(1, sa.size + 1)
    return isa


def bwt_symbols(t: np.ndarray, sa: np.ndarray) -> np.ndarray:
    # BWT[i] = T[SA[i]-1], wrapping to the sentinel when SA[i] = 1
    return t[(sa - 2) % t.size]


def bwt_from_text(text) -> bytes:
    t = prepare_text(text, require_sentinel=True)
    return to_display(bwt_symbols(t, suffix_array(t)))


def lf_array(L: np.ndarray) -> np.ndarray:
    """LF as an array over rows 1..n (index 0 unused), from the last column."""
    n = L.size
    order = np.argsort(L, kind="stable")     # F row (0-based) -> L row (0-based)
    lf = np.zeros(n + 1, dtype=np.int64)
    lf[order + 1] = np.arange(1, n + 1)
    return lf


def bwt_invert(bwt) -> bytes:
    raw = _raw(bwt)
    if raw.count(b"$") != 1 or b"\x00" in raw:
        raise InvalidArgument("a BWT contains exactly one sentinel")
    L = np.frombuffer(raw, dtype=np.uint8).copy()
    L[L == SENTINEL] = 0
    n = L.size
    lf = lf_array(L)
    # row 1 is the rotation starting with '$', so L[1] precedes the sentinel
    out = np.empty(n, dtype=np.uint8)
    out[n - 1] = 0
    row = 1
    for k in range(n - 2, -1, -1):
        out[k] = L[row - 1]
        row = lf[row]
    return to_display(out)


# ---------------------------------------------------------------- oracles

def naive_suffix_array(text) -> list:
    t = prepare_text(text, require_sentinel=True).tobytes()
    return [i + 1 for i in sorted(range(len(t)), key=lambda i: t[i:])]


def naive_occurrences(text: bytes, pattern: bytes) -> list:
    """1-based starting positions of ``pattern`` in ``text`` (overlaps included)."""
    m = len(pattern)
    return [i + 1 for i in range(len(text) - m + 1) if text[i:i + m] == pattern] if m else []
