"""Seeded hash families and Rabin fingerprints.

Everything here is deterministic given a seed.  Scalar evaluation uses Python
integers (exact for any modulus); the ``*_many`` variants work on numpy
uint64 arrays and need a modulus below 2**62.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument, NotFound

MAX_MODULUS = 1 << 62
MERSENNE61 = (1 << 61) - 1
_U64 = np.uint64
_MASK64 = (1 << 64) - 1

# deterministic witness set, correct for every n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def rng_for(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def derive_seeds(seed: int, count: int) -> list[int]:
    return [int(v) for v in rng_for(seed).integers(0, 1 << 63, size=count, dtype=np.int64)]


# ---------------------------------------------------------------- primes

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def gen_prime(lo: int, hi: int, rng=None) -> int:
    """A prime in [lo, hi].

    With an ``rng`` the search starts at a random point and wraps around, so
    different generators give (usually) different primes; without one the
    smallest prime in range is returned.
    """
    if lo < 2 or hi < lo:
        raise InvalidArgument(f"bad prime range [{lo}, {hi}]")
    start = lo
    if rng is not None:
        if isinstance(rng, int):
            rng = rng_for(rng)
        start = lo + int(rng.integers(0, hi - lo + 1)) if hi - lo < (1 << 63) else lo
    for a, b in ((start, hi), (lo, start - 1)):
        x = a
        while x <= b:
            if is_prime(x):
                return x
            x += 1
    raise NotFound(f"no prime in [{lo}, {hi}]")


def collision_free_modulus(n: int, c: int = 2) -> int:
    """Smallest prime M >= n**(c+2); with a random linear hash the chance of
    any collision among n keys is then at most 1/n**c."""
    target = max(2, n) ** (c + 2)
    if target >= MAX_MODULUS:
        raise InvalidArgument(f"n={n}, c={c} needs a modulus beyond 2^62")
    return next_prime(target)


# ------------------------------------------------------- vector mulmod

_LD_OK = np.finfo(np.longdouble).nmant >= 63


def mulmod(a, b, M: int) -> np.ndarray:
    """Elementwise (a*b) mod M for uint64 arrays with a, b < M < 2**62."""
    a = np.asarray(a, dtype=_U64)
    b = np.asarray(b, dtype=_U64)
    if M <= (1 << 32):
        return (a * b) % _U64(M)
    if M == MERSENNE61:
        return _mulmod_m61(a, b)
    if _LD_OK:
        # quotient estimate in 80-bit floats, remainder fixed up in wrapping ints
        q = np.floor(a.astype(np.longdouble) * b.astype(np.longdouble) / np.longdouble(M))
        r = (a * b - q.astype(_U64) * _U64(M)).astype(np.int64)
        r = np.where(r < 0, r + M, r)
        r = np.where(r >= M, r - M, r)
        return r.astype(_U64)
    return np.array([int(x) * int(y) % M for x, y in zip(a.ravel().tolist(), b.ravel().tolist())],
                    dtype=_U64).reshape(np.broadcast(a, b).shape)


def _mulmod_m61(a, b):
    m = _U64(MERSENNE61)
    lo31 = _U64((1 << 31) - 1)
    ah, al = a >> _U64(31), a & lo31
    bh, bl = b >> _U64(31), b & lo31
    mid = ah * bl + al * bh
    x = ((ah * bh) << _U64(1)) + (mid >> _U64(30)) + ((mid & _U64((1 << 30) - 1)) << _U64(31)) + al * bl
    x = (x & m) + (x >> _U64(61))
    x = (x & m) + (x >> _U64(61))
    return np.where(x >= m, x - m, x)


def addmod(a, b, M: int) -> np.ndarray:
    s = np.asarray(a, dtype=_U64) + np.asarray(b, dtype=_U64)
    return np.where(s >= _U64(M), s - _U64(M), s)


def mix64(x, seed: int = 0):
    """splitmix64 finalizer of (x + seed); works on ints and uint64 arrays."""
    if isinstance(x, (int, np.integer)):
        z = (int(x) + seed * 0x9E3779B97F4A7C15 + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)
    with np.errstate(over="ignore"):
        z = np.asarray(x, dtype=_U64) + _U64((seed * 0x9E3779B97F4A7C15 + 0x9E3779B97F4A7C15) & _MASK64)
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        return z ^ (z >> _U64(31))


def as_key(x) -> int:
    """Map a token (int, str or bytes) onto a 64-bit key deterministically."""
    if isinstance(x, (int, np.integer)):
        return int(x) & _MASK64
    if isinstance(x, str):
        x = x.encode("utf-8")
    # FNV-1a then a mixer; stable across processes unlike hash()
    h = 0xCBF29CE484222325
    for c in bytes(x):
        h = ((h ^ c) * 0x100000001B3) & _MASK64
    return mix64(h)


def keys_array(keys) -> np.ndarray:
    """uint64 array of keys; non-integer tokens go through :func:`as_key`."""
    if isinstance(keys, np.ndarray) and keys.dtype.kind in "iu":
        return keys.astype(_U64)
    return np.fromiter((as_key(x) for x in keys), dtype=_U64)


# ------------------------------------------------------- polynomial hashing

class PolyHash:
    """h(x) = sum_i a_i x^i mod M  (k coefficients, degree k-1)."""

    def __init__(self, coeffs, modulus: int):
        if not is_prime(modulus):
            raise InvalidArgument(f"modulus {modulus} is not prime")
        if modulus >= MAX_MODULUS:
            raise InvalidArgument("modulus must be < 2^62")
        self.M = int(modulus)
        self.coeffs = tuple(int(a) % self.M for a in coeffs)
        if not self.coeffs:
            raise InvalidArgument("need at least one coefficient")

    @classmethod
    def random(cls, k: int, modulus: int, seed: int, nonzero_lead: bool = False) -> "PolyHash":
        rng = rng_for(seed)
        coeffs = [int(rng.integers(0, modulus)) for _ in range(k)]
        if nonzero_lead:
            coeffs[-1] = int(rng.integers(1, modulus))
        return cls(coeffs, modulus)

    @classmethod
    def linear(cls, a: int, b: int, modulus: int, collision_free: bool = False) -> "PolyHash":
        if collision_free and a % modulus == 0:
            raise InvalidArgument("collision-free linear hash needs a != 0")
        return cls((b, a), modulus)

    @property
    def k(self):
        return len(self.coeffs)

    def __call__(self, x: int) -> int:
        M = self.M
        x = int(x) % M
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % M
        return acc

    eval = __call__

    def eval_many(self, xs) -> np.ndarray:
        M = self.M
        xs = np.asarray(xs, dtype=_U64) % _U64(M)
        acc = np.zeros(xs.shape, dtype=_U64)
        for a in reversed(self.coeffs):
            acc = addmod(mulmod(acc, xs, M), _U64(a), M)
        return acc

    def unit(self, x) -> float:
        return self(x) / self.M

    def unit_many(self, xs) -> np.ndarray:
        return self.eval_many(xs).astype(np.float64) / self.M

    def __eq__(self, other):
        return isinstance(other, PolyHash) and (self.M, self.coeffs) == (other.M, other.coeffs)

    def __repr__(self):
        return f"PolyHash(M={self.M}, coeffs={self.coeffs})"


def poly_eval(h: PolyHash, x) -> int:
    return h(x)


def unit_hash(h: PolyHash, x) -> float:
    return h.unit(x)


class RangeHash:
    """((a*x + b) mod M) mod m, with a != 0."""

    def __init__(self, a: int, b: int, modulus: int, m: int):
        if m < 1:
            raise InvalidArgument("range must be >= 1")
        self.inner = PolyHash.linear(a, b, modulus, collision_free=True)
        self.m = int(m)

    @classmethod
    def random(cls, modulus: int, m: int, seed: int) -> "RangeHash":
        rng = rng_for(seed)
        a = int(rng.integers(1, modulus))
        b = int(rng.integers(0, modulus))
        return cls(a, b, modulus, m)

    def __call__(self, x) -> int:
        return self.inner(x) % self.m

    def eval_many(self, xs):
        return self.inner.eval_many(xs) % _U64(self.m)


def range_eval(h: RangeHash, x) -> int:
    return h(x)


# ------------------------------------------------------- Rabin fingerprints

class RabinFingerprint(NamedTuple):
    value: int  # kappa(x)
    zpow: int   # z^|x| mod q, stands in for the length


class RabinContext:
    """Prime q, evaluation point z and the power tables z^(2^i), z^(-2^i)."""

    def __init__(self, q: int, z: int, max_len: int = 1):
        if not is_prime(q):
            raise InvalidArgument(f"{q} is not prime")
        if not 0 < z < q:
            # z = 0 has no inverse, which the power tables need
            raise InvalidArgument("z must lie in [1, q)")
        self.q, self.z = int(q), int(z)
        levels = max(1, max_len).bit_length() + 1
        self.pow2 = [self.z]
        for _ in range(levels):
            self.pow2.append(self.pow2[-1] * self.pow2[-1] % q)
        self.inv_pow2 = [pow(p, q - 2, q) for p in self.pow2]  # Fermat inverse
        for p, ip in zip(self.pow2, self.inv_pow2):
            assert p * ip % q == 1
        self.inv_z = self.inv_pow2[0]

    @classmethod
    def random(cls, seed: int, q: int | None = None, m_max: int = 1 << 10, max_len: int = 1):
        """Random context; by default q is a prime in [m_max^3, 2 m_max^3]."""
        rng = rng_for(seed)
        if q is None:
            lo = max(3, m_max) ** 3
            q = gen_prime(lo, 2 * lo, rng)
        z = int(rng.integers(1, q))
        return cls(q, z, max_len)

    def power(self, e: int) -> int:
        return pow(self.z, e, self.q)

    def power_of_two(self, i: int) -> int:
        return self.pow2[i]

    def inv_power_of_two(self, i: int) -> int:
        return self.inv_pow2[i]

    @property
    def empty(self) -> RabinFingerprint:
        return RabinFingerprint(0, 1)

    def of(self, s) -> RabinFingerprint:
        q, z = self.q, self.z
        v = 0
        for c in _bytes(s):
            v = (v * z + c) % q
        return RabinFingerprint(v, pow(z, len(s), q))

    def append(self, f: RabinFingerprint, c: int) -> RabinFingerprint:
        return RabinFingerprint((f.value * self.z + c) % self.q, f.zpow * self.z % self.q)

    def concat(self, f1: RabinFingerprint, f2: RabinFingerprint) -> RabinFingerprint:
        q = self.q
        return RabinFingerprint((f1.value * f2.zpow + f2.value) % q, f1.zpow * f2.zpow % q)

    def slide(self, f: RabinFingerprint, out_c: int, in_c: int, z_pow_nm1: int) -> RabinFingerprint:
        q = self.q
        return RabinFingerprint(((f.value - out_c * z_pow_nm1) * self.z + in_c) % q, f.zpow)

    def prefix_values(self, s) -> list[int]:
        """kappa of every prefix s[:1], s[:2], ... (for oracles and bulk checks)."""
        out, v = [], 0
        q, z = self.q, self.z
        for c in _bytes(s):
            v = (v * z + c) % q
            out.append(v)
        return out


def _bytes(s) -> bytes:
    if isinstance(s, str):
        return s.encode("latin-1")
    return bytes(s)


def rabin_of(ctx: RabinContext, s) -> RabinFingerprint:
    return ctx.of(s)


def rabin_append(ctx: RabinContext, f, c) -> RabinFingerprint:
    return ctx.append(f, c)


def rabin_concat(ctx: RabinContext, f1, f2) -> RabinFingerprint:
    return ctx.concat(f1, f2)


def rabin_slide(ctx: RabinContext, f, out_c, in_c, z_pow_nm1) -> RabinFingerprint:
    return ctx.slide(f, out_c, in_c, z_pow_nm1)


def log2_ceil(x: float) -> int:
    return max(0, math.ceil(math.log2(x)))
