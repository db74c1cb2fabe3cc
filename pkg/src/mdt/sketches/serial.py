"""Binary format for sketches: b"MDTS", u16 version, u8 kind, parameters, state."""
import json
from collections import deque

import numpy as np

from .._serial import Reader, Writer
from ..errors import CorruptArtifact, InvalidArgument
from .counters import Boosted, BoostConfig, DistinctCounter, MorrisCounter
from .dgim import DgimSum, DgimWindow
from .minhash import MinHashSketch

MAGIC = b"MDTS"
VERSION = 1
DISTINCT, MINHASH, MORRIS, DGIM, DGIM_SUM, BOOSTED = 1, 2, 3, 4, 5, 6


def _write_dgim(w: Writer, d: DgimWindow):
    w.u64(d.W); w.f64(d.eps); w.u64(d.clock); w.u16(len(d.levels))
    for lv in d.levels:
        w.words(np.array(list(lv), dtype=np.uint64))


def _read_dgim(r: Reader) -> DgimWindow:
    W, eps, clock, nlev = r.u64(), r.f64(), r.u64(), r.u16()
    d = DgimWindow(W, eps)
    d.clock = clock
    d.levels = [deque(int(x) for x in r.words()) for _ in range(nlev)]
    if any(len(lv) > d.B + 1 for lv in d.levels) or any(s >= 2 * W for lv in d.levels for s in lv):
        raise CorruptArtifact("group lists violate the window invariants")
    return d


def _plain(x):
    # numpy generator state -> JSON-able (arrays become tagged lists)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, np.ndarray):
        return {"__u64__": [int(v) for v in x]}
    return x


def _unplain(x):
    if isinstance(x, dict):
        if set(x) == {"__u64__"}:
            return np.array(x["__u64__"], dtype=np.uint64)
        return {k: _unplain(v) for k, v in x.items()}
    return x


def dump_sketch(s) -> bytes:
    w = Writer()
    w.raw(MAGIC)
    w.u16(VERSION)
    if isinstance(s, DistinctCounter):
        w.u8(DISTINCT)
        w.u64(s.k); w.u64(s.seed); w.u64(s.M)
        w.words(np.array(s.values(), dtype=np.uint64))
    elif isinstance(s, MinHashSketch):
        w.u8(MINHASH)
        w.u64(s.k); w.u64(s.seed)
        w.words(s.minima)
    elif isinstance(s, MorrisCounter):
        w.u8(MORRIS)
        w.u64(s.seed); w.u8(s.x); w.u8(int(s.saturated))
        w.blob(json.dumps(_plain(s._rng.bit_generator.state)).encode())
    elif isinstance(s, DgimWindow):
        w.u8(DGIM)
        _write_dgim(w, s)
    elif isinstance(s, DgimSum):
        w.u8(DGIM_SUM)
        w.u8(s.q)
        for p in s.planes:
            _write_dgim(w, p)
    elif isinstance(s, Boosted):
        # copies are stored one after another, each as a complete sketch
        w.u8(BOOSTED)
        w.f64(s.cfg.epsilon); w.f64(s.cfg.delta); w.u32(s.cfg.s); w.u32(s.cfg.t)
        for inst in s.instances:
            w.blob(dump_sketch(inst))
    else:
        raise InvalidArgument(f"cannot serialize {type(s).__name__}")
    return w.getvalue()


def load_sketch(data: bytes):
    r = Reader(data)
    r.expect(MAGIC)
    if r.u16() != VERSION:
        raise CorruptArtifact("unsupported sketch version")
    kind = r.u8()
    try:
        if kind == DISTINCT:
            k, seed, M = r.u64(), r.u64(), r.u64()
            s = DistinctCounter(k=k, seed=seed, modulus=M)
            vals = [int(v) for v in r.words()]
            if len(vals) > k or vals != sorted(set(vals)) or (vals and vals[-1] >= M):
                raise CorruptArtifact("bottom-k values malformed")
            s._set = set(vals)
            s._heap = sorted((-v for v in vals))
        elif kind == MINHASH:
            k, seed = r.u64(), r.u64()
            s = MinHashSketch(k, seed, r.words())
        elif kind == MORRIS:
            seed, x, sat = r.u64(), r.u8(), r.u8()
            s = MorrisCounter(seed, x)
            s.saturated = bool(sat)
            s._rng.bit_generator.state = _unplain(json.loads(r.blob()))
        elif kind == DGIM:
            s = _read_dgim(r)
        elif kind == DGIM_SUM:
            q = r.u8()
            planes = [_read_dgim(r) for _ in range(q)]
            s = DgimSum(planes[0].W, planes[0].eps, q)
            s.planes = planes
        elif kind == BOOSTED:
            cfg = BoostConfig(r.f64(), r.f64(), r.u32(), r.u32())
            s = Boosted.__new__(Boosted)
            s.cfg = cfg
            s.instances = [load_sketch(r.blob()) for _ in range(cfg.s * cfg.t)]
            if len({type(i) for i in s.instances}) > 1:
                raise CorruptArtifact("boosted copies of different kinds")
        else:
            raise CorruptArtifact(f"unknown sketch kind {kind}")
    except (InvalidArgument, ValueError, KeyError, TypeError) as e:
        if isinstance(e, CorruptArtifact):
            raise
        raise CorruptArtifact(str(e)) from e
    r.done()
    return s
