"""A short tour of the library: index a text, filter keys, sketch a stream,
and match a pattern in a byte stream.

    python3 demos/tour.py
"""
import numpy as np

from mdt.entropy import FrequencyTable, hk, huffman_build
from mdt.filters import BloomFilter, QuotientFilter
from mdt.sketches import DgimWindow, DistinctCounter, MinHashSketch, MorrisCounter
from mdt.streammatch import KMismatchMatcher, PpMatcher, make_context
from mdt.succinct import EliasFano, RsBitvector
from mdt.textindex import CsaIndex, FmIndex, dump_index, load_index

text = b"she sells sea shells by the sea shore"

print("-- entropy")
freqs = FrequencyTable.of(text)
print(f"H0={hk(text, 0):.3f}  H2={hk(text, 2):.3f}  huffman={huffman_build(freqs).encoded_length(freqs)} bits")

print("-- succinct")
bits = (np.random.default_rng(1).random(1000) < 0.1).astype(np.uint8)
bv = RsBitvector(bits)
print(f"rank1(500)={bv.rank1(500)}  select1(10)={bv.select1(10)}  offset bits={bv.offset_bits}")
ef = EliasFano([3, 7, 7, 40, 41, 99], 100)
print("elias-fano:", ef.to_list(), "high:", ef.high_bits())

print("-- text index")
for cls in (FmIndex, CsaIndex):
    ix = load_index(dump_index(cls(text)))  # serialization round trip
    print(f"{cls.__name__}: count('sea')={ix.count(b'sea')} locate('sh')={ix.locate(b'sh')} "
          f"extract(5,5)={ix.extract(5, 5)!r}")

print("-- filters")
bf = BloomFilter.for_capacity(1000, 0.01, seed=7)
qf = QuotientFilter.for_capacity(1000, 0.01, seed=7)
for w in text.split():
    bf.add(w)
    qf.add(w)
print("bloom 'sea':", b"sea" in bf, " 'lake':", b"lake" in bf)
print("qf    'sea':", b"sea" in qf, " 'lake':", b"lake" in qf)

print("-- sketches")
dc = DistinctCounter(eps=0.1, seed=3)
dc.offer_many(np.arange(50_000, dtype=np.uint64) % 20_000)
print(f"distinct ~ {dc.estimate():.0f} (true 20000)")
mc = MorrisCounter(seed=3)
mc.add(100_000)
print(f"morris ~ {mc.estimate():.0f} (true 100000)")
a = MinHashSketch.build(range(0, 300), 738, seed=5)
b = MinHashSketch.build(range(100, 400), 738, seed=5)
print(f"minhash J ~ {a.jaccard(b):.3f} (true 0.5)")
w = DgimWindow(100, 0.5)
for i in range(1000):
    w.push(i % 3 == 0)
print(f"dgim ones in last 100 ~ {w.count(100)} (true 33)")

print("-- stream matching")
ctx = make_context(len(text), 3, seed=11)
print("pp  'sea' ends at:", list(PpMatcher(b"sea", ctx).feed(text)))
print("1-mismatch 'sea':", list(KMismatchMatcher(b"sea", 1, ctx).feed(text)))
