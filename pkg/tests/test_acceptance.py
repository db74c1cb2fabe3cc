"""Acceptance harness: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""
import math
import os
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from corpus import english_like
from mdt import entropy as E
from mdt.filters import (BloomFilter, CountingBloomFilter, QuotientFilter, bloom_params)
from mdt.hashing import keys_array
from mdt.sketches import (Boosted, BoostConfig, DgimWindow, DistinctCounter, LshIndex,
                          MinHashSketch, MorrisCounter, check_rules, lower_median, lsh_fit_r,
                          lsh_scurve, minhash_k)
from mdt.streammatch import KrMatcher, PpMatcher, make_context
from mdt.streammatch.pp import PpLevel
from mdt.succinct import EliasFano, RsBitvector
from mdt.succinct import rrr as rrr_mod
from mdt.textindex import CsaIndex, FmIndex, bwt_from_text, sa_build


@contextmanager
def criterion(log, num, title):
    info = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as e:
        line = f"FAIL criterion {num}: {title} -- {info['detail']} [{time.perf_counter() - t0:.1f} s] ({type(e).__name__}: {str(e)[:160]})"
        print(line)
        log.append(line)
        raise
    line = f"PASS criterion {num}: {title} -- {info['detail']} [{time.perf_counter() - t0:.1f} s]"
    print(line)
    log.append(line)


# ------------------------------------------------------------- oracles

def occurrences(text: bytes, p: bytes) -> list:
    out, i = [], text.find(p)
    while i >= 0:
        out.append(i + 1)
        i = text.find(p, i + 1)
    return out


def occurrence_ends(p: bytes, s: bytes) -> list:
    return [x + len(p) - 1 for x in occurrences(s, p)]


# ------------------------------------------------------------ criterion 1

def test_criterion_1_fixture_battery(acceptance_log):
    with criterion(acceptance_log, 1, "worked-example fixtures") as info:
        t0 = time.perf_counter()
        assert sa_build("abaab$").tolist() == [6, 3, 4, 1, 5, 2]
        assert sa_build("BANANA$").tolist() == [7, 6, 4, 2, 1, 5, 3]
        assert CsaIndex("BANANA$").psi_array()[1:] == [1, 6, 7, 4, 2, 3]
        assert bwt_from_text("mississippi$") == b"ipssm$pissii"
        fm = FmIndex("aabbbababbbaababa$")
        assert fm.count_range("ab") == (5, 9)
        assert fm.count_range("bab") == (12, 14)
        assert EliasFano([0, 5, 8, 12, 14, 17, 20, 31], 32).high_bits() == "101010110101001"
        bv = RsBitvector([int(c) for c in "011100010100110011"])
        assert (bv.access(5), bv.rank0(6), bv.rank1(8), bv.select1(4), bv.select0(3)) == (0, 3, 4, 8, 6)
        freqs = E.FrequencyTable.of("abracadabra")
        assert E.huffman_build(freqs).encoded_length(freqs) == 23
        assert abs(E.hk("aababbabab", 2) - 0.65) <= 0.01
        assert bloom_params(10 ** 7, 0.1) == (3, 48_100_000)
        assert lsh_fit_r(100000, 0.9) == 5
        assert abs(lsh_scurve(0.4, 10, 1200) - 0.999) <= 0.001
        assert abs(lsh_scurve(0.7, 10, 1200) - 0.007) <= 0.001
        assert abs(lsh_scurve(0.85, 5, 100000) - 0.99949) <= 0.0005
        assert abs(lsh_scurve(0.95, 5, 100000) - 0.03076) <= 0.0005
        elapsed = time.perf_counter() - t0
        info["detail"] = f"all fixtures exact, {elapsed * 1000:.0f} ms (budget 1 s)"
        assert elapsed < 1.0


# ------------------------------------------------------------ criterion 2

def _bitvector_exhaustive(max_len=18):
    """Every bit vector of length 1..max_len; returns (vectors, mismatches)."""
    vectors = mismatches = 0
    for L in range(1, max_len + 1):
        vals = np.arange(1 << L, dtype=np.int64)
        mat = ((vals[:, None] >> np.arange(L - 1, -1, -1)) & 1).astype(np.uint8)
        ranks = np.concatenate([np.zeros((mat.shape[0], 1), np.int64), np.cumsum(mat, axis=1)], axis=1)
        rng1 = range(1, L + 1)
        for row, rk in zip(mat, ranks):
            bits = row.tolist()
            bv = RsBitvector(row)
            rk = rk.tolist()
            ones = [i for i in rng1 if bits[i - 1]]
            zeros = [i for i in rng1 if not bits[i - 1]]
            got_access = [bv.access(i) for i in rng1]
            got_rank = [bv.rank1(i) for i in range(L + 1)]
            got_s1 = [bv.select1(j) for j in range(1, len(ones) + 1)]
            got_s0 = [bv.select0(j) for j in range(1, len(zeros) + 1)]
            mismatches += ((got_access != bits) + (got_rank != rk)
                           + (got_s1 != ones) + (got_s0 != zeros))
            vectors += 1
    return vectors, mismatches


def _bitvector_random(count=1000, max_len=10 ** 5, seed=2024):
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(count):
        n = int(rng.integers(1, max_len + 1))
        density = rng.random()
        bits = (rng.random(n) < density).astype(np.uint8)
        bv = RsBitvector(bits)
        pos = np.arange(1, n + 1)
        acc, rank = bv.access_rank1_many(pos)
        want_rank = np.cumsum(bits)
        mismatches += int(not np.array_equal(acc, bits)) + int(not np.array_equal(rank, want_rank))
        ones = np.flatnonzero(bits) + 1
        zeros = np.flatnonzero(bits == 0) + 1
        if ones.size:
            mismatches += int(not np.array_equal(bv.select_many(1, np.arange(1, ones.size + 1)), ones))
        if zeros.size:
            mismatches += int(not np.array_equal(bv.select_many(0, np.arange(1, zeros.size + 1)), zeros))
        # the scalar paths on a sample
        for i in rng.integers(1, n + 1, size=5).tolist():
            mismatches += bv.access(i) != bits[i - 1]
            mismatches += bv.rank0(i) != i - int(want_rank[i - 1])
        if ones.size:
            j = int(rng.integers(1, ones.size + 1))
            mismatches += bv.select1(j) != ones[j - 1]
    return count, mismatches


def _textindex_fuzz(count=1000, seed=77):
    rng = np.random.default_rng(seed)
    mismatches = queries = 0
    for _ in range(count):
        sigma = int(rng.integers(1, 9))
        n = int(rng.integers(1, 10 ** 4 + 1))
        text = bytes((rng.integers(0, sigma, size=n) + ord("a")).astype(np.uint8))
        fm, csa = FmIndex(text), CsaIndex(text)
        for _ in range(10):
            if rng.random() < 0.7:
                i = int(rng.integers(0, n))
                p = text[i:i + int(rng.integers(1, 12))]
            else:
                p = bytes((rng.integers(0, sigma + 1, size=int(rng.integers(1, 6))) + ord("a")).astype(np.uint8))
            want = occurrences(text, p)
            for ix in (fm, csa):
                mismatches += ix.count(p) != len(want)
                mismatches += ix.locate(p) != want
            i = int(rng.integers(1, n + 1))
            ln = int(rng.integers(0, min(50, n - i + 1) + 1))
            for ix in (fm, csa):
                mismatches += ix.extract(i, ln) != text[i - 1:i - 1 + ln]
            queries += 1
    return queries, mismatches


def _stream_fuzz(count=500, m_max=10 ** 4, seed=5):
    rng = np.random.default_rng(seed)
    mismatches = occ_total = 0
    for case in range(count):
        n = (4, 16, 64)[case % 3]
        sigma = int(rng.integers(1, 5))
        if rng.random() < 0.3:  # periodic pattern: many overlapping occurrences
            unit = bytes((rng.integers(0, sigma, size=int(rng.integers(1, 4))) + 97).astype(np.uint8))
            pattern = (unit * n)[:n]
        else:
            pattern = bytes((rng.integers(0, sigma, size=n) + 97).astype(np.uint8))
        m = int(rng.integers(n, m_max + 1))
        stream = bytearray((rng.integers(0, sigma, size=m) + 97).astype(np.uint8))
        for _ in range(int(rng.integers(0, 20))):  # plant copies
            at = int(rng.integers(0, m - n + 1))
            stream[at:at + n] = pattern
        stream = bytes(stream)
        ctx = make_context(m_max, n, seed=int(rng.integers(0, 2 ** 31)))
        assert ctx.q >= m ** 3
        want = occurrence_ends(pattern, stream)
        pp = list(PpMatcher(pattern, ctx).feed(stream))
        kr = list(KrMatcher(pattern, ctx).feed(stream))
        mismatches += (pp != want) + (kr != want)
        occ_total += len(want)
    return count, occ_total, mismatches


def test_criterion_2_oracle_equivalence(acceptance_log):
    with criterion(acceptance_log, 2, "oracle equivalence") as info:
        parts = {}
        t = time.perf_counter()
        nvec, bad_ex = _bitvector_exhaustive()
        parts["bitvectors<=18"] = time.perf_counter() - t
        t = time.perf_counter()
        nrand, bad_rand = _bitvector_random()
        parts["random bitvectors"] = time.perf_counter() - t
        t = time.perf_counter()
        nq, bad_ix = _textindex_fuzz()
        parts["FM/CSA"] = time.perf_counter() - t
        t = time.perf_counter()
        ncase, nocc, bad_stream = _stream_fuzz()
        parts["PP/KR"] = time.perf_counter() - t
        total = sum(parts.values())
        info["detail"] = (f"mismatches: {bad_ex} over {nvec} exhaustive vectors, {bad_rand} over {nrand} random, "
                          f"{bad_ix} over {nq} index queries, {bad_stream} over {ncase} stream cases ({nocc} occurrences); "
                          + ", ".join(f"{k} {v:.0f} s" for k, v in parts.items())
                          + f"; total {total:.0f} s vs 60 s budget")
        assert bad_ex == bad_rand == bad_ix == bad_stream == 0
        assert total < 60, f"correct, but {total:.0f} s exceeds the 60 s budget"


# ------------------------------------------------------------ criterion 3

def _h0_bits(n, m):
    if m in (0, n):
        return 0.0
    p = m / n
    return -n * (p * math.log2(p) + (1 - p) * math.log2(1 - p))


def test_criterion_3_space_accounting(acceptance_log):
    with criterion(acceptance_log, 3, "space accounting") as info:
        rng = np.random.default_rng(3)
        worst_slack = math.inf
        for _ in range(100):
            n = int(rng.integers(1000, 50000))
            bits = (rng.random(n) < rng.random()).astype(np.uint8)
            bv = RsBitvector(bits)
            bound = _h0_bits(n, int(bits.sum())) + n / bv.b
            assert bv.offset_bits <= bound, (n, bv.offset_bits, bound)
            worst_slack = min(worst_slack, bound - bv.offset_bits)
        for _ in range(50):
            universe = int(rng.integers(100, 10 ** 6))
            m = int(rng.integers(1, universe // 2 + 1))
            vals = np.sort(rng.integers(0, universe, size=m))
            ef = EliasFano(vals, universe)
            assert ef.low_bits == m * math.ceil(math.log2(universe / m))
            assert ef.to_list() == vals.tolist()
        for q, r in [(4, 5), (8, 8), (10, 3), (12, 13)]:
            assert QuotientFilter(q, r).measured_space_bits() == 2 ** q * (r + 3)
        assert not hasattr(PpLevel(0, 1, 2, 0), "__dict__")
        fields = len(PpLevel.__slots__)
        for n in [1, 2, 3, 4, 7, 16, 100, 1000, 4096, 10 ** 5]:
            ctx = make_context(10 ** 4, n, 1)
            m = PpMatcher(b"x" * n, ctx)
            assert len(m.levels) == math.floor(math.log2(n)) + 1
        info["detail"] = (f"offset bits within nH0+n/b (min slack {worst_slack:.1f} bits); EF low bits exact; "
                          f"QF bits = 2^q(r+3); PP levels = floor(log2 n)+1 with {fields} slot fields each")


# ------------------------------------------------------------ criterion 4

def test_criterion_4_filter_statistics(acceptance_log):
    with criterion(acceptance_log, 4, "filter statistics") as info:
        t0 = time.perf_counter()
        # Bloom: FPR and fill ratio at capacity
        f = BloomFilter.for_capacity(10 ** 4, 0.1, seed=11)
        f.add_many(np.arange(10 ** 4, dtype=np.uint64) + np.uint64(1 << 40))
        fresh = np.arange(10 ** 5, dtype=np.uint64) + np.uint64(1 << 50)
        bloom_fpr = float(f.contains_many(fresh).mean())
        fill = f.fill_ratio()
        assert bloom_fpr <= 1.5 * 0.1
        assert 0.45 <= fill <= 0.55
        # quotient filter at r = 8, half full
        qf = QuotientFilter(12, 8, seed=12)
        for x in range(2048):
            qf.add(x)
        qf_fpr = sum((10 ** 9 + x) in qf for x in range(10 ** 5)) / 10 ** 5
        assert qf_fpr <= 2 * 2 ** -8
        # counting Bloom filter, t = 4: never a false negative
        false_neg = checks = 0
        for run in range(100):
            rng = np.random.default_rng(1000 + run)
            cbf = CountingBloomFilter.for_capacity(1000, 0.05, t=4, seed=run)
            live = []
            next_key = run << 32
            for op in range(10 ** 4):
                if live and rng.random() < 0.45:
                    k = live.pop(int(rng.integers(0, len(live))))
                    cbf.remove(k)
                    if live:
                        checks += 1
                        false_neg += live[int(rng.integers(0, len(live)))] not in cbf
                else:
                    cbf.add(next_key)
                    live.append(next_key)
                    next_key += 1
                    checks += 1
                    false_neg += live[-1] not in cbf
            checks += len(live)
            false_neg += sum(k not in cbf for k in live)
        assert false_neg == 0
        elapsed = time.perf_counter() - t0
        info["detail"] = (f"Bloom FPR {bloom_fpr:.4f} (<= 0.15), fill {fill:.3f}, QF FPR {qf_fpr:.5f} (<= {2 * 2 ** -8:.5f}), "
                          f"CBF false negatives {false_neg} in {checks} checks; {elapsed:.0f} s (budget 60 s)")
        assert elapsed < 60


# ------------------------------------------------------------ criterion 5

def test_criterion_5_sketch_statistics(acceptance_log):
    with criterion(acceptance_log, 5, "sketch statistics") as info:
        t0 = time.perf_counter()
        m = 10 ** 4
        ests = []
        for s in range(2000):
            c = MorrisCounter(s)
            c.add(m)
            ests.append(c.estimate())
        morris_mean = float(np.mean(ests))
        assert abs(morris_mean - m) <= 0.05 * m

        cfg = BoostConfig.morris(0.5, 0.1)
        boosted_fail = 0
        for run in range(100):
            b = Boosted(MorrisCounter, cfg, seed=run)
            b.apply("add", m)
            boosted_fail += abs(b.estimate() - m) > 0.5 * m
        assert boosted_fail / 100 <= 0.15

        d = 10 ** 4
        single_fail = 0
        single_est = []
        for run in range(300):
            c = DistinctCounter(eps=0.25, seed=run)
            c.offer_many(np.arange(d, dtype=np.uint64) + np.uint64(run * 10 ** 7))
            single_est.append(c.estimate())
            single_fail += abs(c.estimate() - d) > 0.25 * d
        assert single_fail / 300 <= 1 / 3 + 0.05
        median_fail = 0
        for run in range(100):
            vals = []
            for j in range(30):
                c = DistinctCounter(eps=0.25, seed=10 ** 6 + run * 30 + j)
                c.offer_many(np.arange(d, dtype=np.uint64) + np.uint64(run * 10 ** 7))
                vals.append(c.estimate())
            median_fail += abs(lower_median(vals) - d) > 0.25 * d
        assert median_fail / 100 <= 0.05

        k = minhash_k(0.1, 0.05)
        assert k == 738
        mh_ok = 0
        for run in range(200):
            rng = np.random.default_rng(run)
            keys = np.unique(rng.integers(0, 2 ** 63, size=410, dtype=np.int64))[:400].astype(np.uint64)
            a, b = keys[:300], keys[100:]  # |A & B| = 200, |A | B| = 400
            est = MinHashSketch.build(a, k, run).jaccard(MinHashSketch.build(b, k, run))
            mh_ok += abs(est - 0.5) <= 0.1
        assert mh_ok / 200 >= 0.95

        found = 0
        for run in range(100):
            rng = np.random.default_rng(50_000 + run)
            keys = rng.permutation(np.arange(10 ** 6, dtype=np.uint64) + np.uint64(run << 32))
            base = keys[:1000]
            near_x, near_y = base[:975], base[25:]  # Jaccard distance 0.05
            ix = LshIndex(5, 20, seed=run)
            ix.insert("near", MinHashSketch.build(near_y, 100, run))
            for j in range(20):
                ix.insert(j, MinHashSketch.build(keys[2000 + j * 500: 2500 + j * 500], 100, run))
            found += ix.query(MinHashSketch.build(near_x, 100, run), 0.2) == "near"
        assert found / 100 >= 0.99
        elapsed = time.perf_counter() - t0
        info["detail"] = (f"Morris mean {morris_mean:.0f}; boosted Morris fail {boosted_fail}/100; bottom-k fail "
                          f"{single_fail}/300 single, {median_fail}/100 median-of-30; MinHash within 0.1 in "
                          f"{mh_ok}/200; LSH recall {found}/100; {elapsed:.0f} s (budget 120 s)")
        assert elapsed < 120


# ------------------------------------------------------------ criterion 6

def test_criterion_6_dgim_deterministic(acceptance_log):
    with criterion(acceptance_log, 6, "DGIM rules and bound") as info:
        pushes, W = 10 ** 5, 400
        total_queries = 0
        for eps in (1.0, 0.5, 0.1):
            rng = np.random.default_rng(int(eps * 100))
            # bursty stream: the density changes every few hundred bits
            bits = []
            while len(bits) < pushes:
                p = rng.choice([0.0, 0.05, 0.5, 0.95, 1.0])
                bits.extend((rng.random(int(rng.integers(1, 600))) < p).astype(int).tolist())
            bits = bits[:pushes]
            prefix = [0]
            for b in bits:
                prefix.append(prefix[-1] + b)
            ones = [i for i, b in enumerate(bits) if b]
            w = DgimWindow(W, eps)
            for t, b in enumerate(bits, 1):
                w.push(b)
                check_rules(w, bits, prefix, ones)  # reads only bits[:t]
                for mbar in (W, int(rng.integers(1, W + 1))):
                    d = prefix[t] - prefix[max(0, t - mbar)]
                    est = w.count(mbar)
                    assert d <= est <= (1 + eps) * d, (eps, t, mbar, d, est)
                    total_queries += 1
        info["detail"] = f"rules 1-5 after each of 3 x {pushes} pushes; {total_queries} queries, 0 violations"


# ------------------------------------------------------------ criterion 7

class _Spy:
    def __init__(self, inner, name, seen):
        self._inner, self._name, self._seen = inner, name, seen

    def get(self, i):
        self._seen.append(self._name)
        return self._inner.get(i)

    def _extract0(self, p, ln):
        self._seen.append(self._name)
        return self._inner._extract0(p, ln)

    def __getattr__(self, a):
        return getattr(self._inner, a)


def test_criterion_7_instrumented_substitutes(acceptance_log, monkeypatch):
    with criterion(acceptance_log, 7, "operation counts and space report") as info:
        seen, decodes = [], []
        real_unrank = rrr_mod.unrank_block

        def counting_unrank(c, o, b):
            decodes.append(1)
            return real_unrank(c, o, b)

        monkeypatch.setattr(rrr_mod, "unrank_block", counting_unrank)
        rng = np.random.default_rng(7)
        worst_arrays = worst_offsets = worst_decodes = 0
        for n in (10, 1000, 10 ** 5):
            bits = (rng.random(n) < 0.3).astype(np.uint8)
            bv = RsBitvector(bits)
            bv._macro = _Spy(bv._macro, "macro", seen)
            bv._blk = _Spy(bv._blk, "block", seen)
            bv._cls = _Spy(bv._cls, "class", seen)
            bv._off = _Spy(bv._off, "offsets", seen)
            for i in rng.integers(0, n + 1, size=300).tolist():
                for op in (bv.rank1, bv.rank0) + ((bv.access,) if i else ()):
                    seen.clear()
                    decodes.clear()
                    op(i)
                    sampled = {s for s in seen if s != "offsets"}
                    worst_arrays = max(worst_arrays, len(sampled))
                    worst_offsets = max(worst_offsets, seen.count("offsets"))
                    worst_decodes = max(worst_decodes, len(decodes))
        assert worst_arrays <= 3 and worst_offsets <= 1 and worst_decodes <= 1

        text = english_like(1 << 20, seed=0)
        fm = FmIndex(text)
        fm_h = FmIndex(text, code="huffman")
        csa = CsaIndex(text)
        report = (f"1 MiB English-like text: H0 {E.hk(text, 0):.2f}, H3 {E.hk(text, 3):.2f}; bits/symbol "
                  f"FM {fm.bits_per_symbol():.2f}, FM+Huffman-shaped {fm_h.bits_per_symbol():.2f}, "
                  f"CSA {csa.bits_per_symbol():.2f} (expected < 4.5, informational)")
        print(report)
        info["detail"] = (f"rank/access touch <= {worst_arrays} sampled arrays, {worst_offsets} offset read, "
                          f"{worst_decodes} block decode; {report}")


# ------------------------------------------------------------ criterion 8

def _mdt(*args, input=None, cwd=None):
    r = subprocess.run([sys.executable, "-m", "mdt", *map(str, args)], input=input,
                       capture_output=True, cwd=cwd, env={**os.environ, "MDT_SEED": "0"})
    return r.returncode, r.stdout


BATTERY = {
    "abaab": [b"a", b"ab", b"aab", b"b", b"abaab", b"c"],
    "BANANA": [b"A", b"AN", b"ANA", b"NA", b"BANANA", b"BANANAS"],
    "mississippi": [b"i", b"ss", b"issi", b"ssi", b"pp", b"mississippi", b"x"],
    "aabbbababbbaababa": [b"ab", b"bab", b"ba", b"bbb", b"aabbbababbbaababa"],
}


def test_criterion_8_cli_round_trip(acceptance_log, tmp_path):
    with criterion(acceptance_log, 8, "CLI round trip across processes") as info:
        diffs = answers = 0
        for name, patterns in BATTERY.items():
            text = name.encode()
            (tmp_path / name).write_bytes(text)
            for kind in ("fm", "csa"):
                out = tmp_path / f"{name}.{kind}"
                code, _ = _mdt("index", "build", "--kind", kind, tmp_path / name, "-o", out)
                assert code == 0
                for p in patterns:
                    want = occurrences(text, p)
                    code, got = _mdt("index", "count", out, p.decode())
                    diffs += code != 0 or got != f"{len(want)}\n".encode()
                    code, got = _mdt("index", "locate", out, p.decode())
                    diffs += code != 0 or got != "".join(f"{x}\n" for x in want).encode()
                    answers += 2
                code, got = _mdt("index", "extract", out, 1, len(text))
                diffs += got != text
                answers += 1
        # filters and sketches survive the trip too
        bf = tmp_path / "f.bloom"
        _mdt("filter", "build", "-m", 1000, "-d", 0.01, "-o", bf)
        keys = b"".join(b"key%d\n" % i for i in range(500))
        assert _mdt("filter", "add", bf, input=keys)[0] == 0
        code, got = _mdt("filter", "query", bf, input=keys)
        diffs += got != b"1\n" * 500
        sk1, sk2 = tmp_path / "a.mdts", tmp_path / "b.mdts"
        (tmp_path / "toks").write_bytes(keys)
        _mdt("sketch", "minhash", tmp_path / "toks", "--sketch-out", sk1)
        _mdt("sketch", "minhash", tmp_path / "toks", "--sketch-out", sk2)
        diffs += _mdt("sketch", "minhash", "--compare", sk1, sk2)[1] != b"1.000000\n"
        answers += 2

        rng = np.random.default_rng(8)
        engine_diffs = cases = 0
        for case in range(24):
            n = int(rng.integers(1, 20))
            sigma = int(rng.integers(1, 4))
            pattern = bytes((rng.integers(0, sigma, size=n) + 97).astype(np.uint8))
            stream = bytes((rng.integers(0, sigma, size=int(rng.integers(0, 3000))) + 97).astype(np.uint8))
            pf = tmp_path / f"p{case}"
            pf.write_bytes(pattern)
            k = case % 3  # exact, 1 and 2 mismatches
            code_kr, out_kr = _mdt("stream", "match", pf, "--engine", "kr", "--k", k, input=stream)
            code_pp, out_pp = _mdt("stream", "match", pf, "--engine", "pp", "--k", k, input=stream)
            assert code_kr == code_pp == 0
            engine_diffs += out_kr != out_pp
            if k == 0:
                diffs += out_pp != "".join(f"{e}\t0\n" for e in occurrence_ends(pattern, stream)).encode()
            cases += 1
        info["detail"] = (f"{answers} cross-process answers, {diffs} differences; "
                          f"kr vs pp stream-match diff on {cases} fuzz cases: {engine_diffs}")
        assert diffs == 0 and engine_diffs == 0
