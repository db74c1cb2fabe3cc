import random

import pytest
from hypothesis import given, settings, strategies as st

from mdt.errors import CorruptArtifact, InvalidArgument
from mdt.textindex import (CsaIndex, FmIndex, bwt_from_text, bwt_invert, dump_index,
                           load_index, naive_occurrences, naive_suffix_array, sa_build)

BWS_TEXT = "aabbbababbbaababa$"


def test_suffix_arrays():
    assert sa_build("abaab$").tolist() == [6, 3, 4, 1, 5, 2]
    assert sa_build("BANANA$").tolist() == [7, 6, 4, 2, 1, 5, 3]
    assert sa_build("$").tolist() == [1]
    with pytest.raises(InvalidArgument):
        sa_build("ab$c")


@given(st.binary(max_size=80).map(lambda b: b.replace(b"$", b"x").replace(b"\0", b"y")))
def test_suffix_array_vs_sorting(body):
    assert sa_build(body + b"$").tolist() == naive_suffix_array(body + b"$")


def test_bwt_examples():
    assert bwt_from_text("mississippi$") == b"ipssm$pissii"
    assert bwt_from_text("$") == b"$"
    assert bwt_invert("ipssm$pissii") == b"mississippi$"
    assert bwt_invert("$") == b"$"
    with pytest.raises(InvalidArgument):
        bwt_invert("ab$$")
    with pytest.raises(InvalidArgument):
        bwt_invert("abc")


@given(st.binary(max_size=80).map(lambda b: b.replace(b"$", b"x").replace(b"\0", b"y")))
def test_bwt_inverts(body):
    assert bwt_invert(bwt_from_text(body + b"$")) == body + b"$"


def test_lf_and_backward_search():
    fm = FmIndex("mississippi$")
    assert fm.lf_step(12) == 5
    assert fm.lf_step(8) == 3
    fm2 = FmIndex(BWS_TEXT)
    assert fm2.count_range("ab") == (5, 9)
    assert fm2.count_range("bab") == (12, 14)
    assert fm2.locate("bab") == naive_occurrences(BWS_TEXT[:-1].encode(), b"bab")
    assert len(fm2.locate("bab")) == 3
    assert fm2.count("z") == 0
    assert fm2.locate(BWS_TEXT[:-1]) == [1]
    assert fm.extract(2, 4) == b"issi"


def test_csa_banana():
    csa = CsaIndex("BANANA$")
    assert csa.psi_array()[1:] == [1, 6, 7, 4, 2, 3]
    assert csa.psi(3) == 6
    assert csa.count_range("AN") == (3, 4)
    assert csa.count("AN") == 2
    assert csa.count_range("A") == (2, 4)
    assert csa.count("ZZ") == 0
    assert csa.sa_value(5) == (1, 2)  # value and number of psi steps
    # positions of "AN" in B-A-N-A-N-A counted from 1
    assert csa.locate("AN") == [2, 4]
    assert csa.extract(1, 6) == b"BANANA"
    assert csa.extract(3, 2) == b"NA"


@pytest.mark.parametrize("cls", [FmIndex, CsaIndex])
def test_index_roundtrip_and_corruption(cls):
    ix = cls(b"abracadabra")
    data = dump_index(ix)
    back = load_index(data)
    assert type(back) is cls
    assert back.locate("abra") == [1, 8]
    assert back.text() == b"abracadabra$"
    with pytest.raises(CorruptArtifact):
        load_index(b"XXXX" + data[4:])
    with pytest.raises(CorruptArtifact):
        load_index(data[:-5])
    bad = bytearray(data)
    bad[5] ^= 0xFF  # version
    with pytest.raises(CorruptArtifact):
        load_index(bytes(bad))


@pytest.mark.parametrize("cls", [FmIndex, CsaIndex])
def test_index_fuzz(cls):
    rng = random.Random(11)
    for _ in range(60):
        sigma = rng.randint(1, 8)
        n = rng.randint(1, 400)
        text = bytes(rng.choice(b"abcdefgh"[:sigma]) for _ in range(n))
        ix = cls(text)
        for _ in range(6):
            if rng.random() < 0.5:
                i = rng.randint(0, n - 1)
                p = text[i:i + rng.randint(1, 6)]
            else:
                p = bytes(rng.choice(b"abcdefgh"[:sigma]) for _ in range(rng.randint(1, 4)))
            occ = naive_occurrences(text, p)
            assert ix.count(p) == len(occ)
            assert ix.locate(p) == occ
        i = rng.randint(1, n)
        ln = rng.randint(0, n - i + 1)
        assert ix.extract(i, ln) == text[i - 1:i - 1 + ln]


@settings(max_examples=50)
@given(st.binary(min_size=1, max_size=60).map(lambda b: b.replace(b"$", b"x").replace(b"\0", b"y")),
       st.binary(min_size=1, max_size=4))
def test_fm_csa_agree(text, p):
    fm, csa = FmIndex(text), CsaIndex(text)
    assert fm.locate(p) == csa.locate(p) == naive_occurrences(text, p)
    assert fm.count(text + b"zz") == 0


def test_space_accounting_is_positive():
    fm = FmIndex(b"the quick brown fox jumps over the lazy dog " * 20)
    parts = fm.space_bits()
    assert all(v > 0 for v in parts.values())
    assert fm.bits_per_symbol() == pytest.approx(sum(parts.values()) / fm.n)
