import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from relselect.alignment import common_subsequence
from relselect.errors import FormatError, InvalidInputError, RangeError, UnsupportedQueryError
from relselect.fm import (
    FMIndex, IndexFile, RelativeFMIndex, build_relative_fm, build_suffix_array, bwt_of, cyclic_bwt,
    inverse_bwt, render,
)
from relselect.mutate import mutated_pair

T1, T2 = "GCACTTAGAGGTCAGT", "GCACTAGACGTCAGT"


def test_banana(backend):
    assert render(bwt_of("banana")) == "annb$aa"
    fm = FMIndex.from_text("banana")
    n = fm.n
    lf = [fm.lf(i) for i in range(1, n + 1)]
    assert sorted(lf) == list(range(1, n + 1))
    assert lf == oracles.lf(bwt_of("banana"))
    for i in range(1, n + 1):
        assert fm.psi(fm.lf(i)) == i and fm.lf(fm.psi(i)) == i
        assert fm.psi_binary(i) == fm.psi(i)
    assert fm.c_array() == {"\x00": 0, "a": 1, "b": 4, "n": 5}


def test_example_texts_give_example_bwts():
    assert bwt_of(T1, strip_sentinel=True) == b"TCTGCGTAAAAGGTGC"
    assert bwt_of(T2, strip_sentinel=True) == b"TGCTCGTAAAACGCG"
    # the rotation-sorted variant does not
    assert cyclic_bwt(T1) != b"TCTGCGTAAAAGGTGC"


@pytest.mark.parametrize("method", ["naive", "doubling"])
def test_suffix_array_against_oracle(method):
    rng = np.random.default_rng(1)
    for _ in range(150):
        text = oracles.random_text(rng, b"ACGT" if rng.random() < 0.7 else b"ab", rng.integers(0, 200))
        sa = build_suffix_array(text, method=method)
        assert sa.sa.tolist() == oracles.suffix_array(text)
        assert sa.bwt() == oracles.bwt(text)


def test_doubling_on_repetitive_text():
    for text in (b"A" * 3000, b"AC" * 1500, b"ACGTTGCA" * 400):
        a = build_suffix_array(text, method="doubling").sa
        b = build_suffix_array(text, method="naive").sa
        assert np.array_equal(a, b)


def test_inverse_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(200):
        text = bytes(rng.integers(1, 256, size=rng.integers(0, 300)).astype(np.uint8))
        assert inverse_bwt(bwt_of(text)) == text


def test_inverse_rejects_non_bwts():
    with pytest.raises(InvalidInputError):
        inverse_bwt(b"ab")
    with pytest.raises(InvalidInputError):
        inverse_bwt(b"a\x00b\x00")
    with pytest.raises(InvalidInputError):
        # LF splits into two cycles: 'ba' then 'a$'
        inverse_bwt(b"ba\x00a")
    with pytest.raises(InvalidInputError):
        bwt_of(b"a\x00b")


def _agree(plain: FMIndex, rel: RelativeFMIndex):
    idx = np.arange(1, plain.n + 1, dtype=np.int64)
    lf = plain.lf_many(idx)
    psi = plain.psi_many(idx)
    assert np.array_equal(rel.lf_many(idx), lf)
    assert np.array_equal(rel.psi_binary_many(idx), psi)
    if rel.with_select:
        assert np.array_equal(rel.psi_many(idx), psi)
    assert np.array_equal(lf[psi - 1], idx) and np.array_equal(psi[lf - 1], idx)


def test_relative_example(backend):
    rel = build_relative_fm(T1, T2)
    plain = FMIndex.from_text(T2)
    _agree(plain, rel)
    assert [rel.lf(i) for i in range(1, 17)] == [14, 10, 6, 15, 7, 11, 16, 2, 3, 4, 1, 5, 8, 12, 9, 13]


@pytest.mark.parametrize("method", ["lcs", "projected"])
def test_relative_random(backend, method):
    rng = np.random.default_rng(3)
    for _ in range(30):
        t1, t2, aln = mutated_pair(int(rng.integers(1 << 30)), int(rng.integers(1, 400)), 0.05, 0.05)
        rel = build_relative_fm(t1, t2, alignment=aln if method == "projected" else None, method=method)
        _agree(FMIndex.from_text(t2), rel)
        rel.alignment.validate(bwt_of(t1), bwt_of(t2))


def test_projected_alignment_is_close_to_lcs():
    t1, t2, aln = mutated_pair(4, 1500, 0.01, 0.002)
    proj = build_relative_fm(t1, t2, alignment=aln, method="projected").alignment
    lcs = common_subsequence(bwt_of(t1), bwt_of(t2))
    assert proj.len_c <= lcs.len_c
    assert proj.d_indel <= 3 * lcs.d_indel + 10


def test_relative_without_select(backend):
    t1, t2, aln = mutated_pair(5, 300, 0.03, 0.0)
    rel = build_relative_fm(t1, t2, with_select=False)
    _agree(FMIndex.from_text(t2), rel)
    with pytest.raises(UnsupportedQueryError):
        rel.psi(1)
    with pytest.raises(UnsupportedQueryError):
        rel.psi_many(np.arange(1, 3))


def test_row_range_errors():
    fm = FMIndex.from_text("ACGT")
    for bad in (0, 6):
        with pytest.raises(RangeError):
            fm.lf(bad)
        with pytest.raises(RangeError):
            fm.psi(bad)
    with pytest.raises(RangeError):
        fm.lf_many(np.array([1, 9]))


def test_reference_mismatch():
    rel = build_relative_fm(T1, T2)
    with pytest.raises(InvalidInputError):
        RelativeFMIndex(FMIndex.from_text(T1), rel.rel)


def test_index_file_round_trip(backend):
    t1, t2, aln = mutated_pair(6, 2000, 0.01, 0.002)
    rel = build_relative_fm(t1, t2, alignment=aln)
    for f in (IndexFile("plain-fm", FMIndex.from_text(t2)),
              IndexFile("relative-fm+select", rel, rel.reference, {"note": 1})):
        blob = f.to_bytes()
        back = IndexFile.from_bytes(blob)
        assert back.mode == f.mode and back.meta == f.meta
        idx = np.arange(1, len(t2) + 2, dtype=np.int64)
        assert np.array_equal(back.target.lf_many(idx), f.target.lf_many(idx))
        assert len(f.target.to_bytes()) == f.target.nbytes
    with pytest.raises(FormatError):
        IndexFile.from_bytes(blob[:30])
    with pytest.raises(FormatError):
        IndexFile.from_bytes(b"JUNK" + blob[4:])


@settings(max_examples=100, deadline=None)
@given(st.binary(min_size=0, max_size=80).map(lambda b: bytes(c % 4 + 65 for c in b)),
       st.binary(min_size=0, max_size=80).map(lambda b: bytes(c % 4 + 65 for c in b)))
def test_property_relative_equals_plain(a, b):
    _agree(FMIndex.from_text(b), build_relative_fm(a, b))
