import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from relselect.errors import FormatError, InvalidInputError, NotFoundError, RangeError, UnsupportedAlphabetError
from relselect.sequence import MAX_ALPHABET, IndexedSequence

S1 = "TCTGCGTAAAAGGTGC"


def full_check(text: bytes, seq: IndexedSequence):
    assert len(seq) == len(text)
    assert seq.text() == text
    for x in set(text) | {ord("Z")}:
        ch = chr(x)
        for i in range(len(text) + 1):
            assert seq.rank(ch, i) == oracles.rank(text, x, i)
        for j, p in enumerate(oracles.positions(text, x), 1):
            assert seq.select(ch, j) == p
    for i in range(1, len(text) + 1):
        assert seq.access(i) == chr(text[i - 1])


def test_example_string(backend):
    s = IndexedSequence(S1)
    assert s.select("G", 4) == 13
    assert [s.occ(c) for c in "ACGT"] == [4, 3, 5, 4]
    assert s.rank("A", 10) == 3
    assert s.access(7) == "T"
    full_check(S1.encode(), s)


@pytest.mark.parametrize("sigma", [1, 2, 3, 4, 5, 7, 16, 64])
def test_alphabet_sizes(backend, sigma):
    rng = np.random.default_rng(sigma)
    alphabet = np.arange(33, 33 + sigma, dtype=np.uint8)
    for n in (1, 5, 200):
        text = alphabet[rng.integers(0, sigma, size=n)].tobytes()
        full_check(text, IndexedSequence(text))


def test_unary_and_empty(backend):
    full_check(b"AAAA", IndexedSequence("AAAA"))
    e = IndexedSequence(b"")
    assert len(e) == 0 and e.rank("A", 0) == 0 and e.text() == b""


def test_batch_queries(backend):
    rng = np.random.default_rng(5)
    text = np.frombuffer(b"ACGT", np.uint8)[rng.integers(0, 4, 3000)]
    s = IndexedSequence(text)
    idx = rng.integers(1, 3001, size=500).astype(np.int64)
    assert np.array_equal(s.core.access_many(idx), text[idx - 1])
    syms = np.frombuffer(b"ACGT", np.uint8)[rng.integers(0, 4, 500)].copy()
    ranks = s.core.rank_many(syms, idx)
    assert all(ranks[k] == int((text[: idx[k]] == syms[k]).sum()) for k in range(500))


def test_errors():
    s = IndexedSequence("ACGT")
    with pytest.raises(RangeError):
        s.access(5)
    with pytest.raises(RangeError):
        s.rank("A", -1)
    with pytest.raises(NotFoundError):
        s.select("A", 2)
    with pytest.raises(NotFoundError):
        s.select("Z", 1)
    with pytest.raises(InvalidInputError):
        s.rank("AC", 1)
    with pytest.raises(UnsupportedAlphabetError):
        IndexedSequence(bytes(range(1, MAX_ALPHABET + 2)))


def test_serialization():
    for text in (b"", b"A", S1.encode(), bytes(range(1, 65)) * 3):
        s = IndexedSequence(text)
        blob = s.to_bytes()
        assert len(blob) == s.nbytes
        back, end = IndexedSequence.from_bytes(blob)
        assert end == len(blob) and back.text() == text
    with pytest.raises(FormatError):
        IndexedSequence.from_bytes(b"X" + blob[1:])


@settings(max_examples=150, deadline=None)
@given(st.binary(max_size=120).map(lambda b: bytes(c % 6 + 65 for c in b)))
def test_property_matches_oracle(text):
    full_check(text, IndexedSequence(text))
