import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from relselect.alignment import Alignment, common_subsequence, edit_distance, edit_stats, marker_masks
from relselect.errors import FormatError, InvalidInputError, ResourceError
from relselect.mutate import mutated_pair

S1, S2 = "TCTGCGTAAAAGGTGC", "TGCTCGTAAAACGCG"


def test_example_pair():
    a = common_subsequence(S1, S2)
    assert a.common(S1) == b"TCTCGTAAAAGG" and a.len_c == 12
    m1, m2 = marker_masks(a)
    assert "".join(map(str, m1)) == "0001000000010101"
    assert "".join(map(str, m2)) == "010000000001010"
    assert edit_distance(S1, S2) == 5
    stats = edit_stats(S1, S2)
    assert (stats.levenshtein, stats.len_c, stats.d_indel) == (5, 12, 7)


def _check_lcs(a, b, method):
    aln = common_subsequence(a, b, method=method)
    aln.validate(a, b)
    assert aln.len_c == oracles.lcs_length_brute(a, b)


@pytest.mark.parametrize("method", ["dp", "myers"])
def test_lcs_exhaustive_small(method):
    # every pair of binary strings up to length 5
    words = [bytes(w) for n in range(6) for w in itertools.product(b"AC", repeat=n)]
    for a in words:
        for b in words:
            _check_lcs(a, b, method)


@pytest.mark.parametrize("method", ["dp", "myers"])
def test_lcs_random_small(method):
    rng = np.random.default_rng(1)
    for _ in range(400):
        a = oracles.random_text(rng, b"AC", rng.integers(0, 13))
        b = oracles.random_text(rng, b"AC", rng.integers(0, 13))
        _check_lcs(a, b, method)


def test_myers_agrees_with_table_on_length():
    rng = np.random.default_rng(2)
    for _ in range(300):
        n = int(rng.integers(0, 300))
        t1, t2, _ = mutated_pair(int(rng.integers(1 << 30)), n, 0.1, 0.1)
        dp = common_subsequence(t1, t2, method="dp")
        my = common_subsequence(t1, t2, method="myers")
        my.validate(t1, t2)
        assert dp.len_c == my.len_c


def test_auto_switches_to_linear_space():
    t1, t2, _ = mutated_pair(4, 3000, 0.01, 0.01)
    a = common_subsequence(t1, t2, dp_budget=1000)
    a.validate(t1, t2)
    assert a.len_c == common_subsequence(t1, t2, method="dp").len_c


def test_levenshtein_matches_recursive_oracle():
    rng = np.random.default_rng(3)
    for _ in range(300):
        a = oracles.random_text(rng, b"ACG", rng.integers(0, 14))
        b = oracles.random_text(rng, b"ACG", rng.integers(0, 14))
        assert edit_distance(a, b) == oracles.levenshtein(a, b)


def test_distance_relations():
    rng = np.random.default_rng(4)
    for _ in range(100):
        t1, t2, _ = mutated_pair(int(rng.integers(1 << 30)), int(rng.integers(0, 200)), 0.1, 0.1)
        a = common_subsequence(t1, t2)
        d = edit_distance(t1, t2)
        # indel-only distance bounds the unit-cost one from both sides
        assert d <= a.d_indel <= 2 * d


def test_identical_and_disjoint():
    a = common_subsequence("ACGT", "ACGT")
    assert a == Alignment.identity(4) and a.d_indel == 0
    b = common_subsequence("AAAA", "CCC")
    assert b.len_c == 0 and b.d_indel == 7
    assert common_subsequence("", "ACG").len_c == 0
    assert edit_distance("", "ACG") == 3


def test_budgets():
    with pytest.raises(ResourceError):
        edit_distance("A" * 1000, "C" * 1000, budget=10)
    with pytest.raises(InvalidInputError):
        common_subsequence("A", "A", method="nope")


def test_validate_rejects_bad_alignments():
    with pytest.raises(InvalidInputError):
        Alignment.from_pairs([(1, 1), (1, 2)], 2, 2).validate("AA", "AA")
    with pytest.raises(InvalidInputError):
        Alignment.from_pairs([(1, 1)], 2, 2).validate("AC", "CA")
    with pytest.raises(InvalidInputError):
        Alignment.from_pairs([(3, 1)], 2, 2).validate("AC", "AC")


def test_alignment_serialization():
    t1, t2, a = mutated_pair(9, 5000, 0.01, 0.01)
    back = Alignment.from_bytes(a.to_bytes())
    assert back == a
    with pytest.raises(FormatError):
        Alignment.from_bytes(b"ALN1" + a.to_bytes()[4:-3])
    with pytest.raises(FormatError):
        Alignment.from_bytes(b"nope")


@settings(max_examples=150, deadline=None)
@given(st.text("ACG", max_size=10), st.text("ACG", max_size=10))
def test_property_lcs_and_distance(a, b):
    aln = common_subsequence(a, b)
    aln.validate(a, b)
    assert aln.len_c == oracles.lcs_length_brute(a.encode(), b.encode())
    assert edit_distance(a, b) == oracles.levenshtein(a, b)
