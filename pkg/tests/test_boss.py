import numpy as np
import pytest

import oracles
from relselect.boss import build_edges, edge_bwt, relative_edge_bwt
from relselect.errors import InvalidInputError
from relselect.mutate import mutated_pair

FIG1 = """$$$ T
CGA C
$TA C
GAC G
GAC T
TAC G
GTC G
ACG A
ACG T
TCG A
$$T A
ACT $
CGT C"""


def test_figure_matrix_and_edge_bwts():
    edges = build_edges("TACGTCGACGACT", 3)
    assert len(edges) == 13 and not edges.is_sorted
    assert edges.sort().dump() == FIG1
    assert edge_bwt("TACGTCGACGACT", 3) == b"TCCGTGGATAA$C"
    assert edge_bwt("TACGACGCGACT", 3) == b"TCCGTGGACAA$"


def test_pair_distance(backend):
    rs, stats = relative_edge_bwt("TACGTCGACGACT", "TACGACGCGACT", 3)
    assert stats.levenshtein == 2
    assert rs.text() == b"TCCGTGGACAA$"
    assert rs.sub.B.ones + rs.sup.Bp.ones == stats.d_indel <= 2 * stats.levenshtein


def test_identical_texts(backend):
    rs, stats = relative_edge_bwt("GATTACA", "GATTACA", 2)
    assert stats.levenshtein == 0 and rs.sub.B.ones == 0 and rs.sup.Bp.ones == 0


def test_length_k_text():
    e = build_edges("ACG", 3)
    assert e.edges == ((b"$$$", b"A"), (b"$$A", b"C"), (b"$AC", b"G"), (b"ACG", b"$"))


def test_homopolymer_matches_enumeration():
    got = build_edges("AAAA", 3).sort()
    assert list(got.edges) == oracles.boss_sort(oracles.edges(b"AAAA", 3))
    assert edge_bwt("AAAA", 3) == got.labels()


def test_random_texts_against_enumeration():
    rng = np.random.default_rng(1)
    for _ in range(200):
        k = int(rng.integers(1, 6))
        text = oracles.random_text(rng, b"ACGT", rng.integers(k, 60))
        e = build_edges(text, k)
        assert set(e.edges) == oracles.edges(text, k)
        s = e.sort()
        assert list(s.edges) == oracles.boss_sort(oracles.edges(text, k))
        assert s.sort().edges == s.edges
        assert sorted(s.labels()) == sorted(l[0] for _, l in e.edges)


def test_random_pairs_select(backend):
    rng = np.random.default_rng(2)
    for _ in range(30):
        t1, t2, _ = mutated_pair(int(rng.integers(1 << 30)), int(rng.integers(5, 120)), 0.05, 0.02)
        if len(t2) < 3:
            continue
        rs, stats = relative_edge_bwt(t1, t2, 3)
        e2 = edge_bwt(t2, 3)
        for x in set(e2):
            for j, p in enumerate(oracles.positions(e2, x), 1):
                assert rs.select(chr(x), j) == p
        if len(e2) < 40:
            assert stats.levenshtein == oracles.levenshtein(edge_bwt(t1, 3), e2)


def test_errors():
    with pytest.raises(InvalidInputError):
        build_edges("AC", 3)
    with pytest.raises(InvalidInputError):
        build_edges("AC$G", 2)
    with pytest.raises(InvalidInputError):
        build_edges("ACG", 0)
