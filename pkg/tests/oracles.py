"""Slow, obviously-correct reference implementations used by the tests."""

from functools import lru_cache
from itertools import combinations


def rank(s, x, i):
    return s[:i].count(x)


def select(s, x, j):
    """1-based position of the j-th x, or None."""
    seen = 0
    for p, c in enumerate(s, 1):
        if c == x:
            seen += 1
            if seen == j:
                return p
    return None


def positions(s, x):
    return [p for p, c in enumerate(s, 1) if c == x]


def is_subsequence(c, s):
    it = iter(s)
    return all(ch in it for ch in c)


def lcs_length_brute(a, b):
    """Longest common subsequence length by enumerating subsequences of the shorter string."""
    if len(a) > len(b):
        a, b = b, a
    for k in range(len(a), -1, -1):
        for idx in combinations(range(len(a)), k):
            if is_subsequence(bytes(a[i] for i in idx), b):
                return k
    return 0


def levenshtein(a, b):
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def suffix_array(text: bytes):
    s = text + b"\x00"
    return [i + 1 for i in sorted(range(len(s)), key=lambda i: s[i:])]


def bwt(text: bytes) -> bytes:
    s = text + b"\x00"
    rows = sorted(range(len(s)), key=lambda i: s[i:] + s[:i])
    return bytes(s[i - 1] for i in rows)


def lf(bwt_: bytes):
    """LF by the stable-sort definition, 1-based."""
    order = sorted(range(len(bwt_)), key=lambda i: (bwt_[i], i))
    out = [0] * len(bwt_)
    for row, i in enumerate(order, 1):
        out[i] = row
    return out


def edges(text: bytes, k: int):
    """de Bruijn edge set straight from the construction rules."""
    padded = b"$" * k + text
    out = set()
    for i in range(len(text)):
        out.add((padded[i : i + k], padded[i + k : i + k + 1]))
    out.add((text[-k:], b"$"))
    return out


def boss_sort(es):
    def key(e):
        src, lab = e
        return [(-1 if c == 36 else c) for c in reversed(src)], (-1 if lab[0] == 36 else lab[0])

    return sorted(es, key=key)


def random_text(rng, alphabet: bytes, n: int) -> bytes:
    return bytes(alphabet[k] for k in rng.integers(0, len(alphabet), size=int(n)))
