"""Common subsequences, edit distances and the marker masks derived from them."""

from __future__ import annotations

import struct
import sys
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InvalidInputError, ResourceError
from .sequence import as_array, as_bytes

#: largest n1*n2 for which the quadratic LCS table is used
LCS_DP_BUDGET = 1 << 24
#: largest n1*n2 for which edit_distance will run
LEVENSHTEIN_BUDGET = 4 * 10**8

_MAGIC = b"ALN1"


@dataclass(frozen=True, eq=False)
class Alignment:
    """Matched position pairs (1-based), strictly increasing in both strings."""

    p: np.ndarray
    q: np.ndarray
    n1: int
    n2: int

    @classmethod
    def from_pairs(cls, pairs, n1: int, n2: int) -> Alignment:
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), n1, n2)

    @classmethod
    def identity(cls, n: int) -> Alignment:
        pos = np.arange(1, n + 1, dtype=np.int64)
        return cls(pos, pos.copy(), n, n)

    @property
    def len_c(self) -> int:
        return int(self.p.size)

    @property
    def d_indel(self) -> int:
        """Insertions plus deletions implied by the alignment."""
        return self.n1 + self.n2 - 2 * self.len_c

    @property
    def matches(self) -> list[tuple[int, int]]:
        return list(zip(self.p.tolist(), self.q.tolist()))

    def common(self, s1) -> bytes:
        """The common subsequence spelled out from ``s1``."""
        return as_array(s1)[self.p - 1].tobytes()

    def validate(self, s1, s2) -> None:
        a, b = as_array(s1), as_array(s2)
        if a.size != self.n1 or b.size != self.n2:
            raise InvalidInputError("alignment lengths do not match the strings")
        if self.p.size != self.q.size:
            raise InvalidInputError("alignment coordinate arrays differ in length")
        if self.p.size == 0:
            return
        for pos, n in ((self.p, self.n1), (self.q, self.n2)):
            if pos[0] < 1 or pos[-1] > n or (np.diff(pos) <= 0).any():
                raise InvalidInputError("alignment positions must increase strictly within range")
        if (a[self.p - 1] != b[self.q - 1]).any():
            raise InvalidInputError("aligned positions hold different characters")

    def __eq__(self, other):
        if not isinstance(other, Alignment):
            return NotImplemented
        return (self.n1, self.n2) == (other.n1, other.n2) and np.array_equal(
            self.p, other.p
        ) and np.array_equal(self.q, other.q)

    __hash__ = None

    def to_bytes(self) -> bytes:
        """``ALN1 | u64 n1 | u64 n2 | u64 m | zlib(u64 deltas of p, then of q)``."""
        dp = np.diff(self.p, prepend=0).astype("<u8")
        dq = np.diff(self.q, prepend=0).astype("<u8")
        body = zlib.compress(dp.tobytes() + dq.tobytes(), 6)
        return _MAGIC + struct.pack("<QQQ", self.n1, self.n2, self.len_c) + body

    @classmethod
    def from_bytes(cls, buf) -> Alignment:
        if bytes(buf[:4]) != _MAGIC:
            raise FormatError("not an alignment file")
        try:
            n1, n2, m = struct.unpack_from("<QQQ", buf, 4)
            raw = zlib.decompress(bytes(buf[28:]))
        except (struct.error, zlib.error) as exc:
            raise FormatError(f"corrupt alignment: {exc}") from None
        if len(raw) != 16 * m:
            raise FormatError("alignment payload has the wrong length")
        deltas = np.frombuffer(raw, dtype="<u8").astype(np.int64)
        return cls(np.cumsum(deltas[:m]), np.cumsum(deltas[m:]), n1, n2)


def _lcs_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n1, n2 = a.size, b.size
    dtype = np.uint16 if min(n1, n2) < 65535 else np.uint32
    table = np.zeros((n1 + 1, n2 + 1), dtype=dtype)
    for i in range(1, n1 + 1):
        prev = table[i - 1]
        diag = prev[:-1] + (b == a[i - 1])
        np.maximum.accumulate(np.maximum(prev[1:], diag), out=table[i, 1:])
    return table


def _lcs_dp(a: np.ndarray, b: np.ndarray) -> tuple[list[int], list[int]]:
    # traceback preference: match, then a diagonal (substitution) step,
    # then skipping a character of s1, then of s2
    table = _lcs_table(a, b)
    L = table.tolist() if table.size <= 1 << 20 else table
    i, j = a.size, b.size
    ps, qs = [], []
    while i and j:
        here = L[i][j]
        if a[i - 1] == b[j - 1]:
            ps.append(i)
            qs.append(j)
            i -= 1
            j -= 1
        elif L[i - 1][j - 1] == here:
            i -= 1
            j -= 1
        elif L[i - 1][j] == here:
            i -= 1
        else:
            j -= 1
    ps.reverse()
    qs.reverse()
    return ps, qs


def _middle_snake(a, a0, N, b, b0, M):
    """Myers' middle snake of a[a0:a0+N] vs b[b0:b0+M], in local coordinates."""
    delta = N - M
    odd = delta & 1
    off = N + M + 1
    vf = [0] * (2 * off + 2)
    vb = [0] * (2 * off + 2)
    for d in range((N + M + 1) // 2 + 1):
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vf[off + k - 1] < vf[off + k + 1]):
                x = vf[off + k + 1]
            else:
                x = vf[off + k - 1] + 1
            y = x - k
            x0, y0 = x, y
            while x < N and y < M and a[a0 + x] == b[b0 + y]:
                x += 1
                y += 1
            vf[off + k] = x
            if odd and -(d - 1) <= delta - k <= d - 1 and x + vb[off + delta - k] >= N:
                return x0, y0, x, y
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and vb[off + k - 1] < vb[off + k + 1]):
                x = vb[off + k + 1]
            else:
                x = vb[off + k - 1] + 1
            y = x - k
            x0, y0 = x, y
            while x < N and y < M and a[a0 + N - 1 - x] == b[b0 + M - 1 - y]:
                x += 1
                y += 1
            vb[off + k] = x
            if not odd and -d <= delta - k <= d and x + vf[off + delta - k] >= N:
                return N - x, M - y, N - x0, M - y0
    raise AssertionError("middle snake not found")


def _lcs_myers(a: bytes, b: bytes) -> tuple[list[int], list[int]]:
    ps: list[int] = []
    qs: list[int] = []

    def run(a0, a1, b0, b1):
        while a0 < a1 and b0 < b1 and a[a0] == b[b0]:
            ps.append(a0 + 1)
            qs.append(b0 + 1)
            a0 += 1
            b0 += 1
        tail = 0
        while a0 < a1 and b0 < b1 and a[a1 - 1] == b[b1 - 1]:
            a1 -= 1
            b1 -= 1
            tail += 1
        if a0 < a1 and b0 < b1:
            x0, y0, x1, y1 = _middle_snake(a, a0, a1 - a0, b, b0, b1 - b0)
            run(a0, a0 + x0, b0, b0 + y0)
            ps.extend(range(a0 + x0 + 1, a0 + x1 + 1))
            qs.extend(range(b0 + y0 + 1, b0 + y1 + 1))
            run(a0 + x1, a1, b0 + y1, b1)
        ps.extend(range(a1 + 1, a1 + tail + 1))
        qs.extend(range(b1 + 1, b1 + tail + 1))

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        run(0, len(a), 0, len(b))
    finally:
        sys.setrecursionlimit(limit)
    return ps, qs


def common_subsequence(s1, s2, *, method: str = "auto", dp_budget: int = LCS_DP_BUDGET) -> Alignment:
    """Longest common subsequence of ``s1`` and ``s2`` as an :class:`Alignment`.

    ``method`` is ``"dp"`` (quadratic table, deterministic traceback that
    prefers substitutions), ``"myers"`` (linear-space O(ND) diff) or
    ``"auto"``, which picks the table whenever ``n1*n2 <= dp_budget``.
    """
    a, b = as_array(s1), as_array(s2)
    if method == "auto":
        method = "dp" if a.size * b.size <= dp_budget else "myers"
    if method == "dp":
        if a.size * b.size > max(dp_budget, LCS_DP_BUDGET):
            raise ResourceError(f"LCS table of {a.size}x{b.size} exceeds budget")
        ps, qs = _lcs_dp(a, b)
    elif method == "myers":
        ps, qs = _lcs_myers(as_bytes(s1), as_bytes(s2))
    else:
        raise InvalidInputError(f"unknown LCS method {method!r}")
    return Alignment(np.asarray(ps, dtype=np.int64), np.asarray(qs, dtype=np.int64), int(a.size), int(b.size))


def edit_distance(s1, s2, *, budget: int = LEVENSHTEIN_BUDGET) -> int:
    """Levenshtein distance with unit-cost insertions, deletions and substitutions."""
    a, b = as_array(s1), as_array(s2)
    if a.size < b.size:
        a, b = b, a
    if a.size * b.size > budget:
        raise ResourceError(f"edit distance of {a.size}x{b.size} exceeds budget {budget}")
    if b.size == 0:
        return int(a.size)
    steps = np.arange(b.size + 1, dtype=np.int64)
    row = steps.copy()
    for i in range(1, a.size + 1):
        t = np.empty_like(row)
        t[0] = i
        np.minimum(row[1:] + 1, row[:-1] + (b != a[i - 1]), out=t[1:])
        # left-to-right insertions: row[j] = min_k<=j t[k] + (j - k)
        row = np.minimum.accumulate(t - steps) + steps
    return int(row[-1])


def marker_masks(a: Alignment) -> tuple[np.ndarray, np.ndarray]:
    """Per-position flags: 1 where the character is absent from the common subsequence."""
    mask1 = np.ones(a.n1, dtype=np.uint8)
    mask2 = np.ones(a.n2, dtype=np.uint8)
    mask1[a.p - 1] = 0
    mask2[a.q - 1] = 0
    return mask1, mask2


@dataclass(frozen=True)
class EditStats:
    levenshtein: int
    len_c: int
    d_indel: int
    n1: int
    n2: int


def edit_stats(s1, s2, alignment: Alignment | None = None) -> EditStats:
    a = common_subsequence(s1, s2) if alignment is None else alignment
    return EditStats(edit_distance(s1, s2), a.len_c, a.d_indel, a.n1, a.n2)
