"""Strings over small byte alphabets with access, rank and select.

Backed by a balanced wavelet tree: the sorted alphabet is split in half at
every node and each node stores one :class:`BitVector`, so every query
costs O(log sigma) bit vector operations.
"""

from __future__ import annotations

import struct

import numpy as np

from . import _backend
from .bitvector import BitVector
from .errors import FormatError, InvalidInputError, NotFoundError, RangeError, UnsupportedAlphabetError

MAX_ALPHABET = 64
_TAG = b"W"


def as_bytes(text) -> bytes:
    if isinstance(text, str):
        try:
            return text.encode("latin-1")
        except UnicodeEncodeError:
            raise InvalidInputError("text must be a byte string or latin-1 str") from None
    if isinstance(text, np.ndarray):
        return np.ascontiguousarray(text, dtype=np.uint8).tobytes()
    return bytes(text)


def as_array(text) -> np.ndarray:
    if isinstance(text, np.ndarray) and text.dtype == np.uint8:
        return text
    return np.frombuffer(as_bytes(text), dtype=np.uint8)


def sym(x) -> int:
    """Normalize a character given as str, bytes or int to its byte value."""
    if isinstance(x, (int, np.integer)):
        if not 0 <= x <= 255:
            raise InvalidInputError(f"symbol {x} is not a byte")
        return int(x)
    if isinstance(x, (str, bytes)) and len(x) == 1:
        return ord(x)
    raise InvalidInputError(f"not a single character: {x!r}")


def _shape(sigma: int):
    """Preorder node layout of the balanced tree over codes 0..sigma-1.

    Returns (left, right, mid, ranges); children < 0 are leaves -(code+1).
    """
    left, right, mid, ranges = [], [], [], []

    def visit(lo, hi):
        if hi - lo == 1:
            return -(lo + 1)
        v = len(mid)
        m = (lo + hi) // 2
        left.append(0)
        right.append(0)
        mid.append(m)
        ranges.append((lo, hi))
        left[v] = visit(lo, m)
        right[v] = visit(m, hi)
        return v

    if sigma >= 2:
        visit(0, sigma)
    return left, right, mid, ranges


def _paths(sigma, left, right, mid):
    """Per-code root-to-leaf node ids and branch bits, flattened sigma x maxd."""
    routes = []
    for c in range(sigma):
        route, v = [], 0
        while sigma >= 2:
            bit = 1 if c >= mid[v] else 0
            route.append((v, bit))
            ch = right[v] if bit else left[v]
            if ch < 0:
                break
            v = ch
        routes.append(route)
    maxd = max((len(r) for r in routes), default=0) or 1
    path_node = np.zeros(sigma * maxd, dtype=np.int32)
    path_bit = np.zeros(sigma * maxd, dtype=np.uint8)
    path_len = np.zeros(sigma, dtype=np.int32)
    for c, route in enumerate(routes):
        path_len[c] = len(route)
        for d, (v, bit) in enumerate(route):
            path_node[c * maxd + d] = v
            path_bit[c * maxd + d] = bit
    return path_node, path_bit, path_len, maxd


class IndexedSequence:
    """Immutable string supporting ``access``, ``rank`` and ``select``.

    Characters may be passed as 1-char ``str``/``bytes`` or byte values;
    ``access`` returns a 1-char ``str``. Characters outside the alphabet
    have rank 0 and no select answer.
    """

    def __init__(self, text=b""):
        arr = as_array(text)
        syms = np.unique(arr)
        if syms.size > MAX_ALPHABET:
            raise UnsupportedAlphabetError(
                f"{syms.size} distinct symbols; at most {MAX_ALPHABET} are supported"
            )
        code_of = np.full(256, -1, dtype=np.int16)
        code_of[syms] = np.arange(syms.size, dtype=np.int16)
        left, right, mid, ranges = _shape(int(syms.size))
        nodes = [None] * len(mid)
        # partition codes top-down; preorder matches _shape
        stack = [(0, code_of[arr].astype(np.int16))] if mid else []
        while stack:
            v, codes = stack.pop()
            bits = codes >= mid[v]
            nodes[v] = BitVector(bits)
            if right[v] >= 0:
                stack.append((right[v], codes[bits]))
            if left[v] >= 0:
                stack.append((left[v], codes[~bits]))
        counts = np.bincount(arr, minlength=256).astype(np.int64)
        self._assemble(int(arr.size), syms.astype(np.uint8), counts, nodes)

    def _assemble(self, n, syms, counts, nodes):
        self.n = n
        self.syms = syms
        self.counts = counts
        self.nodes = nodes
        sigma = int(syms.size)
        left, right, mid, _ = _shape(sigma)
        code_of = np.full(256, -1, dtype=np.int16)
        code_of[syms] = np.arange(sigma, dtype=np.int16)
        path_node, path_bit, path_len, maxd = _paths(sigma, left, right, mid)
        self.core = _backend.core.Wavelet(
            n, counts, [bv.core for bv in nodes],
            np.asarray(left, dtype=np.int32), np.asarray(right, dtype=np.int32),
            np.asarray(mid, dtype=np.int32), code_of, syms,
            path_node, path_bit, path_len, maxd,
        )

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    @property
    def alphabet(self) -> str:
        return self.syms.tobytes().decode("latin-1")

    def occ(self, x) -> int:
        return int(self.counts[sym(x)])

    def access(self, i: int) -> str:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside 1..{self.n}")
        return chr(self.core.access(i))

    def rank(self, x, i: int) -> int:
        if not 0 <= i <= self.n:
            raise RangeError(f"prefix length {i} outside 0..{self.n}")
        return self.core.rank(sym(x), i)

    def select(self, x, j: int) -> int:
        s = sym(x)
        if not 1 <= j <= self.counts[s]:
            raise NotFoundError(f"no occurrence {j} of {chr(s)!r} (have {self.counts[s]})")
        return self.core.select(s, j)

    def text(self) -> bytes:
        """Reconstruct the whole string through ``access``."""
        idx = np.arange(1, self.n + 1, dtype=np.int64)
        return self.core.access_many(idx).tobytes()

    def __repr__(self):
        body = self.text() if self.n <= 40 else self.text()[:37] + b"..."
        return f"IndexedSequence({body!r}, n={self.n})"

    # -- serialization ---------------------------------------------------

    def to_bytes(self) -> bytes:
        sigma = int(self.syms.size)
        head = _TAG + struct.pack("<QB", self.n, sigma) + self.syms.tobytes()
        head += self.counts[self.syms].astype("<u8").tobytes()
        return head + b"".join(bv.to_bytes() for bv in self.nodes)

    @property
    def nbytes(self) -> int:
        sigma = int(self.syms.size)
        return 10 + 9 * sigma + sum(bv.nbytes for bv in self.nodes)

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple[IndexedSequence, int]:
        mv = memoryview(buf)
        if bytes(mv[offset : offset + 1]) != _TAG:
            raise FormatError("not an indexed sequence")
        try:
            n, sigma = struct.unpack_from("<QB", mv, offset + 1)
        except struct.error:
            raise FormatError("truncated indexed sequence") from None
        offset += 10
        syms = np.frombuffer(mv[offset : offset + sigma], dtype=np.uint8).copy()
        offset += sigma
        counts = np.zeros(256, dtype=np.int64)
        counts[syms] = np.frombuffer(mv[offset : offset + 8 * sigma], dtype="<u8")
        offset += 8 * sigma
        nodes = []
        for _ in range(max(sigma - 1, 0)):
            bv, offset = BitVector.from_bytes(mv, offset)
            nodes.append(bv)
        self = cls.__new__(cls)
        self._assemble(n, syms, counts, nodes)
        return self, offset
