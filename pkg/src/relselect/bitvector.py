"""Bit vectors with rank and select in both polarities.

Positions and occurrence ranks are 1-based; ``rank`` takes a prefix length
``0..n``. Two layouts sit behind the one class:

* dense: bits packed LSB-first into 64-bit words, plus the cumulative count
  of ones before every 512-bit block;
* sparse: the sorted positions of the minority bit.

Serialized form (all integers little-endian)::

    u64 n | u8 tag | payload
    tag b"D": u64 ones | u64[ceil(n/64)] words | u64[ceil(n/512)+1] block ranks
    tag b"S": u8 stored_bit | u64 m | u8 width | m positions packed at `width` bits each
"""

from __future__ import annotations

import struct

import numpy as np

from . import _backend
from .errors import FormatError, InvalidInputError, NotFoundError, RangeError

#: minority-bit density below which the sparse layout is chosen
SPARSE_DENSITY = 1 / 16

_TAG_DENSE = b"D"
_TAG_SPARSE = b"S"
_BLOCK_WORDS = 8


def _popcount_words(words: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(words).astype(np.int64)
    table = np.array([bin(k).count("1") for k in range(256)], dtype=np.int64)
    return table[words.view(np.uint8)].reshape(-1, 8).sum(axis=1)


def as_bit_array(bits) -> np.ndarray:
    """Coerce ``"0101"``, sequences of ints/bools or arrays to a uint8 0/1 array."""
    if isinstance(bits, BitVector):
        return bits.to_numpy()
    if isinstance(bits, (str, bytes)):
        raw = np.frombuffer(bits.encode() if isinstance(bits, str) else bits, dtype=np.uint8)
        if raw.size and not np.isin(raw, (48, 49)).all():
            raise InvalidInputError("bit strings may contain only '0' and '1'")
        return (raw - 48).astype(np.uint8)
    arr = np.asarray(bits)
    if arr.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if arr.dtype != np.bool_ and ((arr != 0) & (arr != 1)).any():
        raise InvalidInputError("bits must be 0 or 1")
    return arr.astype(np.uint8).ravel()


def _pack_words(bits: np.ndarray) -> np.ndarray:
    packed = np.packbits(bits, bitorder="little")
    nwords = (bits.size + 63) // 64
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    buf[: packed.size] = packed
    return buf.view("<u8").astype(np.uint64)


def _block_ranks(words: np.ndarray) -> np.ndarray:
    counts = _popcount_words(words)
    nblocks = (words.size + _BLOCK_WORDS - 1) // _BLOCK_WORDS
    padded = np.zeros(nblocks * _BLOCK_WORDS, dtype=np.int64)
    padded[: counts.size] = counts
    blocks = np.zeros(nblocks + 1, dtype=np.int64)
    np.cumsum(padded.reshape(-1, _BLOCK_WORDS).sum(axis=1), out=blocks[1:])
    return blocks


def _pack_positions(pos: np.ndarray, width: int) -> bytes:
    if pos.size == 0:
        return b""
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((pos.astype(np.uint64)[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def _unpack_positions(buf: bytes, m: int, width: int) -> np.ndarray:
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")[: m * width]
    weights = np.uint64(1) << np.arange(width, dtype=np.uint64)
    return (bits.reshape(m, width).astype(np.uint64) * weights).sum(axis=1).astype(np.int64)


class BitVector:
    """Immutable bit vector supporting access, rank and select."""

    __slots__ = ("n", "ones", "sparse", "_words", "_blocks", "_pos", "_stored", "core")

    def __init__(self, bits=(), *, sparse: bool | None = None):
        arr = as_bit_array(bits)
        n = int(arr.size)
        ones = int(arr.sum(dtype=np.int64))
        if sparse is None:
            sparse = n > 0 and min(ones, n - ones) < n * SPARSE_DENSITY
        if sparse:
            stored = 1 if ones <= n - ones else 0
            pos = np.flatnonzero(arr == stored).astype(np.int64) + 1
            self._init_sparse(n, stored, pos)
        else:
            words = _pack_words(arr)
            self._init_dense(n, ones, words, _block_ranks(words))

    @classmethod
    def from_positions(cls, n: int, positions, *, sparse: bool | None = None) -> BitVector:
        """Build a length-``n`` vector whose ones sit at the given 1-based positions."""
        pos = np.unique(np.asarray(positions, dtype=np.int64))
        if pos.size and (pos[0] < 1 or pos[-1] > n):
            raise RangeError(f"positions must lie in 1..{n}")
        if sparse is None:
            sparse = n > 0 and min(pos.size, n - pos.size) < n * SPARSE_DENSITY
        if sparse and pos.size <= n - pos.size:
            self = cls.__new__(cls)
            self._init_sparse(n, 1, pos)
            return self
        arr = np.zeros(n, dtype=np.uint8)
        arr[pos - 1] = 1
        return cls(arr, sparse=sparse)

    def _init_dense(self, n, ones, words, blocks):
        self.n, self.ones, self.sparse = n, ones, False
        self._words, self._blocks = words, blocks
        self._pos = self._stored = None
        self.core = _backend.core.DenseBits(n, ones, words, blocks)

    def _init_sparse(self, n, stored, pos):
        self.n, self.sparse = n, True
        self.ones = int(pos.size) if stored else n - int(pos.size)
        self._pos, self._stored = np.ascontiguousarray(pos, dtype=np.int64), stored
        self._words = self._blocks = None
        self.core = _backend.core.SparseBits(n, stored, self._pos)

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    @property
    def popcount(self) -> int:
        return self.ones

    @property
    def zeros(self) -> int:
        return self.n - self.ones

    def count(self, polarity: int) -> int:
        return self.ones if polarity else self.n - self.ones

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside 1..{self.n}")
        return self.core.access(i)

    @staticmethod
    def _polarity(b) -> int:
        if b not in (0, 1):
            raise InvalidInputError(f"bit polarity must be 0 or 1, got {b!r}")
        return int(b)

    def rank(self, polarity: int, i: int) -> int:
        polarity = self._polarity(polarity)
        if not 0 <= i <= self.n:
            raise RangeError(f"prefix length {i} outside 0..{self.n}")
        r = self.core.rank1(i)
        return r if polarity else i - r

    def select(self, polarity: int, j: int) -> int:
        polarity = self._polarity(polarity)
        if not 1 <= j <= self.count(polarity):
            raise NotFoundError(f"no {polarity}-bit of rank {j} (have {self.count(polarity)})")
        return self.core.select1(j) if polarity else self.core.select0(j)

    def rank0(self, i: int) -> int:
        return self.rank(0, i)

    def rank1(self, i: int) -> int:
        return self.rank(1, i)

    def select0(self, j: int) -> int:
        return self.select(0, j)

    def select1(self, j: int) -> int:
        return self.select(1, j)

    # -- conversion ------------------------------------------------------

    def to_numpy(self) -> np.ndarray:
        if self.sparse:
            arr = np.full(self.n, 1 - self._stored, dtype=np.uint8)
            arr[self._pos - 1] = self._stored
            return arr
        raw = self._words.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n]

    def to01(self) -> str:
        return (self.to_numpy() + 48).tobytes().decode()

    def one_positions(self) -> np.ndarray:
        """1-based positions of the set bits."""
        if self.sparse and self._stored == 1:
            return self._pos.copy()
        return np.flatnonzero(self.to_numpy()) + 1

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.to_numpy(), other.to_numpy())

    __hash__ = None

    def __repr__(self):
        body = self.to01() if self.n <= 64 else f"{self.to01()[:61]}..."
        kind = "sparse" if self.sparse else "dense"
        return f"BitVector({body!r}, n={self.n}, ones={self.ones}, {kind})"

    # -- serialization ---------------------------------------------------

    def to_bytes(self) -> bytes:
        head = struct.pack("<Q", self.n)
        if self.sparse:
            width = max(1, self.n.bit_length())
            m = int(self._pos.size)
            return b"".join(
                (head, _TAG_SPARSE, struct.pack("<BQB", self._stored, m, width),
                 _pack_positions(self._pos, width))
            )
        return b"".join(
            (head, _TAG_DENSE, struct.pack("<Q", self.ones),
             self._words.astype("<u8").tobytes(), self._blocks.astype("<i8").tobytes())
        )

    @property
    def nbytes(self) -> int:
        """Serialized size in bytes."""
        if self.sparse:
            width = max(1, self.n.bit_length())
            return 9 + 10 + (int(self._pos.size) * width + 7) // 8
        return 9 + 8 + 8 * (self._words.size + self._blocks.size)

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple[BitVector, int]:
        """Decode one vector starting at ``offset``; returns it and the next offset."""
        mv = memoryview(buf)
        try:
            (n,) = struct.unpack_from("<Q", mv, offset)
            tag = bytes(mv[offset + 8 : offset + 9])
            offset += 9
            self = cls.__new__(cls)
            if tag == _TAG_SPARSE:
                stored, m, width = struct.unpack_from("<BQB", mv, offset)
                offset += 10
                size = (m * width + 7) // 8
                if offset + size > len(mv):
                    raise FormatError("truncated sparse bit vector")
                pos = _unpack_positions(bytes(mv[offset : offset + size]), m, width)
                self._init_sparse(n, stored, pos)
                return self, offset + size
            if tag == _TAG_DENSE:
                (ones,) = struct.unpack_from("<Q", mv, offset)
                offset += 8
                nwords = (n + 63) // 64
                nblocks = (nwords + _BLOCK_WORDS - 1) // _BLOCK_WORDS + 1
                end = offset + 8 * (nwords + nblocks)
                if end > len(mv):
                    raise FormatError("truncated dense bit vector")
                words = np.frombuffer(mv[offset : offset + 8 * nwords], dtype="<u8").astype(np.uint64)
                blocks = np.frombuffer(mv[offset + 8 * nwords : end], dtype="<i8").astype(np.int64)
                self._init_dense(n, ones, words, blocks)
                return self, end
        except struct.error as exc:
            raise FormatError(f"truncated bit vector: {exc}") from None
        raise FormatError(f"unknown bit vector tag {tag!r}")
