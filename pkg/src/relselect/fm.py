"""Suffix arrays, BWTs and FM-index LF/Psi queries, plain and relative.

BWTs use the byte ``0x00`` as the terminating sentinel; it sorts before
every other byte and is rendered as ``$``. Rows and positions are 1-based.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .alignment import LCS_DP_BUDGET, Alignment, common_subsequence
from .errors import FormatError, InvalidInputError, RangeError, UnsupportedQueryError
from .relative import RelativeSelect, build_relative
from .sequence import IndexedSequence, as_array, as_bytes

SENTINEL = 0
#: texts up to this length are suffix-sorted by direct comparison
NAIVE_SA_MAX = 1024


def render(bwt: bytes) -> str:
    """Printable form of a BWT, with the sentinel shown as ``$``."""
    return bwt.replace(b"\x00", b"$").decode("latin-1")


def _check_text(text) -> np.ndarray:
    arr = as_array(text)
    if (arr == SENTINEL).any():
        raise InvalidInputError("text contains the reserved sentinel byte 0x00")
    return arr


def _sa_naive(arr: np.ndarray) -> np.ndarray:
    s = arr.tobytes() + b"\x00"
    return np.array(sorted(range(len(s)), key=lambda i: s[i:]), dtype=np.int64) + 1


def _sa_doubling(arr: np.ndarray) -> np.ndarray:
    n = arr.size + 1
    codes = np.empty(n, dtype=np.int64)
    codes[:-1] = arr
    codes[-1] = SENTINEL
    _, rank = np.unique(codes, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:] + 1
        key = rank * (n + 1) + second
        sa = np.argsort(key, kind="stable")
        sk = key[sa]
        fresh = np.empty(n, dtype=np.int64)
        fresh[0] = 0
        np.cumsum(sk[1:] != sk[:-1], out=fresh[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = fresh
        if fresh[-1] == n - 1:
            return sa.astype(np.int64) + 1
        k *= 2


@dataclass(frozen=True, eq=False)
class SuffixArray:
    """Sorted suffix start positions (1-based) of ``text`` + sentinel."""

    sa: np.ndarray
    text: bytes

    def __len__(self):
        return int(self.sa.size)

    def bwt(self) -> bytes:
        s = np.frombuffer(self.text + b"\x00", dtype=np.uint8)
        return s[self.sa - 2].tobytes()  # sa == 1 wraps to the sentinel

    def inverse(self) -> np.ndarray:
        """Row (1-based) of the suffix starting at each position 1..n+1, 0-indexed by position-1."""
        isa = np.empty(self.sa.size, dtype=np.int64)
        isa[self.sa - 1] = np.arange(1, self.sa.size + 1, dtype=np.int64)
        return isa


def build_suffix_array(text, *, method: str = "auto") -> SuffixArray:
    arr = _check_text(text)
    if method == "auto":
        method = "naive" if arr.size <= NAIVE_SA_MAX else "doubling"
    if method == "naive":
        sa = _sa_naive(arr)
    elif method == "doubling":
        sa = _sa_doubling(arr)
    else:
        raise InvalidInputError(f"unknown suffix array method {method!r}")
    return SuffixArray(sa, arr.tobytes())


def bwt_of(text, *, strip_sentinel: bool = False) -> bytes:
    bwt = build_suffix_array(text).bwt()
    return bwt.replace(b"\x00", b"") if strip_sentinel else bwt


def cyclic_bwt(text) -> bytes:
    """Sentinel-free BWT from sorted rotations (small inputs only)."""
    t = as_bytes(text)
    n = len(t)
    rows = sorted(range(n), key=lambda i: t[i:] + t[:i])
    return bytes(t[i - 1] for i in rows)


def _lf_array(bwt: np.ndarray) -> np.ndarray:
    lf = np.empty(bwt.size, dtype=np.int64)
    lf[np.argsort(bwt, kind="stable")] = np.arange(bwt.size, dtype=np.int64)
    return lf


def inverse_bwt(bwt) -> bytes:
    arr = as_array(bwt)
    if int((arr == SENTINEL).sum()) != 1:
        raise InvalidInputError("a BWT must contain exactly one sentinel")
    lf = _lf_array(arr).tolist()
    chars = arr.tolist()
    out = bytearray()
    row = 0
    for _ in range(arr.size - 1):
        c = chars[row]
        if c == SENTINEL:
            raise InvalidInputError("not a BWT: LF mapping splits into several cycles")
        out.append(c)
        row = lf[row]
    if chars[row] != SENTINEL:
        raise InvalidInputError("not a BWT: LF mapping splits into several cycles")
    out.reverse()
    return bytes(out)


def _carr(counts: np.ndarray) -> np.ndarray:
    carr = np.zeros(257, dtype=np.int64)
    np.cumsum(counts, out=carr[1:])
    return carr


class _FMQueries:
    """LF/Psi entry points shared by the plain and relative indexes."""

    n: int
    core: object
    carr: np.ndarray

    def _row(self, i):
        if not 1 <= i <= self.n:
            raise RangeError(f"row {i} outside 1..{self.n}")

    def _rows(self, idx):
        idx = np.ascontiguousarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() > self.n):
            raise RangeError(f"rows must lie in 1..{self.n}")
        return idx

    def lf(self, i: int) -> int:
        self._row(i)
        return self.core.lf(i)

    def psi(self, i: int) -> int:
        self._row(i)
        return self.core.psi(i)

    def psi_binary(self, i: int) -> int:
        self._row(i)
        return self.core.psi_binary(i)

    def lf_many(self, idx) -> np.ndarray:
        return self.core.lf_many(self._rows(idx))

    def psi_many(self, idx) -> np.ndarray:
        return self.core.psi_many(self._rows(idx))

    def psi_binary_many(self, idx) -> np.ndarray:
        return self.core.psi_binary_many(self._rows(idx))

    def c_array(self) -> dict[str, int]:
        return {chr(s): int(self.carr[s]) for s in self.syms}


class FMIndex(_FMQueries):
    """BWT with access/rank/select plus the C array."""

    def __init__(self, bwt: IndexedSequence):
        self.bwt = bwt
        self.n = len(bwt)
        self.syms = bwt.syms.tolist()
        self.carr = _carr(bwt.counts)
        self.core = _backend.core.FMCore(bwt.core, self.carr, self.syms)

    @classmethod
    def from_text(cls, text) -> FMIndex:
        return cls(IndexedSequence(bwt_of(text)))

    def access(self, i: int) -> str:
        return self.bwt.access(i)

    def rank(self, x, i: int) -> int:
        return self.bwt.rank(x, i)

    def select(self, x, j: int) -> int:
        return self.bwt.select(x, j)

    @property
    def seq(self):
        return self.bwt.core

    @property
    def nbytes(self) -> int:
        return 4 + self.bwt.nbytes

    def components(self) -> dict[str, int]:
        return {"magic": 4, "bwt": self.bwt.nbytes}

    def to_bytes(self) -> bytes:
        return b"FMIX" + self.bwt.to_bytes()

    @classmethod
    def from_bytes(cls, buf, offset: int = 0) -> tuple[FMIndex, int]:
        if bytes(buf[offset : offset + 4]) != b"FMIX":
            raise FormatError("not an FM-index")
        bwt, offset = IndexedSequence.from_bytes(buf, offset + 4)
        return cls(bwt), offset


class RelativeFMIndex(_FMQueries):
    """FM-index queries on a target BWT stored relative to a reference FM-index."""

    def __init__(self, reference: FMIndex, rel: RelativeSelect, alignment: Alignment | None = None):
        if rel.s1 is not reference.bwt:
            raise InvalidInputError("relative structure was not built over this reference")
        self.reference = reference
        self.rel = rel
        self.alignment = alignment
        self.n = len(rel)
        self.syms = [s for s in rel.syms if rel.counts[s]]
        self.carr = _carr(rel.counts)
        self.core = _backend.core.FMCore(rel.core, self.carr, self.syms)

    @property
    def with_select(self) -> bool:
        return self.rel.with_select

    def psi(self, i: int) -> int:
        if not self.with_select:
            raise UnsupportedQueryError("Psi by select needs the relative select structures")
        return super().psi(i)

    def psi_many(self, idx) -> np.ndarray:
        if not self.with_select:
            raise UnsupportedQueryError("Psi by select needs the relative select structures")
        return super().psi_many(idx)

    def access(self, i: int) -> str:
        return self.rel.access(i)

    def rank(self, x, i: int) -> int:
        return self.rel.rank(x, i)

    def select(self, x, j: int) -> int:
        return self.rel.select(x, j)

    @property
    def seq(self):
        return self.rel.core

    def components(self) -> dict[str, int]:
        return {"magic": 4, **self.rel.components()}

    @property
    def nbytes(self) -> int:
        """Bytes of the relative part only; the reference is shared."""
        return 4 + self.rel.nbytes

    def to_bytes(self) -> bytes:
        return b"RFMX" + self.rel.to_bytes()

    @classmethod
    def from_bytes(cls, buf, reference: FMIndex, offset: int = 0) -> tuple[RelativeFMIndex, int]:
        if bytes(buf[offset : offset + 4]) != b"RFMX":
            raise FormatError("not a relative FM-index")
        rel, offset = RelativeSelect.from_bytes(buf, reference.bwt, offset + 4)
        return cls(reference, rel), offset


def project_alignment(sa1: SuffixArray, sa2: SuffixArray, text_alignment: Alignment) -> Alignment:
    """Common subsequence of two BWTs induced by an alignment of their texts.

    A matched text pair (p, q) puts the same character in front of suffixes
    p+1 and q+1, so their BWT rows can be matched; the two sentinel rows
    match too. The longest order-preserving subset of those row pairs is a
    common subsequence of the BWTs.
    """
    isa1, isa2 = sa1.inverse(), sa2.inverse()
    rows1 = np.concatenate(([isa1[0]], isa1[text_alignment.p]))
    rows2 = np.concatenate(([isa2[0]], isa2[text_alignment.q]))
    order = np.argsort(rows1, kind="stable")
    rows1, rows2 = rows1[order], rows2[order]
    keep = _backend.core.lis_mask(np.ascontiguousarray(rows2))
    return Alignment(rows1[keep], rows2[keep], len(sa1), len(sa2))


def bwt_alignment(sa1: SuffixArray, sa2: SuffixArray, alignment: Alignment | None = None,
                  method: str = "auto") -> Alignment:
    """Common subsequence of the two BWTs.

    ``method`` chooses how it is found: ``"lcs"`` diffs the BWTs directly,
    ``"projected"`` maps a text alignment (``alignment`` or an LCS of the
    texts) onto BWT rows. ``"auto"`` uses ``"projected"`` when a text
    alignment is supplied or the BWTs are too long for the LCS table.
    """
    if method == "auto":
        small = len(sa1) * len(sa2) <= LCS_DP_BUDGET
        method = "lcs" if alignment is None and small else "projected"
    if method == "lcs":
        return common_subsequence(sa1.bwt(), sa2.bwt())
    if method == "projected":
        if alignment is None:
            alignment = common_subsequence(sa1.text, sa2.text)
        alignment.validate(sa1.text, sa2.text)
        return project_alignment(sa1, sa2, alignment)
    raise InvalidInputError(f"unknown BWT alignment method {method!r}")


def relative_fm(reference: FMIndex, bwt2: bytes, bwt_aln: Alignment, *,
                with_select: bool = True) -> RelativeFMIndex:
    bwt1 = reference.bwt.text()
    rel = build_relative(reference.bwt, bwt2, bwt_aln, with_select=with_select, s1_text=bwt1)
    return RelativeFMIndex(reference, rel, bwt_aln)


def build_relative_fm(t1, t2, *, alignment: Alignment | None = None, with_select: bool = True,
                      method: str = "auto") -> RelativeFMIndex:
    """Reference FM-index over ``t1`` plus a relative index for ``t2``'s BWT.

    See :func:`bwt_alignment` for ``alignment`` and ``method``.
    """
    sa1, sa2 = build_suffix_array(t1), build_suffix_array(t2)
    aln = bwt_alignment(sa1, sa2, alignment, method)
    reference = FMIndex(IndexedSequence(sa1.bwt()))
    return relative_fm(reference, sa2.bwt(), aln, with_select=with_select)


# -- index container --------------------------------------------------------

_CONTAINER_MAGIC = b"RSIX"
_CONTAINER_VERSION = 1


@dataclass
class IndexFile:
    """A plain index, or a reference plus a relative index over a target."""

    mode: str
    target: FMIndex | RelativeFMIndex
    reference: FMIndex | None = None
    meta: dict = field(default_factory=dict)

    def components(self) -> dict[str, int]:
        return self.target.components()

    def to_bytes(self) -> bytes:
        """``RSIX | u16 version | u16 count | (tag[4] | u64 length | payload)*``."""
        meta = dict(self.meta, mode=self.mode)
        sections = [(b"META", json.dumps(meta, sort_keys=True).encode())]
        if self.reference is not None:
            sections.append((b"REFS", self.reference.to_bytes()))
        sections.append((b"TRGT", self.target.to_bytes()))
        out = [_CONTAINER_MAGIC, struct.pack("<HH", _CONTAINER_VERSION, len(sections))]
        for tag, payload in sections:
            out += [tag, struct.pack("<Q", len(payload)), payload]
        return b"".join(out)

    @classmethod
    def from_bytes(cls, buf) -> IndexFile:
        mv = memoryview(buf)
        if bytes(mv[:4]) != _CONTAINER_MAGIC:
            raise FormatError("not a relselect index file")
        try:
            version, count = struct.unpack_from("<HH", mv, 4)
        except struct.error:
            raise FormatError("truncated index header") from None
        if version != _CONTAINER_VERSION:
            raise FormatError(f"unsupported index version {version}")
        offset, sections = 8, {}
        for _ in range(count):
            tag = bytes(mv[offset : offset + 4])
            try:
                (length,) = struct.unpack_from("<Q", mv, offset + 4)
            except struct.error:
                raise FormatError("truncated section header") from None
            offset += 12
            if offset + length > len(mv):
                raise FormatError(f"section {tag!r} is truncated")
            sections[tag] = mv[offset : offset + length]
            offset += length
        if b"META" not in sections or b"TRGT" not in sections:
            raise FormatError("index file lacks required sections")
        meta = json.loads(bytes(sections[b"META"]).decode())
        mode = meta.pop("mode")
        reference = None
        if b"REFS" in sections:
            reference, _ = FMIndex.from_bytes(sections[b"REFS"])
        target_buf = sections[b"TRGT"]
        if reference is None:
            target, _ = FMIndex.from_bytes(target_buf)
        else:
            target, _ = RelativeFMIndex.from_bytes(target_buf, reference)
        return cls(mode, target, reference, meta)
