"""Select, rank and access on a string S2 through an index over a similar S1.

The structure is built in two layers around a common subsequence C of S1
and S2:

* :class:`SubsequenceSelect` answers select on C through S1, storing which
  characters of S1 were dropped (``B``) and, per character, which of its
  occurrences were dropped (``Bx``);
* :class:`SupersequenceSelect` answers select on S2 through any select on
  C, storing which characters of S2 are new (``Bp``), which occurrences of
  each character are new (``Bpx``) and the new characters themselves (``D``).

:class:`RelativeSelect` stacks the two without ever materializing C. The
``Bx``/``Bpx`` tables are keyed by character over the union alphabet;
characters absent from a string hold empty vectors.
"""

from __future__ import annotations

import struct
from collections.abc import Callable, Mapping

import numpy as np

from . import _backend
from .alignment import Alignment, marker_masks
from .bitvector import BitVector, as_bit_array
from .errors import FormatError, InvalidInputError, NotFoundError, RangeError, UnsupportedQueryError
from .sequence import IndexedSequence, as_array, sym

_MAGIC = b"RSEL"
_VERSION = 1

SelectFn = Callable[[object, int], int]


def _per_symbol(text: np.ndarray, mask: np.ndarray, alphabet) -> dict[str, BitVector]:
    return {chr(s): BitVector(mask[text == s]) for s in alphabet}


class SubsequenceSelect:
    """Markers turning select on S1 into select on a subsequence C of S1."""

    def __init__(self, B: BitVector, Bx: dict[str, BitVector]):
        self.B = B
        self.Bx = Bx

    def occ(self, x) -> int:
        """Occurrences of ``x`` that survive into C."""
        v = self.Bx.get(chr(sym(x)))
        return 0 if v is None else v.zeros

    def __len__(self) -> int:
        return self.B.zeros

    def select(self, s1: IndexedSequence, x, i: int) -> int:
        v = self.Bx.get(chr(sym(x)))
        if v is None or not 1 <= i <= v.zeros:
            raise NotFoundError(f"no occurrence {i} of {chr(sym(x))!r} in the subsequence")
        return self.B.rank0(s1.select(x, v.select0(i)))


def build_subsequence(s1: IndexedSequence, mask1, *, text=None, alphabet=None) -> SubsequenceSelect:
    """Markers for the subsequence of ``s1`` left after deleting ``mask1``'s 1-positions."""
    mask = as_bit_array(mask1)
    if mask.size != len(s1):
        raise InvalidInputError(f"mask has {mask.size} bits for a string of length {len(s1)}")
    arr = as_array(s1.text() if text is None else text)
    syms = s1.syms.tolist() if alphabet is None else sorted(set(alphabet) | set(s1.syms.tolist()))
    return SubsequenceSelect(BitVector(mask), _per_symbol(arr, mask, syms))


def subseq_select(t: SubsequenceSelect, s1: IndexedSequence, x, i: int) -> int:
    """Position in C of the ``i``-th ``x`` of C."""
    return t.select(s1, x, i)


class SupersequenceSelect:
    """Markers turning select on C into select on a supersequence S2 of C."""

    def __init__(self, Bp: BitVector, Bpx: dict[str, BitVector], D: IndexedSequence):
        self.Bp = Bp
        self.Bpx = Bpx
        self.D = D

    def occ(self, x) -> int:
        v = self.Bpx.get(chr(sym(x)))
        return 0 if v is None else len(v)

    def __len__(self) -> int:
        return len(self.Bp)

    def select(self, base_select: SelectFn, x, i: int) -> int:
        v = self.Bpx.get(chr(sym(x)))
        if v is None or not 1 <= i <= len(v):
            raise NotFoundError(f"no occurrence {i} of {chr(sym(x))!r} in the supersequence")
        if v.access(i):
            return self.Bp.select1(self.D.select(x, v.rank1(i)))
        return self.Bp.select0(base_select(x, v.rank0(i)))


def build_supersequence(c_occ: Mapping, s2, mask2, *, alphabet=None) -> SupersequenceSelect:
    """Markers for ``s2`` over the subsequence spelled by its 0-positions in ``mask2``.

    ``c_occ`` maps characters to their counts in that subsequence and is
    checked against the mask.
    """
    arr = as_array(s2)
    mask = as_bit_array(mask2)
    if mask.size != arr.size:
        raise InvalidInputError(f"mask has {mask.size} bits for a string of length {arr.size}")
    present = set(np.unique(arr).tolist())
    syms = sorted(present if alphabet is None else present | set(alphabet))
    Bpx = _per_symbol(arr, mask, syms)
    expected = {sym(k): int(v) for k, v in dict(c_occ).items()}
    for s in set(syms) | set(expected):
        kept = Bpx[chr(s)].zeros if chr(s) in Bpx else 0
        if kept != expected.get(s, 0):
            raise InvalidInputError(
                f"mask keeps {kept} of {chr(s)!r} but the subsequence has {expected.get(s, 0)}"
            )
    return SupersequenceSelect(BitVector(mask), Bpx, IndexedSequence(arr[mask == 1]))


def superseq_select(t: SupersequenceSelect, base_select: SelectFn, x, i: int) -> int:
    """Position in S2 of the ``i``-th ``x``, given select on C as ``base_select``."""
    return t.select(base_select, x, i)


class RelativeSelect:
    """Select, rank and access on S2 answered through S1's index.

    Without select support (``with_select=False``) the ``Bpx`` table is not
    kept and only rank and access are available.
    """

    def __init__(self, s1: IndexedSequence, sub: SubsequenceSelect, sup: SupersequenceSelect,
                 *, with_select: bool = True):
        if len(sub) != sup.Bp.zeros:
            raise InvalidInputError("the two layers disagree on the common subsequence length")
        self.s1 = s1
        self.sub = sub
        self.sup = sup
        self.with_select = with_select
        self.n1 = len(s1)
        self.n2 = len(sup)
        self.syms = sorted({ord(k) for k in sub.Bx} | {ord(k) for k in sup.Bpx})
        self.counts = np.zeros(256, dtype=np.int64)
        for s in self.syms:
            self.counts[s] = sub.occ(s) + sup.D.occ(s)
        core = _backend.core
        bx = [None] * 256
        bpx = [None] * 256
        for s in self.syms:
            v = sub.Bx.get(chr(s))
            if v is not None and len(v):
                bx[s] = v.core
            w = sup.Bpx.get(chr(s))
            if with_select and w is not None and len(w):
                bpx[s] = w.core
        self.core = core.RelSeq(
            self.n2, self.counts, s1.core, sub.B.core, bx, sup.Bp.core,
            bpx if with_select else None, sup.D.core,
        )

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return self.n2

    @property
    def len_c(self) -> int:
        return len(self.sub)

    @property
    def D(self) -> IndexedSequence:
        return self.sup.D

    def occ(self, x) -> int:
        return int(self.counts[sym(x)])

    def select(self, x, i: int) -> int:
        if not self.with_select:
            raise UnsupportedQueryError("built without relative select structures")
        s = sym(x)
        if not 1 <= i <= self.counts[s]:
            raise NotFoundError(f"no occurrence {i} of {chr(s)!r} (have {self.counts[s]})")
        return self.core.select(s, i)

    def rank(self, x, i: int) -> int:
        if not 0 <= i <= self.n2:
            raise RangeError(f"prefix length {i} outside 0..{self.n2}")
        return self.core.rank(sym(x), i)

    def access(self, i: int) -> str:
        if not 1 <= i <= self.n2:
            raise RangeError(f"position {i} outside 1..{self.n2}")
        return chr(self.core.access(i))

    def common_select(self, x, i: int) -> int:
        """Select on the (virtual) common subsequence C."""
        return self.sub.select(self.s1, x, i)

    def select_via_layers(self, x, i: int) -> int:
        """Same answer as :meth:`select`, composed from the two layers' own formulas."""
        return self.sup.select(self.common_select, x, i)

    def common_sequence(self) -> IndexedSequence:
        """Materialize C (for cross-checking only)."""
        text = as_array(self.s1.text())
        return IndexedSequence(text[self.sub.B.to_numpy() == 0])

    def text(self) -> bytes:
        idx = np.arange(1, self.n2 + 1, dtype=np.int64)
        return self.core.access_many(idx).tobytes()

    # -- serialization ---------------------------------------------------

    def components(self) -> dict[str, int]:
        """Serialized bytes per stored component (S1's index excluded)."""
        sizes = {
            "header": 4 + 2 + 16 + 1 + len(self.syms),
            "B": self.sub.B.nbytes,
            "Bx": sum(self.sub.Bx[chr(s)].nbytes for s in self.syms),
            "Bp": self.sup.Bp.nbytes,
            "D": self.sup.D.nbytes,
        }
        if self.with_select:
            sizes["Bpx"] = sum(self.sup.Bpx[chr(s)].nbytes for s in self.syms)
        return sizes

    @property
    def nbytes(self) -> int:
        return sum(self.components().values())

    def to_bytes(self) -> bytes:
        """``RSEL | u8 version | u8 flags | u64 n1 | u64 n2 | u8 sigma | symbols | B | Bx... | Bp | Bpx... | D``."""
        syms = bytes(self.syms)
        parts = [
            _MAGIC,
            struct.pack("<BBQQB", _VERSION, int(self.with_select), self.n1, self.n2, len(syms)),
            syms,
            self.sub.B.to_bytes(),
        ]
        parts += [self.sub.Bx[chr(s)].to_bytes() for s in self.syms]
        parts.append(self.sup.Bp.to_bytes())
        if self.with_select:
            parts += [self.sup.Bpx[chr(s)].to_bytes() for s in self.syms]
        parts.append(self.sup.D.to_bytes())
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, buf, s1: IndexedSequence, offset: int = 0) -> tuple[RelativeSelect, int]:
        mv = memoryview(buf)
        if bytes(mv[offset : offset + 4]) != _MAGIC:
            raise FormatError("not a relative select structure")
        try:
            version, flags, n1, n2, sigma = struct.unpack_from("<BBQQB", mv, offset + 4)
        except struct.error:
            raise FormatError("truncated relative select header") from None
        if version != _VERSION:
            raise FormatError(f"unsupported relative select version {version}")
        if n1 != len(s1):
            raise FormatError(f"structure expects a reference of length {n1}, got {len(s1)}")
        offset += 4 + 19
        syms = bytes(mv[offset : offset + sigma])
        offset += sigma
        B, offset = BitVector.from_bytes(mv, offset)
        Bx = {}
        for s in syms:
            Bx[chr(s)], offset = BitVector.from_bytes(mv, offset)
        Bp, offset = BitVector.from_bytes(mv, offset)
        with_select = bool(flags & 1)
        Bpx = {}
        if with_select:
            for s in syms:
                Bpx[chr(s)], offset = BitVector.from_bytes(mv, offset)
        D, offset = IndexedSequence.from_bytes(mv, offset)
        self = cls(s1, SubsequenceSelect(B, Bx), SupersequenceSelect(Bp, Bpx, D), with_select=with_select)
        if len(self) != n2:
            raise FormatError("decoded length disagrees with header")
        return self, offset


def build_relative(s1: IndexedSequence, s2, alignment: Alignment, *, with_select: bool = True,
                   s1_text=None) -> RelativeSelect:
    """Relative structure for ``s2`` over ``s1`` using the alignment's common subsequence."""
    text1 = as_array(s1.text() if s1_text is None else s1_text)
    text2 = as_array(s2)
    if alignment.n1 != text1.size or alignment.n2 != text2.size:
        raise InvalidInputError("alignment does not match the strings")
    mask1, mask2 = marker_masks(alignment)
    union = sorted(set(np.unique(text1).tolist()) | set(np.unique(text2).tolist()))
    sub = build_subsequence(s1, mask1, text=text1, alphabet=union)
    c_occ = {s: sub.occ(s) for s in union}
    sup = build_supersequence(c_occ, text2, mask2, alphabet=union)
    if not with_select:
        sup.Bpx = {}
    return RelativeSelect(s1, sub, sup, with_select=with_select)
