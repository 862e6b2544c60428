"""Random DNA, seeded mutation with a ground-truth alignment, and FASTA I/O."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .alignment import Alignment
from .errors import InvalidInputError
from .sequence import as_array

DNA = np.frombuffer(b"ACGT", dtype=np.uint8)

_KEEP, _SUB, _DEL, _INS = 0, 1, 2, 3
_EMITTED = np.array([1, 1, 0, 2], dtype=np.int64)


def random_dna(length: int, rng: np.random.Generator) -> bytes:
    if length < 0:
        raise InvalidInputError("length must be non-negative")
    return DNA[rng.integers(0, 4, size=length)].tobytes()


def _check_rates(sub_rate: float, indel_rate: float) -> None:
    for name, r in (("substitution", sub_rate), ("indel", indel_rate)):
        if not 0.0 <= r <= 1.0:
            raise InvalidInputError(f"{name} rate {r} outside [0, 1]")
    if sub_rate + indel_rate > 1.0:
        raise InvalidInputError("substitution and indel rates sum to more than 1")


def mutate(text, sub_rate: float, indel_rate: float, rng: np.random.Generator) -> tuple[bytes, Alignment]:
    """Apply independent per-position edits to a DNA string.

    Each position is substituted (always by a different base), deleted, or
    preceded by a random inserted base; indels are split evenly between
    the two. Returns the new string and the alignment of untouched bases.
    """
    _check_rates(sub_rate, indel_rate)
    src = as_array(text)
    n = src.size
    u = rng.random(n)
    kind = np.full(n, _KEEP, dtype=np.int8)
    kind[u < sub_rate] = _SUB
    indel = (u >= sub_rate) & (u < sub_rate + indel_rate)
    kind[indel] = np.where(rng.random(n)[indel] < 0.5, _DEL, _INS)

    code = np.full(256, -1, dtype=np.int64)
    code[DNA] = np.arange(4)
    ends = np.cumsum(_EMITTED[kind])  # 1-based position of each source base's copy
    out = np.empty(int(ends[-1]) if n else 0, dtype=np.uint8)

    emitted = kind != _DEL
    out[ends[emitted] - 1] = src[emitted]
    subs = np.flatnonzero(kind == _SUB)
    if subs.size:
        c = code[src[subs]]
        if (c < 0).any():
            raise InvalidInputError("substitution needs a text over A, C, G, T")
        out[ends[subs] - 1] = DNA[(c + rng.integers(1, 4, size=subs.size)) % 4]
    ins = np.flatnonzero(kind == _INS)
    out[ends[ins] - 2] = DNA[rng.integers(0, 4, size=ins.size)]

    kept = np.flatnonzero((kind == _KEEP) | (kind == _INS))
    aln = Alignment((kept + 1).astype(np.int64), ends[kept].astype(np.int64), int(n), int(out.size))
    return out.tobytes(), aln


def mutated_pair(seed: int, length: int, sub_rate: float, indel_rate: float) -> tuple[bytes, bytes, Alignment]:
    """Deterministic (reference, target, alignment) triple for a seed."""
    _check_rates(sub_rate, indel_rate)
    rng = np.random.default_rng(seed)
    t1 = random_dna(length, rng)
    t2, aln = mutate(t1, sub_rate, indel_rate, rng)
    return t1, t2, aln


# -- FASTA ---------------------------------------------------------------------

_NORMALIZE = np.full(256, ord("N"), dtype=np.uint8)
for _c in b"ACGT":
    _NORMALIZE[_c] = _NORMALIZE[_c + 32] = _c


def parse_fasta(data: bytes) -> bytes:
    """Concatenated sequence of a FASTA file, uppercased, non-ACGT mapped to N."""
    lines = [ln.strip() for ln in data.splitlines() if not ln.startswith((b">", b";"))]
    seq = np.frombuffer(b"".join(lines), dtype=np.uint8)
    return _NORMALIZE[seq].tobytes()


def read_sequence(path) -> bytes:
    """FASTA if the file starts with ``>``, otherwise raw bytes minus line breaks."""
    data = Path(path).read_bytes()
    if data.lstrip()[:1] == b">":
        return parse_fasta(data)
    return data.replace(b"\r", b"").replace(b"\n", b"")


def write_fasta(path, name: str, seq: bytes, width: int = 80) -> None:
    with open(path, "wb") as fh:
        fh.write(b">" + name.encode() + b"\n")
        for i in range(0, len(seq), width):
            fh.write(seq[i : i + width] + b"\n")
