"""Query generation, answer digests, timing and the space/time report."""

from __future__ import annotations

import hashlib
import json
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .alignment import Alignment
from .errors import RelSelectError, UnsupportedQueryError
from .fm import FMIndex, RelativeFMIndex, build_suffix_array, bwt_alignment, relative_fm
from .sequence import IndexedSequence

KINDS = ("lf", "psi", "psi-binary", "select", "rank", "access")
MODES = ("plain-fm", "relative-fm", "relative-fm+select")
# psi and psi-binary compute the same function, so they share a digest
_FAMILY = {"psi-binary": "psi"}

Index = FMIndex | RelativeFMIndex


class DigestMismatchError(RelSelectError):
    """Two indexes over the same target gave different answers."""


@dataclass(frozen=True, eq=False)
class Queries:
    kind: str
    idx: np.ndarray
    syms: np.ndarray | None = None

    def __len__(self):
        return int(self.idx.size)

    def chunk(self, lo: int, hi: int) -> Queries:
        return Queries(self.kind, self.idx[lo:hi], None if self.syms is None else self.syms[lo:hi])


def make_queries(index: Index, kind: str, count: int, seed: int) -> Queries:
    """``count`` random queries of ``kind``; identical for any index over the same BWT."""
    if kind not in KINDS:
        raise UnsupportedQueryError(f"unknown query kind {kind!r}")
    rng = np.random.default_rng([seed, KINDS.index(_FAMILY.get(kind, kind))])
    n = index.n
    if kind == "rank":
        present = np.asarray(index.syms, dtype=np.uint8)
        syms = present[rng.integers(0, present.size, size=count)]
        return Queries(kind, rng.integers(0, n + 1, size=count, dtype=np.int64), syms)
    if kind == "select":
        # uniform over occurrences: a random row names a symbol and a rank
        r = rng.integers(0, n, size=count, dtype=np.int64)
        syms = np.searchsorted(index.carr, r, side="right") - 1
        return Queries(kind, r - index.carr[syms] + 1, syms.astype(np.uint8))
    return Queries(kind, rng.integers(1, n + 1, size=count, dtype=np.int64))


def supports(index: Index, kind: str) -> bool:
    if isinstance(index, RelativeFMIndex) and not index.with_select:
        return kind not in ("psi", "select")
    return kind in KINDS


def answer(index: Index, q: Queries) -> np.ndarray:
    if not supports(index, q.kind):
        raise UnsupportedQueryError(f"{q.kind} queries need relative select structures")
    if q.kind == "lf":
        return index.lf_many(q.idx)
    if q.kind == "psi":
        return index.psi_many(q.idx)
    if q.kind == "psi-binary":
        return index.psi_binary_many(q.idx)
    if q.kind == "select":
        return index.seq.select_many(q.syms, q.idx)
    if q.kind == "rank":
        return index.seq.rank_many(q.syms, q.idx)
    return index.seq.access_many(q.idx).astype(np.int64)


def digest(answers: np.ndarray) -> str:
    """Checksum over the answers; empty for an empty batch."""
    if len(answers) == 0:
        return ""
    data = np.ascontiguousarray(answers, dtype="<i8").tobytes()
    return hashlib.blake2b(data, digest_size=16).hexdigest()


def time_queries(index: Index, q: Queries, batches: int = 5) -> float:
    """Median over ``batches`` slices of wall-clock nanoseconds per query."""
    m = len(q)
    if m == 0:
        return 0.0
    batches = max(1, min(batches, m))
    bounds = np.linspace(0, m, batches + 1).astype(int)
    answer(index, q.chunk(0, int(bounds[1])))  # warm-up
    per_query = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        part = q.chunk(int(lo), int(hi))
        t0 = time.perf_counter_ns()
        answer(index, part)
        per_query.append((time.perf_counter_ns() - t0) / len(part))
    return float(statistics.median(per_query))


def build_indexes(t1, t2, modes=MODES, *, alignment: Alignment | None = None,
                  method: str = "auto") -> dict[str, Index]:
    """Indexes over the target ``t2``; relative ones use ``t1`` as reference.

    The suffix arrays and BWT alignment are computed once and shared.
    """
    sa2 = build_suffix_array(t2)
    bwt2 = sa2.bwt()
    out: dict[str, Index] = {}
    if "plain-fm" in modes:
        out["plain-fm"] = FMIndex(IndexedSequence(bwt2))
    rel_modes = [m for m in modes if m != "plain-fm"]
    if rel_modes:
        sa1 = build_suffix_array(t1)
        aln = bwt_alignment(sa1, sa2, alignment, method)
        reference = FMIndex(IndexedSequence(sa1.bwt()))
        for m in rel_modes:
            out[m] = relative_fm(reference, bwt2, aln, with_select=m.endswith("+select"))
    return out


@dataclass
class BenchReport:
    seed: int
    params: dict = field(default_factory=dict)
    sizes: dict[str, dict[str, int]] = field(default_factory=dict)
    latency_ns: dict[str, dict[str, float]] = field(default_factory=dict)
    digests: dict[str, dict[str, str]] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    def total(self, mode: str) -> int:
        return self.sizes[mode]["total"]

    def records(self) -> list[dict]:
        """Flat key/value records, one per measurement."""
        recs = [{"record": "params", "seed": self.seed, **self.params}]
        for mode, comps in self.sizes.items():
            for comp, size in comps.items():
                recs.append({"record": "size", "mode": mode, "component": comp, "bytes": size})
        for mode, kinds in self.latency_ns.items():
            for kind, ns in kinds.items():
                recs.append({
                    "record": "latency", "mode": mode, "kind": kind, "ns_per_query": round(ns, 1),
                    "queries": self.counts.get(kind, 0), "digest": self.digests[mode][kind],
                })
        return recs

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.records())

    def to_text(self) -> str:
        kinds = [k for k in KINDS if any(k in v for v in self.latency_ns.values())]
        head = ["mode", "bytes", "bits/char"] + [f"{k} ns" for k in kinds]
        rows = [head]
        n = self.params.get("target_length") or 0
        for mode in self.sizes:
            total = self.total(mode)
            row = [mode, str(total), f"{8 * total / n:.3f}" if n else "-"]
            for k in kinds:
                ns = self.latency_ns.get(mode, {}).get(k)
                row.append("-" if ns is None else f"{ns:.0f}")
            rows.append(row)
        widths = [max(len(r[c]) for r in rows) for c in range(len(head))]
        lines = ["  ".join(cell.rjust(w) if c else cell.ljust(w) for c, (cell, w) in enumerate(zip(r, widths)))
                 for r in rows]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines)


def run_bench(indexes: dict[str, Index], kinds=("lf", "psi", "psi-binary"), count: int = 10**6,
              seed: int = 0, *, batches: int = 5, timing: bool = True, params=None) -> BenchReport:
    """Digest every supported (mode, kind), check cross-mode agreement, then time."""
    report = BenchReport(seed, dict(params or {}))
    ref = next(iter(indexes.values()))
    queries = {k: make_queries(ref, k, count, seed) for k in kinds}
    report.counts = {k: count for k in kinds}
    family: dict[str, tuple[str, str]] = {}
    for mode, index in indexes.items():
        report.sizes[mode] = {**index.components(), "total": index.nbytes}
        report.digests[mode] = {}
        for k in kinds:
            if not supports(index, k):
                continue
            d = digest(answer(index, queries[k]))
            report.digests[mode][k] = d
            fam = _FAMILY.get(k, k)
            if fam in family and family[fam][1] != d:
                raise DigestMismatchError(f"{mode}/{k} disagrees with {family[fam][0]}")
            family.setdefault(fam, (f"{mode}/{k}", d))
    for mode, index in indexes.items():
        report.latency_ns[mode] = {
            k: time_queries(index, queries[k], batches) if timing else 0.0
            for k in report.digests[mode]
        }
    return report
