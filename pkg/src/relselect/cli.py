"""``relselect`` command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error (bad input, I/O).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _backend
from .alignment import Alignment, common_subsequence, edit_distance
from .bench import KINDS, MODES, answer, build_indexes, digest, make_queries, run_bench, time_queries
from .boss import build_edges, relative_edge_bwt
from .errors import RelSelectError
from .fm import FMIndex, IndexFile, RelativeFMIndex, bwt_of, render
from .mutate import mutated_pair, read_sequence, write_fasta
from .relative import RelativeSelect, build_relative
from .sequence import IndexedSequence

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# bitvectors longer than this are summarized rather than printed in dumps
DUMP_BITS_MAX = 256


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, records: list[dict], text: str) -> None:
    if args.format == "json":
        for r in records:
            print(json.dumps(r, sort_keys=True))
    else:
        print(text)


def _rate(value: str) -> float:
    r = float(value)
    if not 0.0 <= r <= 1.0:
        raise argparse.ArgumentTypeError(f"rate {value} outside [0, 1]")
    return r


def _text_arg(value: str) -> bytes:
    """A literal string, or ``@path`` for a FASTA/raw file."""
    return read_sequence(value[1:]) if value.startswith("@") else value.encode("latin-1")


# -- subcommands -----------------------------------------------------------------


def cmd_mutate(args) -> int:
    t1, t2, aln = mutated_pair(args.seed, args.length, args.sub_rate, args.indel_rate)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    paths = {"reference": f"{out}.ref.fa", "target": f"{out}.tgt.fa", "alignment": f"{out}.aln"}
    write_fasta(paths["reference"], "reference", t1)
    write_fasta(paths["target"], "target", t2)
    Path(paths["alignment"]).write_bytes(aln.to_bytes())
    rec = {"record": "mutate", "seed": args.seed, "length": len(t1), "target_length": len(t2),
           "common": aln.len_c, "d_indel": aln.d_indel, **paths}
    _emit(args, [rec], "\n".join(f"{k}: {v}" for k, v in rec.items() if k != "record"))
    return EXIT_OK


def _size_records(mode: str, index) -> list[dict]:
    comps = {**index.components(), "total": index.nbytes}
    return [{"record": "size", "mode": mode, "component": k, "bytes": v} for k, v in comps.items()]


def cmd_build(args) -> int:
    target = read_sequence(args.target)
    if args.mode == "plain-fm":
        index = IndexFile(args.mode, FMIndex.from_text(target), meta={"target_length": len(target)})
    else:
        if not args.reference:
            raise _UsageError(f"--mode {args.mode} needs --reference")
        ref = read_sequence(args.reference)
        aln = Alignment.from_bytes(Path(args.alignment).read_bytes()) if args.alignment else None
        rel = build_indexes(ref, target, (args.mode,), alignment=aln)[args.mode]
        index = IndexFile(args.mode, rel, rel.reference,
                          {"target_length": len(target), "reference_length": len(ref)})
    blob = index.to_bytes()
    Path(args.out).write_bytes(blob)
    recs = _size_records(args.mode, index.target) + [{"record": "file", "path": args.out, "bytes": len(blob)}]
    text = "\n".join(f"{r['component']:>8}  {r['bytes']}" for r in recs[:-1])
    _emit(args, recs, f"{text}\nwrote {args.out} ({len(blob)} bytes)")
    return EXIT_OK


def _load_index(path) -> IndexFile:
    return IndexFile.from_bytes(Path(path).read_bytes())


def cmd_query(args) -> int:
    idx = _load_index(args.index).target
    if args.at is not None:
        value = _single_query(idx, args.kind, args.at, args.symbol)
        rec = {"record": "answer", "kind": args.kind, "at": args.at, "symbol": args.symbol, "answer": value}
        _emit(args, [rec], str(value))
        return EXIT_OK
    q = make_queries(idx, args.kind, args.queries, args.seed)
    d = digest(answer(idx, q))
    ns = time_queries(idx, q) if args.queries else 0.0
    rec = {"record": "query", "kind": args.kind, "queries": args.queries, "seed": args.seed,
           "digest": d, "ns_per_query": round(ns, 1)}
    _emit(args, [rec], f"digest {d or '(empty)'}\n{ns:.1f} ns/query over {args.queries} queries")
    return EXIT_OK


def _single_query(idx, kind: str, at: int, symbol):
    needs_symbol = kind in ("rank", "select")
    if needs_symbol and symbol is None:
        raise _UsageError(f"--kind {kind} needs --symbol")
    if kind == "lf":
        return idx.lf(at)
    if kind == "psi":
        return idx.psi(at)
    if kind == "psi-binary":
        return idx.psi_binary(at)
    if kind == "rank":
        return idx.rank(symbol, at)
    if kind == "select":
        return idx.select(symbol, at)
    return idx.access(at)


def cmd_bench(args) -> int:
    if args.reference and args.target:
        t1, t2 = read_sequence(args.reference), read_sequence(args.target)
        aln = Alignment.from_bytes(Path(args.alignment).read_bytes()) if args.alignment else None
    else:
        t1, t2, aln = mutated_pair(args.seed, args.length, args.sub_rate, args.indel_rate)
    modes = MODES if args.mode is None else tuple(args.mode)
    kinds = tuple(args.kind) if args.kind else ("lf", "psi", "psi-binary")
    params = {"reference_length": len(t1), "target_length": len(t2), "queries": args.queries,
              "sub_rate": args.sub_rate, "indel_rate": args.indel_rate, "backend": _backend.name()}
    report = run_bench(build_indexes(t1, t2, modes, alignment=aln), kinds, args.queries, args.seed,
                       timing=not args.no_timing, params=params)
    if args.format == "json":
        print(report.to_jsonl())
    else:
        print(report.to_text())
    return EXIT_OK


def cmd_bwt(args) -> int:
    text = _text_arg(args.text)
    bwt = bwt_of(text, strip_sentinel=args.strip)
    shown = render(bwt)
    _emit(args, [{"record": "bwt", "length": len(bwt), "bwt": shown}], shown)
    return EXIT_OK


def cmd_boss(args) -> int:
    t1 = _text_arg(args.text)
    edges = build_edges(t1, args.k).sort()
    recs = [{"record": "edge", "row": i + 1, "source": s.decode("latin-1"), "label": l.decode("latin-1")}
            for i, (s, l) in enumerate(edges.edges)]
    lines = [f"{i + 1:>3}) {row}" for i, row in enumerate(edges.dump().splitlines())]
    ebwt = edges.labels().decode("latin-1")
    recs.append({"record": "edge_bwt", "text": 1, "edge_bwt": ebwt})
    lines.append(f"edge-BWT: {ebwt}")
    if args.other is not None:
        rs, stats = relative_edge_bwt(t1, _text_arg(args.other), args.k)
        ebwt2 = rs.text().decode("latin-1")
        recs.append({"record": "edge_bwt", "text": 2, "edge_bwt": ebwt2})
        recs.append({"record": "edit", "levenshtein": stats.levenshtein, "common": stats.len_c,
                     "d_indel": stats.d_indel})
        lines += [f"edge-BWT 2: {ebwt2}", f"edit distance: {stats.levenshtein}",
                  f"common subsequence length: {stats.len_c}"]
    _emit(args, recs, "\n".join(lines))
    return EXIT_OK


def _bits(bv) -> str:
    return bv.to01() if len(bv) <= DUMP_BITS_MAX else f"<{len(bv)} bits, {bv.ones} ones>"


def _label(s: int) -> str:
    return render(bytes([s]))


def _dump_relative(rel: RelativeSelect) -> list[tuple[str, str]]:
    rows = [("B", _bits(rel.sub.B))]
    rows += [(f"B_{_label(s)}", _bits(rel.sub.Bx[chr(s)])) for s in rel.syms]
    rows.append(("B'", _bits(rel.sup.Bp)))
    if rel.with_select:
        rows += [(f"B'_{_label(s)}", _bits(rel.sup.Bpx[chr(s)])) for s in rel.syms]
    d = rel.D.text()
    rows.append(("D", render(d) if len(d) <= DUMP_BITS_MAX else f"<{len(d)} chars>"))
    return rows


def cmd_dump(args) -> int:
    if args.pair:
        s1, s2 = (_text_arg(t) for t in args.pair)
        rel = build_relative(IndexedSequence(s1), s2, common_subsequence(s1, s2))
        rows = [("C", rel.common_sequence().text().decode("latin-1")),
                ("edit distance", str(edit_distance(s1, s2)))] + _dump_relative(rel)
        mode = "relative-select"
    elif args.index:
        f = _load_index(args.index)
        mode = f.mode
        rows = [(k, str(v)) for k, v in {**f.components(), "total": f.target.nbytes}.items()]
        if isinstance(f.target, RelativeFMIndex):
            rows += _dump_relative(f.target.rel)
        else:
            bwt = f.target.bwt.text()
            rows.append(("bwt", render(bwt) if len(bwt) <= DUMP_BITS_MAX else f"<{len(bwt)} chars>"))
    else:
        raise _UsageError("dump needs an index file or --pair S1 S2")
    recs = [{"record": "component", "mode": mode, "name": k, "value": v} for k, v in rows]
    width = max(len(k) for k, _ in rows)
    _emit(args, recs, "\n".join(f"{k:<{width}}  {v}" for k, v in rows))
    return EXIT_OK


class _UsageError(Exception):
    pass


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relselect", description="Relative select/rank/access and FM-index tooling.")
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default=None,
                   help="core implementation (default: RELSELECT_BACKEND or auto)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=True):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    def gen(sp):
        sp.add_argument("--length", type=int, default=10_000_000)
        sp.add_argument("--sub-rate", type=_rate, default=0.001)
        sp.add_argument("--indel-rate", type=_rate, default=0.0002)

    sp = sub.add_parser("mutate", help="generate a reference and a mutated target")
    common(sp)
    gen(sp)
    sp.add_argument("--out", default="pair", help="output prefix (.ref.fa, .tgt.fa, .aln)")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("build", help="build and serialize an index over the target")
    common(sp, seed=False)
    sp.add_argument("target")
    sp.add_argument("--reference")
    sp.add_argument("--alignment", help="text alignment from `mutate`")
    sp.add_argument("--mode", choices=MODES, default="relative-fm+select")
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("query", help="run queries against an index file")
    common(sp)
    sp.add_argument("index")
    sp.add_argument("--kind", choices=KINDS, default="psi")
    sp.add_argument("--queries", type=int, default=1_000_000)
    sp.add_argument("--at", type=int, help="answer one query at this row/position/rank")
    sp.add_argument("--symbol", help="character for rank/select")
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("bench", help="space/time comparison of the index modes")
    common(sp)
    gen(sp)
    sp.add_argument("--reference")
    sp.add_argument("--target")
    sp.add_argument("--alignment")
    sp.add_argument("--mode", choices=MODES, action="append")
    sp.add_argument("--kind", choices=KINDS, action="append")
    sp.add_argument("--queries", type=int, default=1_000_000)
    sp.add_argument("--no-timing", action="store_true", help="digests only")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("bwt", help="print the BWT of a string ($ = sentinel)")
    common(sp, seed=False)
    sp.add_argument("text", help="literal text or @file")
    sp.add_argument("--strip", action="store_true", help="drop the sentinel")
    sp.set_defaults(func=cmd_bwt)

    sp = sub.add_parser("boss", help="edge-BWT of a de Bruijn graph")
    common(sp, seed=False)
    sp.add_argument("text", help="literal text or @file")
    sp.add_argument("other", nargs="?", help="second text to compare against")
    sp.add_argument("--k", type=int, default=3)
    sp.set_defaults(func=cmd_boss)

    sp = sub.add_parser("dump", help="show index components")
    common(sp, seed=False)
    sp.add_argument("index", nargs="?")
    sp.add_argument("--pair", nargs=2, metavar=("S1", "S2"),
                    help="build the relative structure of two literal strings and show it")
    sp.set_defaults(func=cmd_dump)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        return _run(parser, argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


def _run(parser, argv) -> int:
    args = parser.parse_args(argv)
    for name in ("queries", "length", "k"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            parser.error(f"--{name} must be non-negative")
    if args.backend:
        _backend.use(args.backend)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (RelSelectError, OSError) as exc:
        print(f"relselect: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
