"""Compare the compiled core with the pure-Python fallback.

Each backend runs ``relselect bench`` in its own interpreter (the backend
is fixed at import through RELSELECT_BACKEND) on the same seeded input.
Answer digests must agree across backends before any timing is shown.

    python3 benchmarks/bench_backends.py --length 100000 --queries 20000
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_backend(backend, args):
    cmd = [
        sys.executable, "-m", "relselect.cli", "bench", "--format", "json",
        "--length", str(args.length), "--queries", str(args.queries), "--seed", str(args.seed),
        "--sub-rate", str(args.sub_rate), "--indel-rate", str(args.indel_rate),
    ]
    for k in args.kind:
        cmd += ["--kind", k]
    env = dict(os.environ, RELSELECT_BACKEND=backend)
    t0 = time.perf_counter()
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    wall = time.perf_counter() - t0
    if proc.returncode:
        raise SystemExit(f"{backend} run failed:\n{proc.stderr}")
    records = [json.loads(line) for line in proc.stdout.splitlines()]
    params = next(r for r in records if r["record"] == "params")
    if params["backend"] != backend:
        raise SystemExit(f"asked for {backend}, got {params['backend']} (extension not built?)")
    lat = {(r["mode"], r["kind"]): r for r in records if r["record"] == "latency"}
    return lat, wall


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--length", type=int, default=100_000)
    p.add_argument("--queries", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sub-rate", type=float, default=0.001)
    p.add_argument("--indel-rate", type=float, default=0.0002)
    p.add_argument("--kind", action="append", default=None)
    args = p.parse_args(argv)
    args.kind = args.kind or ["lf", "psi", "psi-binary", "select", "rank", "access"]

    compiled, wall_c = run_backend("compiled", args)
    python, wall_p = run_backend("python", args)
    for key, rec in compiled.items():
        if python[key]["digest"] != rec["digest"]:
            raise SystemExit(f"digest mismatch for {key}")

    print(f"length={args.length} queries={args.queries} seed={args.seed}; digests agree")
    print(f"{'mode':<20}{'kind':<12}{'compiled ns':>13}{'python ns':>13}{'speedup':>10}")
    for key in sorted(compiled):
        c, py = compiled[key]["ns_per_query"], python[key]["ns_per_query"]
        print(f"{key[0]:<20}{key[1]:<12}{c:>13.0f}{py:>13.0f}{py / c:>9.1f}x")
    print(f"wall clock: compiled {wall_c:.1f}s, python {wall_p:.1f}s")


if __name__ == "__main__":
    main()
