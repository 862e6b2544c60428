import json
import subprocess
import sys

import pytest

from relselect.cli import EXIT_DATA, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dump_pair_shows_example_table(capsys):
    code, out, _ = run(capsys, "dump", "--pair", "TCTGCGTAAAAGGTGC", "TGCTCGTAAAACGCG")
    assert code == 0
    rows = dict(line.split(None, 1) if not line.startswith("edit") else ("edit", line.split()[-1])
                for line in out.splitlines())
    assert rows["B"] == "0001000000010101" and rows["B'"] == "010000000001010"
    assert rows["B_G"] == "10100" and rows["B'_C"] == "0011" and rows["D"] == "GCC"
    assert rows["C"] == "TCTCGTAAAAGG" and rows["edit"] == "5"


def test_boss(capsys):
    code, out, _ = run(capsys, "boss", "TACGTCGACGACT", "TACGACGCGACT", "--k", "3")
    assert code == 0
    assert "edge-BWT: TCCGTGGATAA$C" in out and "edit distance: 2" in out
    assert out.splitlines()[11].strip() == "12) ACT $"
    code, out, _ = run(capsys, "boss", "TACGTCGACGACT", "--format", "json")
    recs = [json.loads(x) for x in out.splitlines()]
    assert recs[-1] == {"record": "edge_bwt", "text": 1, "edge_bwt": "TCCGTGGATAA$C"}


def test_bwt(capsys):
    assert run(capsys, "bwt", "banana")[1].strip() == "annb$aa"
    assert run(capsys, "bwt", "GCACTTAGAGGTCAGT", "--strip")[1].strip() == "TCTGCGTAAAAGGTGC"


def test_pipeline(tmp_path, capsys):
    prefix = tmp_path / "pair"
    code, out, _ = run(capsys, "mutate", "--length", "5000", "--seed", "4", "--out", str(prefix),
                       "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["length"] == 5000
    digests = {}
    for mode in ("plain-fm", "relative-fm", "relative-fm+select"):
        idx = tmp_path / f"{mode}.idx"
        code, out, _ = run(capsys, "build", rec["target"], "--reference", rec["reference"],
                           "--alignment", rec["alignment"], "--mode", mode, "-o", str(idx), "--format", "json")
        assert code == 0 and idx.exists()
        sizes = {r["component"]: r["bytes"] for r in map(json.loads, out.splitlines()) if r["record"] == "size"}
        assert sizes["total"] == sum(v for k, v in sizes.items() if k != "total")
        kind = "psi" if mode != "relative-fm" else "psi-binary"
        code, out, _ = run(capsys, "query", str(idx), "--kind", kind, "--queries", "500", "--format", "json")
        digests[mode] = json.loads(out)["digest"]
        code, out, _ = run(capsys, "dump", str(idx))
        assert code == 0 and "total" in out
    assert len(set(digests.values())) == 1
    code, out, err = run(capsys, "query", str(tmp_path / "relative-fm.idx"), "--kind", "psi", "--queries", "5")
    assert code == EXIT_DATA and "relative select" in err


def test_single_queries(tmp_path, capsys):
    # the example texts, whose stripped BWTs are the example strings
    (tmp_path / "r.txt").write_text("GCACTTAGAGGTCAGT")
    (tmp_path / "t.txt").write_text("GCACTAGACGTCAGT")
    idx = tmp_path / "x.idx"
    assert run(capsys, "build", str(tmp_path / "t.txt"), "--reference", str(tmp_path / "r.txt"), "-o", str(idx))[0] == 0
    # target BWT is G$CTCGTAAAACGCG with '$' at row 2; the 4th C sits at 15
    assert run(capsys, "query", str(idx), "--kind", "select", "--symbol", "C", "--at", "4")[1].strip() == "15"
    assert run(capsys, "query", str(idx), "--kind", "lf", "--at", "1")[1].strip() == "14"
    assert run(capsys, "query", str(idx), "--kind", "rank", "--at", "3")[0] == EXIT_USAGE


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--length", "3000", "--queries", "500", "--seed", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("mode") and len(lines) == 5
    code, out, _ = run(capsys, "bench", "--length", "2000", "--queries", "0", "--mode", "plain-fm",
                       "--format", "json", "--no-timing")
    assert code == 0 and all(json.loads(x) for x in out.splitlines())


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "mutate", "--sub-rate", "2")[0] == EXIT_USAGE
    assert run(capsys, "query", str(tmp_path / "missing.idx"))[0] == EXIT_DATA
    bad = tmp_path / "bad.idx"
    bad.write_bytes(b"garbage")
    assert run(capsys, "dump", str(bad))[0] == EXIT_DATA
    assert run(capsys, "boss", "AC", "--k", "3")[0] == EXIT_DATA
    assert run(capsys, "dump")[0] == EXIT_USAGE
    assert run(capsys, "build", "x", "-o", str(tmp_path / "o"), "--mode", "relative-fm")[0] in (EXIT_USAGE, EXIT_DATA)


def test_console_script_and_backend_flag():
    out = subprocess.run([sys.executable, "-m", "relselect.cli", "--backend", "python", "bwt", "banana"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "annb$aa"
