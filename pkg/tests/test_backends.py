import os
import subprocess
import sys

import numpy as np

from relselect import _backend
from relselect.fm import build_relative_fm
from relselect.mutate import mutated_pair


def _backend_in_subprocess(value):
    env = dict(os.environ, RELSELECT_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "from relselect import _backend; print(_backend.name())"],
                          env=env, capture_output=True, text=True)


def test_fallback_always_available():
    assert "python" in _backend.BACKENDS
    assert _backend_in_subprocess("python").stdout.strip() == "python"


def test_unknown_backend_rejected():
    assert _backend_in_subprocess("fortran").returncode != 0


def test_backends_agree():
    t1, t2, aln = mutated_pair(3, 3000, 0.01, 0.005)
    prev = _backend.name()
    answers = {}
    try:
        for name in _backend.BACKENDS:
            _backend.use(name)
            rel = build_relative_fm(t1, t2, alignment=aln)
            rows = np.arange(1, rel.n + 1, dtype=np.int64)
            answers[name] = (rel.lf_many(rows), rel.psi_many(rows), rel.psi_binary_many(rows), rel.rel.text())
    finally:
        _backend.use(prev)
    ref = answers["python"]
    for got in answers.values():
        assert all(np.array_equal(a, b) for a, b in zip(got[:3], ref[:3])) and got[3] == ref[3]
