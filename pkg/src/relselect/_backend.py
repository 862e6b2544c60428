"""Kernel backend selection.

The compiled core is used when it imports; ``RELSELECT_BACKEND=python``
forces the pure-Python fallback. Structures look up ``core`` when they are
built, so tests may swap it with :func:`use`.
"""

import os

from . import _pycore

try:
    from . import _ccore
except ImportError:  # extension not built
    _ccore = None

BACKENDS = {"python": _pycore}
if _ccore is not None:
    BACKENDS["compiled"] = _ccore

_requested = os.environ.get("RELSELECT_BACKEND", "auto")
if _requested == "python" or _ccore is None:
    core = _pycore
elif _requested in ("auto", "compiled"):
    core = _ccore
else:
    raise ImportError(f"unknown RELSELECT_BACKEND {_requested!r}")


def use(name):
    """Switch the backend used for structures built from now on."""
    global core
    core = BACKENDS[name]
    return core


def name():
    return core.NAME
