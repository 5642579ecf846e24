"""Kernel backend selection.

The compiled extension is preferred when present; the numpy reference
implementation is the fallback.  Set ``HUBBARDLL_KERNELS=python`` or
``=compiled`` to force a backend (the latter raises if the extension is
missing).
"""

import importlib
import os

_BACKENDS = ("compiled", "python")


def load_backend(name):
    """Return the kernel module for ``name`` ('compiled' or 'python')."""
    if name == "python":
        return importlib.import_module("hubbardll._kernels._ref")
    if name == "compiled":
        return importlib.import_module("hubbardll._kernels._speed")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    out = []
    for name in _BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        out.append(name)
    return tuple(out)


_forced = os.environ.get("HUBBARDLL_KERNELS", "").strip().lower()
if _forced == "python":
    _impl = load_backend("python")
    BACKEND = "python"
elif _forced == "compiled":
    _impl = load_backend("compiled")
    BACKEND = "compiled"
else:
    try:
        _impl = load_backend("compiled")
        BACKEND = "compiled"
    except ImportError:
        _impl = load_backend("python")
        BACKEND = "python"

g1_flow = _impl.g1_flow
hubbard_flow = _impl.hubbard_flow
ensemble_chunk = _impl.ensemble_chunk
