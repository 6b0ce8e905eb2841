"""Kernel backend selection.

The compiled extension is preferred; ``REGTRI_PURE_PYTHON=1`` forces the
pure-Python kernels, which are also used when the extension is not built.
"""

from __future__ import annotations

import os

from . import _pykernels


def _load_compiled():
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()

if _compiled is not None and os.environ.get("REGTRI_PURE_PYTHON", "") in ("", "0"):
    kernels = _compiled
    BACKEND = "cython"
else:
    kernels = _pykernels
    BACKEND = "python"


def get_kernels(name: str):
    """Return a specific backend module ("cython" or "python")."""
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]
