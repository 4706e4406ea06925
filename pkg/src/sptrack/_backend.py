"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  ``SPTRACK_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _fallback

BACKENDS: dict[str, ModuleType] = {"python": _fallback}

try:
    from . import _ckernels  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["compiled"] = _ckernels


def _select() -> ModuleType:
    want = os.environ.get("SPTRACK_BACKEND", "").strip().lower()
    if want in ("python", "fallback"):
        return _fallback
    if want == "compiled" and _ckernels is None:
        raise ImportError("SPTRACK_BACKEND=compiled but sptrack._ckernels is not built")
    return _ckernels if _ckernels is not None else _fallback


kernels: ModuleType = _select()
name = "compiled" if kernels is _ckernels and _ckernels is not None else "python"


def use(backend: str) -> None:
    """Switch the process-wide backend (``"python"`` or ``"compiled"``)."""
    global kernels, name
    kernels = BACKENDS[backend]
    name = backend
