"""Backend selection: compiled LU kernels when built, numpy fallback otherwise.

Both backends produce bit-identical output by construction (identical IEEE
operation sequences); selection only affects speed.  Override with the
environment variable HYPERLINES_BACKEND=compiled|python or use_backend().
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False

_forced = os.environ.get("HYPERLINES_BACKEND", "").strip().lower()
if _forced == "python":
    _active = _kernels_py
elif _forced == "compiled":
    if not HAVE_COMPILED:
        raise ImportError("HYPERLINES_BACKEND=compiled but the extension is not built")
    _active = _kernels
else:
    _active = _kernels if HAVE_COMPILED else _kernels_py


def use_backend(name: str) -> None:
    """Switch the active kernel backend ('compiled' or 'python')."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if not HAVE_COMPILED:
            raise ValueError("compiled backend is not available")
        _active = _kernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def current():
    return _active


def backend_name() -> str:
    return _active.BACKEND_NAME
