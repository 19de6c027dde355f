"""Select the native core or the pure-Python fallback at import time.

Set ``BASKETQ_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pycore

native: ModuleType | None
if os.environ.get("BASKETQ_PURE_PYTHON", "") not in ("", "0"):
    native = None
else:
    try:
        from . import _core as native
    except ImportError:
        native = None

core: ModuleType = native if native is not None else _pycore
BACKEND: str = core.BACKEND


def get_backend(name: str = "auto") -> ModuleType:
    """Return the backend module for ``name`` (``auto``, ``native`` or ``python``)."""
    if name == "auto":
        return core
    if name == "python":
        return _pycore
    if name == "native":
        if native is None:
            raise RuntimeError("native core is not available")
        return native
    raise ValueError(f"unknown backend {name!r}")
