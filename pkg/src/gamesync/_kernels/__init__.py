"""Backend selection for the trajectory kernels.

The compiled extension `_speedups` is preferred when importable; the
pure-Python reference `_pyref` is the fallback and the semantics of
record.  Set ``GAMESYNC_PURE_PYTHON=1`` to force the fallback (used by
the benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _pyref

BACKEND = "python"
impl = _pyref

if os.environ.get("GAMESYNC_PURE_PYTHON", "").strip() in ("", "0"):
    try:
        from . import _speedups

        impl = _speedups
        BACKEND = "cython"
    except ImportError:
        pass


def available_backends() -> dict[str, object]:
    """Importable kernel modules keyed by backend name."""
    out: dict[str, object] = {"python": _pyref}
    try:
        from . import _speedups

        out["cython"] = _speedups
    except ImportError:
        pass
    return out
