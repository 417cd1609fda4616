"""Kernel backend selection.

The Taylor-coefficient recurrences dominate the runtime of every rigorous
enclosure, so they exist twice: a compiled Cython extension
(:mod:`spinorbit.kernels._fast`) and a pure-Python fallback
(:mod:`spinorbit.kernels.pure`) with identical semantics. The compiled one
is preferred when importable; set SPINORBIT_BACKEND=python or =compiled to
force a choice (the latter raises if the extension is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("SPINORBIT_BACKEND", "auto").lower()
if _requested not in ("auto", "compiled", "python"):
    raise RuntimeError(
        f"SPINORBIT_BACKEND={_requested!r}: expected auto, compiled or python"
    )

if _requested in ("auto", "compiled"):
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import pure as _impl

        BACKEND = "python"
else:
    from . import pure as _impl

    BACKEND = "python"

state_series = _impl.state_series
var_series = _impl.var_series


def load_backend(name: str):
    """Return (state_series, var_series) for an explicit backend name."""
    if name == "python":
        from . import pure

        return pure.state_series, pure.var_series
    if name == "compiled":
        from . import _fast  # type: ignore[attr-defined]

        return _fast.state_series, _fast.var_series
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    out = ["python"]
    try:
        from . import _fast  # noqa: F401

        out.insert(0, "compiled")
    except ImportError:
        pass
    return out
