"""Simulation kernel selection: compiled extension with pure-Python fallback.

Set ``MSLAB_ENGINE=python`` or ``MSLAB_ENGINE=compiled`` to force a kernel;
the default prefers the compiled one when the extension built.
"""
from __future__ import annotations

import os

from . import _pure
from ._pure import (POT_GREEDY, POT_ORDINAL, POT_WEIGHTED, POT_WEIGHTED_INF,
                    STATUS_BUDGET, STATUS_EXHAUSTED, STATUS_SATURATED)

_compiled = None
try:
    from . import _core as _compiled  # type: ignore[no-redef]
except ImportError:
    _compiled = None


def get_kernel(name: str = "auto"):
    """Return (engine name, run_kernel callable)."""
    if name in ("auto", None, ""):
        name = "compiled" if _compiled is not None else "python"
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled engine requested but the extension "
                               "is not built")
        return "compiled", _compiled.run_kernel
    if name == "python":
        return "python", _pure.run_kernel
    raise ValueError(f"unknown engine {name!r}")


ENGINE, run_kernel = get_kernel(os.environ.get("MSLAB_ENGINE", "auto"))

__all__ = [
    "ENGINE", "run_kernel", "get_kernel",
    "STATUS_SATURATED", "STATUS_EXHAUSTED", "STATUS_BUDGET",
    "POT_GREEDY", "POT_ORDINAL", "POT_WEIGHTED", "POT_WEIGHTED_INF",
]
