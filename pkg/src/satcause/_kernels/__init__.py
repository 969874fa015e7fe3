"""Kernel backend selection.

Imports the compiled extension when it is available, otherwise the numpy
fallback. Set SATCAUSE_KERNELS=python to force the fallback, or
SATCAUSE_KERNELS=compiled to fail loudly if the extension is missing.
``BACKEND`` reports which one is active.
"""

import os

from . import split_py

_requested = os.environ.get("SATCAUSE_KERNELS", "auto").strip().lower()

if _requested in ("python", "py", "fallback"):
    _impl = split_py
    BACKEND = "python"
elif _requested in ("compiled", "c", "cython"):
    from . import _split_cy as _impl  # type: ignore[no-redef]

    BACKEND = "compiled"
else:
    try:
        from . import _split_cy as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = split_py
        BACKEND = "python"

best_split_gini = _impl.best_split_gini
best_split_sse = _impl.best_split_sse
apply_tree = _impl.apply_tree

__all__ = ["BACKEND", "apply_tree", "best_split_gini", "best_split_sse"]
