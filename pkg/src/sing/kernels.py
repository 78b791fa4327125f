"""Kernel backend selection: compiled extension if importable, NumPy otherwise.

Set ``SING_PURE_PYTHON=1`` to force the NumPy fallback.  Both backends are
bit-identical in output; the compiled one is just faster on large stores.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SING_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

vote_counts = _impl.vote_counts
predicted_labels = _impl.predicted_labels
fold_errors = _impl.fold_errors
evaluate_relearn = _impl.evaluate_relearn


def backend() -> str:
    """Name of the active backend: 'cython' or 'python'."""
    return BACKEND


def available_backends() -> dict[str, object]:
    """Importable backend modules keyed by name (for tests and benchmarks)."""
    found: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
