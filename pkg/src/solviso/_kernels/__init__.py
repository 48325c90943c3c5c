"""Kernel backend selection: compiled extension with numpy fallback.

The hot inner loop of canonization is equitable color refinement, run at
every node of the individualization-refinement search.  A Cython kernel
(``solviso._refine``) is built at install time; if it is unavailable, or
``SOLVISO_BACKEND=python`` is set, the numpy implementation is used.
Both backends are exact twins: byte-identical outputs, so canonical
forms do not depend on the backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import refine_py

_FORCED = os.environ.get("SOLVISO_BACKEND", "").strip().lower()

try:
    from solviso import _refine as _native
except ImportError:
    _native = None

if _FORCED == "python" or _native is None:
    _impl = refine_py
    _BACKEND = "python"
else:
    _impl = _native
    _BACKEND = "native"


def backend_name() -> str:
    return _BACKEND


def available_backends():
    names = ["python"]
    if _native is not None:
        names.insert(0, "native")
    return names


def set_backend(name: str) -> None:
    """Switch backends at runtime (used by tests and benchmarks)."""
    global _impl, _BACKEND
    if name == "python":
        _impl, _BACKEND = refine_py, "python"
    elif name == "native":
        if _native is None:
            raise RuntimeError("native kernel is not built")
        _impl, _BACKEND = _native, "native"
    else:
        raise ValueError(f"unknown backend {name!r}")


def refine_partition(indptr: np.ndarray, indices: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Coarsest equitable refinement of ``colors``; canonical class ids.

    Input colors may be arbitrary non-negative ints; they are first
    normalized to class ids ordered by color value, which keeps the
    result invariant under relabeling.
    """
    normalized = np.unique(np.asarray(colors, dtype=np.int64), return_inverse=True)[1]
    normalized = np.ascontiguousarray(normalized, dtype=np.int64)
    return _impl.refine_colors(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        normalized,
    )
