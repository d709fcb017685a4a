"""Backend selector: compiled kernels when available, pure Python otherwise.

Set NCOVER_FORCE_PY=1 to force the pure-Python lane (used by the consistency
tests and the benchmark).
"""

from __future__ import annotations

import os

from ._core_py import ClosureCapExceeded  # shared exception type

if os.environ.get("NCOVER_FORCE_PY") == "1":
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.BACKEND

perm_closure = _impl.perm_closure
make_gl1_ctx = _impl.make_gl1_ctx
gl1_min_spin_dim = _impl.gl1_min_spin_dim
make_semi_ctx = _impl.make_semi_ctx
semi_mul = _impl.semi_mul
semi_closure = _impl.semi_closure
semi_fixed_dims = _impl.semi_fixed_dims
semi_apply_vector = _impl.semi_apply_vector
semi_vector_orbits = _impl.semi_vector_orbits

__all__ = [
    "BACKEND",
    "ClosureCapExceeded",
    "perm_closure",
    "make_gl1_ctx",
    "gl1_min_spin_dim",
    "make_semi_ctx",
    "semi_mul",
    "semi_closure",
    "semi_fixed_dims",
    "semi_apply_vector",
    "semi_vector_orbits",
]
