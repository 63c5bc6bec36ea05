"""Backend selection for the hot loops.

The compiled extension is used when it was built; setting
``BOHR_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py
from ._kernels_py import CapExceeded

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``"cython"``, ``"python"`` or the default."""
    if name is None:
        name = "python" if os.environ.get("BOHR_PURE_PYTHON") else "cython"
    if name == "python":
        return _kernels_py
    if name == "cython":
        return _compiled if _compiled is not None else _kernels_py
    raise ValueError(f"unknown kernel backend {name!r}")


def compiled_available() -> bool:
    return _compiled is not None


_impl = get_backend()
BACKEND = "cython" if _impl is _compiled and _compiled is not None else "python"

implies_bits = _impl.implies_bits
neg_bits = _impl.neg_bits
notnot_bits = _impl.notnot_bits
is_upset = _impl.is_upset
enumerate_upsets = _impl.enumerate_upsets
prime_elements = _impl.prime_elements
adjunction_violations = _impl.adjunction_violations
exactly_one_search = _impl.exactly_one_search

__all__ = [
    "BACKEND",
    "CapExceeded",
    "adjunction_violations",
    "compiled_available",
    "enumerate_upsets",
    "exactly_one_search",
    "get_backend",
    "implies_bits",
    "is_upset",
    "neg_bits",
    "notnot_bits",
    "prime_elements",
]
