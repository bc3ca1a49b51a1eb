"""Element-batch kernels with selectable backend.

The per-element value computations that dominate assembly time exist twice:
a numba-jitted version and a pure-numpy one. Selection happens once, at first
use, from the PANELBUCK_KERNELS environment variable:

    PANELBUCK_KERNELS=numba   force the jitted kernels (error if numba missing)
    PANELBUCK_KERNELS=numpy   force the vectorized numpy fallback
    PANELBUCK_KERNELS=auto    numba when importable, numpy otherwise (default)

`python -m panelbuck.bench` times the two paths against each other.
"""

from __future__ import annotations

import os

from . import _numpy

_IMPL = None
_NAME = None


def _resolve():
    global _IMPL, _NAME
    if _IMPL is not None:
        return _IMPL
    choice = os.environ.get("PANELBUCK_KERNELS", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"PANELBUCK_KERNELS must be auto, numba or numpy, got {choice!r}"
        )
    if choice == "numpy":
        _IMPL, _NAME = _numpy, "numpy"
        return _IMPL
    try:
        from . import _numba
    except ImportError:
        if choice == "numba":
            raise
        _IMPL, _NAME = _numpy, "numpy"
    else:
        _IMPL, _NAME = _numba, "numba"
    return _IMPL


def use_backend(name: str) -> str:
    """Force a backend programmatically (tests, benchmarks). Returns the old name."""
    global _IMPL, _NAME
    old = active_backend()
    if name == "numpy":
        _IMPL, _NAME = _numpy, "numpy"
    elif name == "numba":
        from . import _numba
        _IMPL, _NAME = _numba, "numba"
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    return old


def active_backend() -> str:
    _resolve()
    return _NAME


def geometric_values(resultants, gxx, gyy, gxy):
    """Per-element 12x12 geometric stiffness blocks from constant resultants."""
    return _resolve().geometric_values(resultants, gxx, gyy, gxy)


def membrane_resultants(u_elems, b0, law, t_elems):
    """Per-element centroidal membrane resultants (Nx, Ny, Nxy)."""
    return _resolve().membrane_resultants(u_elems, b0, law, t_elems)


def gather_stiffness(section_of_elem, k_sections):
    """Per-element stiffness values gathered from a per-section table."""
    return _resolve().gather_stiffness(section_of_elem, k_sections)
