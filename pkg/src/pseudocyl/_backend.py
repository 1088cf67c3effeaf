"""Kernel backend selection.

The compiled Cython extension is a pure accelerator with an identical
interface; when it is absent (no compiler at install time) the NumPy
implementation takes over transparently.
"""

from __future__ import annotations

try:  # pragma: no cover - exercised indirectly by both install modes
    from pseudocyl import _kernels as _impl

    COMPILED = True
except ImportError:  # pragma: no cover
    from pseudocyl import _kernels_py as _impl

    COMPILED = False

period_gl_sum = _impl.period_gl_sum
tprime_gl_sum = _impl.tprime_gl_sum
rk4_orbit = _impl.rk4_orbit


def backend_name() -> str:
    """Name of the kernel implementation actually in use."""
    return _impl.BACKEND
