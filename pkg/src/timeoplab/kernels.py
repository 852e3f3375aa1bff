"""Backend selection for the hot kernels.

Prefers the compiled extension (built by setup.py via Cython) and falls
back to the pure numpy implementation when it is missing.  BACKEND names
the active implementation so benchmarks and reports can record it.
"""
from . import _core_py

try:
    from . import _core as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _core_py
    BACKEND = "python"

fd_derivative = _impl.fd_derivative
phase_amplitudes = _impl.phase_amplitudes

# The fallback is always importable for cross-checking backends.
fd_derivative_py = _core_py.fd_derivative
phase_amplitudes_py = _core_py.phase_amplitudes
