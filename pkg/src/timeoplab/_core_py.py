"""Pure numpy implementations of the hot kernels.

Used as a drop-in fallback when the compiled extension is unavailable.
Both backends must agree to rounding accuracy; tests enforce this.
"""
import numpy as np


def fd_derivative(values, interior, edge_left, edge_right):
    """Apply a banded finite-difference derivative to complex samples.

    interior: (2p+1,) stencil (already divided by the spacing) applied
    at rows p..N-1-p.  edge_left / edge_right: (p, w) one-sided stencils
    for the first/last p rows; edge_right rows act on the LAST w samples.
    """
    values = np.asarray(values, dtype=np.complex128)
    interior = np.asarray(interior, dtype=np.float64)
    n = values.shape[0]
    p = interior.shape[0] // 2
    out = np.zeros(n, dtype=np.complex128)
    for s, c in enumerate(interior):
        if c != 0.0:
            out[p:n - p] += c * values[s:n - 2 * p + s]
    w = edge_left.shape[1]
    out[:p] = edge_left @ values[:w]
    out[n - p:] = edge_right @ values[n - w:]
    return out


def phase_amplitudes(coeffs, energies, times):
    """amp[i] = sum_j coeffs[j] * exp(-1j * times[i] * energies[j]).

    Chunked over times to bound the temporary phase matrix.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    energies = np.asarray(energies, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    out = np.empty(times.shape[0], dtype=np.complex128)
    chunk = 64
    for s in range(0, times.shape[0], chunk):
        block = times[s:s + chunk]
        out[s:s + chunk] = np.exp(-1j * np.outer(block, energies)) @ coeffs
    return out
