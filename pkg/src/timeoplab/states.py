"""Reference state families and first/second moments of symmetric operators.

Families:
  phi_n       k^n * N_n * exp(-a0 k^2), unit norm (momentum representation)
  bump        smooth compactly supported profile on [k1, k2], support off 0
  power_tail  exp(-1/k^2) / (1 + |k|^s), flat to all orders at the origin
"""
from __future__ import annotations

import numpy as np
from scipy import special

from .lattice import MOMENTUM, GridError, MomentumGrid, WaveFunction, inner, norm

FAMILY_PHI = "phi_n"
FAMILY_BUMP = "bump"
FAMILY_POWER_TAIL = "power_tail"

TAIL_MASS_TOL = 1e-12


class DomainCoverageError(ValueError):
    """Grid too small (in extent) to hold the requested state."""


class SymmetryError(ValueError):
    """Quadratic form of a supposedly symmetric operator came out complex."""


def _normalized(grid, values, family, label):
    wf = WaveFunction(grid, values, MOMENTUM, family, label)
    n = norm(wf)
    if not n > 0:
        raise GridError("state has zero norm on this grid")
    return wf.with_values(wf.values / n)


def make_phi_n(n: int, a0: float, grid: MomentumGrid) -> WaveFunction:
    """k^n Gaussian-weighted state, normalized by lattice quadrature."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    if not a0 > 0:
        raise ValueError("a0 must be positive")
    # Mass of |phi_n|^2 ~ k^{2n} e^{-2 a0 k^2} outside the box, as a fraction
    # of the total: regularized upper incomplete gamma at u = 2 a0 K^2.
    tail = special.gammaincc(n + 0.5, 2.0 * a0 * grid.half_width ** 2)
    if tail > TAIL_MASS_TOL:
        raise DomainCoverageError(
            "tail mass %.3g exceeds %.1g; enlarge the box" % (tail, TAIL_MASS_TOL)
        )
    k = grid.nodes
    # Build in log space so large n stays finite before normalization.
    logmag = -a0 * k ** 2
    if n > 0:
        logmag = logmag + n * np.log(np.abs(k))
    values = np.sign(k) ** n * np.exp(logmag - logmag.max())
    return _normalized(grid, values, FAMILY_PHI, "phi_%d(a0=%g)" % (n, a0))


def make_bump(k1: float, k2: float, grid: MomentumGrid) -> WaveFunction:
    """Smooth state exp(-1/((k-k1)(k2-k))) on [k1, k2], exactly 0 outside."""
    if not k1 < k2:
        raise ValueError("need k1 < k2")
    if k1 * k2 <= 0:
        raise ValueError("support must not straddle or touch k = 0")
    if max(abs(k1), abs(k2)) > grid.half_width:
        raise DomainCoverageError("support exceeds the box")
    k = grid.nodes
    u = (k - k1) * (k2 - k)
    values = np.zeros(grid.count)
    inside = u > 0
    values[inside] = np.exp(-1.0 / u[inside])
    return _normalized(grid, values, FAMILY_BUMP, "bump[%g,%g]" % (k1, k2))


def make_power_tail(s: float, grid: MomentumGrid) -> WaveFunction:
    """g(k) = exp(-1/k^2) / (1 + |k|^s), normalized; 1/2 < s <= 3/2."""
    if not 0.5 < s <= 1.5:
        raise ValueError("s must lie in (1/2, 3/2]")
    k = grid.nodes
    with np.errstate(under="ignore"):
        values = np.exp(-1.0 / k ** 2) / (1.0 + np.abs(k) ** s)
    return _normalized(grid, values, FAMILY_POWER_TAIL, "power_tail(s=%g)" % s)


def _moments(apply, wf: WaveFunction) -> tuple[float, float]:
    """Mean and standard deviation of a symmetric operator in state wf."""
    aw = apply(wf)
    n2 = norm(wf) ** 2
    val = inner(wf, aw)
    if abs(val.imag) > 1e-6 * n2:
        raise SymmetryError(
            "expectation has imaginary part %.3g (norm^2 %.3g)" % (val.imag, n2)
        )
    mean = val.real / n2
    dev = wf.with_values(aw.values - mean * wf.values)
    return mean, norm(dev) / np.sqrt(n2)


def expectation(apply, wf: WaveFunction) -> float:
    """<wf, A wf> / ||wf||^2 for a symmetric operator action A."""
    return _moments(apply, wf)[0]


def std_dev(apply, wf: WaveFunction) -> float:
    """||(A - <A>) wf|| / ||wf|| for a symmetric operator action A."""
    return _moments(apply, wf)[1]
