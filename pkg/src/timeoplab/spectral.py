"""Spectral measure of the free Hamiltonian and the bounds that follow
from the weak Weyl relation: absolute-continuity weight bound, resolvent
bound, commutator identities, and uncertainty products.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .lattice import WaveFunction, norm
from .operators import apply_H0, apply_T0, resolvent_H0
from .reporting import Check, Report, grid_echo
from .states import expectation, inner, make_phi_n, std_dev
from .evolution import free_propagate


@dataclass(frozen=True)
class BorelSet:
    """Finite union of disjoint closed intervals on the real line."""

    intervals: tuple[tuple[float, float], ...]

    @classmethod
    def from_intervals(cls, pairs) -> "BorelSet":
        cleaned = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if b < a:
                raise ValueError("interval endpoints out of order: [%g, %g]" % (a, b))
            cleaned.append((a, b))
        cleaned.sort()
        merged: list[tuple[float, float]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    @property
    def lebesgue(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        mask = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            mask |= (x >= a) & (x <= b)
        return mask


EMPTY_SET = BorelSet(())


def spectral_weight_H0(psi: WaveFunction, B: BorelSet) -> float:
    """||E(B) psi||^2 with E(B) the indicator of {k : k^2/2 in B}."""
    mask = B.contains(psi.grid.energies)
    return float(np.dot(psi.quad_weights, mask * np.abs(psi.values) ** 2).real)


def check_ac_bound(psi: WaveFunction, B: BorelSet, slack: float = 1e-8) -> Report:
    """||E(B) psi||^2 <= ||T psi|| ||psi|| |B|."""
    lhs = spectral_weight_H0(psi, B)
    rhs = norm(apply_T0(psi)) * norm(psi) * B.lebesgue
    return Report(
        name="ac_weight_bound",
        statement="|E(B) psi|^2 <= |T psi| |psi| |B|",
        checks=[Check("bound", lhs <= rhs + slack, lhs - rhs, slack)],
        grid=grid_echo(psi.grid),
        data={"lhs": lhs, "rhs": rhs, "lebesgue": B.lebesgue},
    )


def f_eps_lambda(eps: float, lam) -> np.ndarray | float:
    """The damped oscillatory integral int_0^inf e^{-eps t} sin(lam t)/t dt.

    Closed form: sign(lam) * (pi/2 - arctan(eps/|lam|)), i.e. arctan(lam/eps);
    vanishes at lam = 0 and is bounded by pi/2 in absolute value.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    lam = np.asarray(lam, dtype=np.float64)
    out = np.where(
        lam == 0.0,
        0.0,
        np.sign(lam) * (np.pi / 2.0 - np.arctan(eps / np.where(lam == 0.0, 1.0, np.abs(lam)))),
    )
    if out.ndim == 0:
        return float(out)
    return out


def f_eps_lambda_integral(eps: float, lam: float) -> float:
    """Direct numerical evaluation of the same integral (oracle route).

    Splits at t = 1: an ordinary adaptive quadrature on [0, 1] and an
    oscillatory-weight quadrature on [1, inf)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if lam == 0.0:
        return 0.0
    head, _ = integrate.quad(lambda t: np.exp(-eps * t) * np.sin(lam * t) / t, 0.0, 1.0)
    tail, _ = integrate.quad(
        lambda t: np.exp(-eps * t) / t, 1.0, np.inf, weight="sin", wvar=lam
    )
    return float(head + tail)


def resolvent_bound_check(psi: WaveFunction, lam: float, eps: float) -> Report:
    """|Im <psi, R(lam + i eps) psi>| <= pi ||T psi|| ||psi||."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    val = inner(psi, resolvent_H0(psi, complex(lam, eps)))
    lhs = abs(val.imag)
    rhs = float(np.pi * norm(apply_T0(psi)) * norm(psi))
    return Report(
        name="resolvent_bound",
        statement="|Im <psi, R(l + i e) psi>| <= pi |T psi| |psi|",
        checks=[Check("bound", lhs <= rhs + 1e-10, lhs - rhs, 1e-10)],
        grid=grid_echo(psi.grid),
        data={"lam": float(lam), "eps": float(eps), "lhs": lhs, "rhs": rhs},
    )


def commutator_check(psi: WaveFunction, t: float) -> Report:
    """[T, cos(tH)] psi = -i t sin(tH) psi  and  [T, sin(tH)] psi = i t cos(tH) psi."""
    minus = free_propagate(psi, t).values       # e^{-i t H}
    plus = free_propagate(psi, -t).values       # e^{+i t H}
    cos_vals = 0.5 * (plus + minus)
    sin_vals = (plus - minus) / 2j
    cos_psi = psi.with_values(cos_vals)
    sin_psi = psi.with_values(sin_vals)
    t_psi = apply_T0(psi).values

    # cos(tH) and sin(tH) act on T psi as diagonal multipliers.
    e = psi.grid.energies
    cos_mult = np.cos(t * e)
    sin_mult = np.sin(t * e)
    r_cos = apply_T0(cos_psi).values - cos_mult * t_psi + 1j * t * sin_vals
    r_sin = apply_T0(sin_psi).values - sin_mult * t_psi - 1j * t * cos_vals

    n = norm(psi)
    res_cos = norm(psi.with_values(r_cos)) / n
    res_sin = norm(psi.with_values(r_sin)) / n
    tol = 1e-6 * (1.0 + abs(t))
    return Report(
        name="trig_commutators",
        statement="[T, cos(tH)] = -i t sin(tH); [T, sin(tH)] = i t cos(tH)",
        checks=[
            Check("cos_commutator", res_cos < tol, res_cos, tol),
            Check("sin_commutator", res_sin < tol, res_sin, tol),
        ],
        grid=grid_echo(psi.grid),
        data={"t": float(t)},
    )


def uncertainty_product(psi: WaveFunction) -> float:
    """(dT)(dH) in the given state; raises on symmetry violations."""
    return std_dev(apply_T0, psi) * std_dev(apply_H0, psi)


def kobe_product_closed_form(n: int) -> float:
    """Closed form 0.5 sqrt((n + 1/2)/(n - 3/2)) for the k^n Gaussian family."""
    return 0.5 * np.sqrt((n + 0.5) / (n - 1.5))


def kobe_sequence(n_list, a0: float, grid) -> Report:
    """Uncertainty products over the k^n Gaussian family: strictly above 1/2,
    decreasing in n, approaching 1/2."""
    n_list = [int(n) for n in n_list]
    products = [uncertainty_product(make_phi_n(n, a0, grid)) for n in n_list]
    decreasing = all(b < a for a, b in zip(products, products[1:]))
    above = all(p > 0.5 for p in products)
    closed = [kobe_product_closed_form(n) for n in n_list]
    max_err = max(abs(p - c) for p, c in zip(products, closed))
    return Report(
        name="kobe_sequence",
        statement="(dT)(dH) > 1/2 with infimum 1/2, no minimizer",
        checks=[
            Check("strictly_decreasing", decreasing, float(len(products))),
            Check("above_half", above, float(min(products)), 0.5),
            Check("closed_form", max_err < 1e-4, max_err, 1e-4),
        ],
        grid=grid_echo(grid),
        data={
            "n_list": n_list,
            "a0": float(a0),
            "products": products,
            "closed_form": closed,
        },
    )
