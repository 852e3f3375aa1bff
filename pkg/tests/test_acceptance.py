"""End-to-end acceptance checks at the default desk-scale grid.

Each test prints a single PASS/FAIL verdict line so the suite output doubles
as an acceptance summary.  Tolerances are pinned; nothing here is tuned per
run.
"""
import numpy as np
import pytest

import timeoplab as tl
from timeoplab import evolution, scattering, spectral
from timeoplab.lattice import BoxSequence
from timeoplab.operators import (
    PotentialSpec,
    apply_A_delta,
    apply_C_delta,
    apply_H0,
    apply_T0,
    domain_diagnostic,
    interval_ccr_demo,
)


def _verdict(num, desc, ok):
    print("ACCEPTANCE %02d %s: %s" % (num, desc, "PASS" if ok else "FAIL"))
    assert ok, "acceptance criterion %d failed: %s" % (num, desc)


def test_acceptance_01_survival_closed_form(grid):
    times = np.linspace(0.0, 50.0, 101)
    worst = 0.0
    for n in range(2, 7):
        for a0 in (0.5, 1.0, 2.0):
            psi = tl.make_phi_n(n, a0, grid)
            p = evolution.survival_series(psi, psi, times).probabilities
            exact = (1.0 + times ** 2 / (16.0 * a0 ** 2)) ** (-(n + 0.5))
            worst = max(worst, float(np.max(np.abs(p - exact) / exact)))
    _verdict(1, "survival probability closed form (max rel err %.2e)" % worst,
             worst < 1e-6)


def test_acceptance_02_survival_inequality(domain_states):
    times = np.geomspace(0.1, 100.0, 60)
    ok = all(evolution.survival_bound_check(psi, times).passed
             for psi in domain_states)
    _verdict(2, "survival inequality 4(dT)^2 |psi|^2 / t^2 >= P(t)", ok)


def test_acceptance_03_uncertainty_sequence(grid):
    rep = spectral.kobe_sequence((2, 5, 10, 50, 100), 1.0, grid)
    tail = spectral.uncertainty_product(tl.make_phi_n(200, 1.0, grid))
    ok = rep.passed and abs(tail - 0.5) < 3e-3
    _verdict(3, "uncertainty products > 1/2, decreasing, closed form", ok)


def test_acceptance_04_half_time_bound(domain_states, phi2):
    ok = True
    for psi in domain_states:
        res = evolution.half_time(psi, horizon=100.0)
        bound = 2.0 * np.sqrt(2.0) * tl.std_dev(apply_T0, psi)
        ok = ok and bound >= res.tau
    tau2 = evolution.half_time(phi2, horizon=100.0).tau
    bound2 = 2.0 * np.sqrt(2.0) * tl.std_dev(apply_T0, phi2)
    ok = ok and abs(tau2 - 2.2610) < 1e-3 and abs(bound2 - 8.0) < 1e-3
    _verdict(4, "half-time bound 2 sqrt(2) dT >= tau_h (tau_h(phi2)=%.4f)" % tau2, ok)


def test_acceptance_05_ac_weight_bound(domain_states):
    rng = np.random.default_rng(20230815)
    ok = True
    for _ in range(100):
        a = rng.uniform(0.0, 50.0)
        b = a + rng.uniform(0.0, 50.0 - a)
        B = spectral.BorelSet.from_intervals([(a, b)])
        for psi in domain_states:
            ok = ok and spectral.check_ac_bound(psi, B).passed
    for psi in domain_states:
        point = spectral.BorelSet.from_intervals([(rng.uniform(0.0, 50.0),) * 2])
        ok = ok and spectral.spectral_weight_H0(psi, point) < 1e-6
    _verdict(5, "absolutely continuous weight bound + empty point spectrum", ok)


def test_acceptance_06_resolvent_and_f(phi2, bump):
    ok = True
    for psi in (phi2, bump):
        for lam in np.linspace(0.0, 20.0, 5):
            for eps in (1.0, 0.1, 0.01):
                ok = ok and spectral.resolvent_bound_check(psi, lam, eps).passed
    worst = 0.0
    for eps in (0.01, 0.1, 1.0, 10.0):
        for lam in np.linspace(-20.0, 20.0, 21):
            closed = spectral.f_eps_lambda(eps, lam)
            worst = max(worst, abs(closed - spectral.f_eps_lambda_integral(eps, lam)))
            ok = ok and abs(closed) <= np.pi / 2
    ok = ok and worst < 1e-6
    _verdict(6, "resolvent bound sweep + damped-oscillation closed form", ok)


def test_acceptance_07_weak_weyl_relation(bumps):
    ok = True
    for psi in bumps:
        for t in (1.0, -1.0, 3.0, -3.0, complex(1.0, -0.5)):
            ok = ok and evolution.free_tweakwr_residual(psi, t) < 1e-6
    errs = []
    for count in (4096, 8192, 16384):
        g = tl.build_grid(32.0, count)
        errs.append(evolution.free_tweakwr_residual(tl.make_bump(1.0, 2.0, g), 3.0))
    order = float(np.min(np.log2(np.array(errs[:-1]) / np.array(errs[1:]))))
    ok = ok and order >= 5.5
    for psi in bumps:
        ok = ok and evolution.heisenberg_shift_check(psi, 5.0).passed
    _verdict(7, "weak Weyl relation residuals (order %.2f)" % order, ok)


def test_acceptance_08_trig_commutators(bumps):
    ok = all(spectral.commutator_check(psi, t).passed
             for psi in bumps for t in (0.5, 2.0, 8.0))
    _verdict(8, "commutators with cos(tH) and sin(tH)", ok)


def test_acceptance_09_domain_diagnostics(bumps, phi2):
    ladder = BoxSequence.refine(32.0, 1024, 4, grow_box=False)
    ok = True
    for n, expected in ((0, "diverging"), (1, "diverging"),
                        (2, "converged"), (4, "converged")):
        v = domain_diagnostic(lambda g, n=n: tl.make_phi_n(n, 1.0, g), ladder)
        ok = ok and v.verdict == expected
    ok = ok and domain_diagnostic(
        lambda g: tl.make_bump(1.0, 2.0, g), ladder).verdict == "converged"
    evolved = domain_diagnostic(
        lambda g: evolution.free_propagate(tl.make_power_tail(1.0, g), 1.0),
        BoxSequence.refine(32.0, 2048, 4))
    ok = ok and evolved.verdict == "diverging" and evolved.growth_exponent > 0
    ok = ok and evolution.rapid_decay_probe(bumps[0], bumps[0], m_max=4).passed
    ok = ok and evolution.rapid_decay_probe(bumps[0], bumps[1], m_max=4).passed
    try:
        evolution.rapid_decay_probe(phi2, phi2, m_max=2)
        ok = False
    except ValueError:
        pass
    _verdict(9, "domain membership diagnostics + rapid-decay probe", ok)


def test_acceptance_10_scattering(grid, bump, bumps):
    zero = PotentialSpec.from_callable(lambda x: np.zeros_like(x), grid)
    free = scattering.wave_operator(bump, zero)
    ok = tl.norm(bump.with_values(free.state.values - bump.values)) < 1e-10
    barrier = PotentialSpec.from_callable(lambda x: 0.1 * np.exp(-x ** 2), grid)
    res = scattering.wave_operator(bump, barrier)
    ok = ok and res.converged and res.increments[-1] < 1e-3
    ok = ok and scattering.intertwining_check(bump, barrier, 5.0).passed
    # the transported identity lives on the range of the wave operator
    ok = ok and scattering.t1_tweakwr_check(res.state, barrier, 2.0).passed
    for psi in bumps:
        devs = []
        for delta in (1.0, 0.1, 0.01):
            ha = apply_H0(apply_A_delta(psi, delta)).values
            ah = apply_A_delta(apply_H0(psi), delta).values
            target = -1j * apply_C_delta(psi, delta).values
            ok = ok and tl.norm(psi.with_values(ha - ah - target)) < 1e-6
            diff = apply_A_delta(psi, delta).values - apply_T0(psi).values
            devs.append(tl.norm(psi.with_values(diff)))
        ok = ok and devs[0] > devs[1] > devs[2]
    _verdict(10, "wave operators, intertwining, regularized commutator", ok)


def test_acceptance_11_interval_demo():
    ok = True
    for eps in (2 * np.pi, 4 * np.pi):
        rep = interval_ccr_demo(1.0, eps)
        ok = ok and rep.data["shift_residual"] < 1e-10
        ok = ok and rep.data["boundary_mismatch"] < 1e-10
    for eps in (np.pi / 2, np.pi, 3.0):
        ok = ok and interval_ccr_demo(1.0, eps).data["boundary_mismatch"] >= 1.0
    _verdict(11, "interval shift exact only at full turns", ok)
