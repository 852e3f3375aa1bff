import numpy as np
import pytest

import timeoplab as tl
from timeoplab.operators import apply_H0, apply_T0
from timeoplab.states import DomainCoverageError, SymmetryError


class TestPhiN:
    def test_unit_norm(self, grid):
        for n in (0, 1, 2, 5, 100, 200):
            assert tl.norm(tl.make_phi_n(n, 1.0, grid)) == pytest.approx(1.0, abs=1e-10)

    def test_normalization_constant(self, grid):
        # N_2 = (int k^4 e^{-2 k^2} dk)^(-1/2) = ((3/16) sqrt(pi/2))^(-1/2)
        phi = tl.make_phi_n(2, 1.0, grid)
        j = grid.count // 2 + 500
        k = grid.nodes[j]
        n2 = phi.values[j].real / (k ** 2 * np.exp(-k ** 2))
        exact = (3.0 / 16.0 * np.sqrt(np.pi / 2.0)) ** -0.5
        assert n2 == pytest.approx(exact, abs=1e-8)
        assert n2 == pytest.approx(2.0628, abs=1e-3)

    def test_parity(self, grid):
        odd = tl.make_phi_n(1, 1.0, grid).values
        even = tl.make_phi_n(2, 1.0, grid).values
        assert np.allclose(odd, -odd[::-1])
        assert np.allclose(even, even[::-1])

    def test_narrow_grid_rejected(self):
        small = tl.build_grid(2.0, 64)
        with pytest.raises(DomainCoverageError):
            tl.make_phi_n(6, 0.5, small)

    def test_parameter_validation(self, grid):
        with pytest.raises(ValueError):
            tl.make_phi_n(-1, 1.0, grid)
        with pytest.raises(ValueError):
            tl.make_phi_n(2, 0.0, grid)

    def test_deterministic(self, grid):
        a = tl.make_phi_n(3, 1.0, grid)
        b = tl.make_phi_n(3, 1.0, grid)
        assert np.array_equal(a.values, b.values)


class TestBump:
    def test_compact_support(self, grid, bump):
        outside = (grid.nodes < 1.0) | (grid.nodes > 2.0)
        assert np.all(bump.values[outside] == 0)
        assert tl.norm(bump) == pytest.approx(1.0, abs=1e-10)

    def test_operator_preserves_support(self, grid, bump):
        out = apply_T0(bump)
        outside = (grid.nodes < 1.0 - 2 * grid.dk) | (grid.nodes > 2.0 + 2 * grid.dk)
        # derivative stencils reach 3 nodes past the support edge
        far = (grid.nodes < 1.0 - 4 * grid.dk) | (grid.nodes > 2.0 + 4 * grid.dk)
        assert np.all(out.values[far] == 0)
        assert np.any(out.values[~outside] != 0)

    def test_negative_support(self, grid):
        b = tl.make_bump(-3.0, -1.5, grid)
        assert np.all(b.values[grid.nodes > -1.5] == 0)
        assert tl.norm(b) == pytest.approx(1.0, abs=1e-10)

    def test_invalid_supports(self, grid):
        with pytest.raises(ValueError):
            tl.make_bump(-1.0, 2.0, grid)  # straddles 0
        with pytest.raises(ValueError):
            tl.make_bump(2.0, 1.0, grid)  # reversed
        with pytest.raises(DomainCoverageError):
            tl.make_bump(1.0, 50.0, grid)  # exceeds the box


class TestPowerTail:
    def test_flat_at_origin(self):
        # g(k)/|k|^m -> 0 for m <= 8 as the innermost node shrinks
        prev = None
        for n_count in (1024, 2048, 4096):
            g = tl.build_grid(8.0, n_count)
            wf = tl.make_power_tail(1.0, g)
            k_min = np.min(np.abs(g.nodes))
            j = int(np.argmin(np.abs(g.nodes)))
            ratio = abs(wf.values[j]) / k_min ** 8
            if prev is not None:
                assert ratio <= prev  # may underflow to exactly zero
            prev = ratio
        assert prev < 1e-10

    def test_norm_and_range(self, grid):
        assert tl.norm(tl.make_power_tail(1.0, grid)) == pytest.approx(1.0, abs=1e-10)
        for s in (0.5, 1.6, 0.0):
            with pytest.raises(ValueError):
                tl.make_power_tail(s, grid)


class TestMoments:
    def test_time_operator_mean_vanishes_on_real_states(self, grid, domain_states):
        for wf in domain_states:
            assert abs(tl.expectation(apply_T0, wf)) < 1e-8

    def test_energy_moments_closed_form(self, phi2):
        # <H0> = (n + 1/2)/(4 a0), dH0 = sqrt(n + 1/2)/(4 a0) for n=2, a0=1
        assert tl.expectation(apply_H0, phi2) == pytest.approx(0.625, abs=1e-6)
        assert tl.std_dev(apply_H0, phi2) == pytest.approx(np.sqrt(2.5) / 4, abs=1e-5)

    def test_symmetry_violation_raises(self, grid, phi2):
        def skewed(wf):
            return wf.with_values(1j * wf.values)

        with pytest.raises(SymmetryError):
            tl.expectation(skewed, phi2)

    def test_no_zero_spread(self, domain_states):
        # numerical echo of the absence of point spectrum for the time operator
        for wf in domain_states:
            assert tl.std_dev(apply_T0, wf) > 1e-6

    def test_time_spread_closed_form(self, phi2):
        # ||T phi_n|| = 2 a0 / sqrt(n - 3/2) at zero mean
        assert tl.std_dev(apply_T0, phi2) == pytest.approx(2 * np.sqrt(2), abs=1e-6)
