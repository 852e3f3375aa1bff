import numpy as np
import pytest

import timeoplab as tl


@pytest.fixture(scope="session")
def grid():
    """Default desk-scale grid used throughout the suite."""
    return tl.build_grid(32.0, 8192)


@pytest.fixture(scope="session")
def phi2(grid):
    return tl.make_phi_n(2, 1.0, grid)


@pytest.fixture(scope="session")
def bump(grid):
    return tl.make_bump(1.0, 2.0, grid)


@pytest.fixture(scope="session")
def bumps(grid):
    return (
        tl.make_bump(1.0, 2.0, grid),
        tl.make_bump(2.0, 3.0, grid),
        tl.make_bump(-2.0, -1.0, grid),
    )


@pytest.fixture(scope="session")
def domain_states(grid, bumps):
    return tuple(tl.make_phi_n(n, 1.0, grid) for n in range(2, 7)) + bumps


def random_state(grid, rng):
    """Unit-norm random state with a smooth momentum cutoff."""
    raw = rng.standard_normal(grid.count) + 1j * rng.standard_normal(grid.count)
    raw *= np.exp(-0.02 * grid.nodes ** 2)
    wf = tl.WaveFunction(grid, raw)
    return wf.with_values(wf.values / tl.norm(wf))
