"""Numerical laboratory for time operators, weak Weyl relations and
survival-probability bounds on a one-dimensional momentum lattice."""

import os as _os

# Propagate the thread cap to the numerical backends.  This must happen
# before numpy initializes its BLAS thread pool, i.e. before any submodule
# import below; it is a no-op if numpy was already imported elsewhere.
_threads = _os.environ.get("TIMEOPLAB_NUM_THREADS")
if _threads is not None and _threads.isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .kernels import BACKEND
from .lattice import (
    BoxSequence,
    GridError,
    MomentumGrid,
    RepresentationError,
    WaveFunction,
    build_grid,
    inner,
    norm,
    quadrature,
    to_momentum,
    to_position,
)
from .states import (
    DomainCoverageError,
    SymmetryError,
    expectation,
    make_bump,
    make_phi_n,
    make_power_tail,
    std_dev,
)
from .operators import (
    DomainVerdict,
    PotentialSpec,
    apply_A_delta,
    apply_C_delta,
    apply_H0,
    apply_M_inv_k,
    apply_T0,
    domain_diagnostic,
    interval_ccr_demo,
    resolvent_H0,
)
from .evolution import (
    HalfTimeNotFound,
    StepBudgetError,
    SurvivalSeries,
    free_propagate,
    half_time,
    heisenberg_shift_check,
    rapid_decay_probe,
    split_step_propagate,
    survival_series,
    tweakwr_residual,
)
from .spectral import (
    BorelSet,
    check_ac_bound,
    commutator_check,
    f_eps_lambda,
    kobe_sequence,
    resolvent_bound_check,
    spectral_weight_H0,
    uncertainty_product,
)
from .scattering import (
    ConvergenceError,
    WaveOperatorResult,
    adjoint_wave_operator,
    conjugated_T,
    ground_state,
    intertwining_check,
    t1_tweakwr_check,
    wave_operator,
)
from .reporting import Check, Report

__version__ = "0.1.0"
