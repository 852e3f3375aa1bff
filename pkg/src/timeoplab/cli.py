"""Command-line front end.

Each subcommand configures a grid, runs one named experiment family, and
writes a CSV table (plot-ready data) plus a JSON report (verdicts,
tolerances, seed, grid echo) into the output directory.  Exit codes:
0 = all verdicts pass, 1 = some verdict failed, 2 = configuration or
convergence error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import evolution, operators, scattering, spectral, states
from .kernels import BACKEND
from .lattice import BoxSequence, GridError, build_grid
from .operators import PotentialSpec, apply_T0, domain_diagnostic
from .reporting import grid_echo
from .states import make_bump, make_phi_n, make_power_tail, std_dev

THREAD_ENV_VAR = "TIMEOPLAB_NUM_THREADS"


class ConfigError(ValueError):
    """Malformed configuration file or invalid option value."""


@dataclass
class ExperimentConfig:
    """Flat experiment configuration; file keys match field names."""

    grid_K: float = 32.0
    grid_N: int = 8192
    seed: int = 20230815
    tol: float = -1.0  # < 0 means "use the subcommand default"
    horizon: float = 100.0
    out: str = "results"

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        cfg = cls()
        types = {f.name: f.type for f in fields(cls)}
        casts = {"grid_K": float, "grid_N": int, "seed": int, "tol": float,
                 "horizon": float, "out": str}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError("%s:%d: expected key = value" % (path, lineno))
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in types:
                    raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
                try:
                    setattr(cfg, key, casts[key](value))
                except ValueError as exc:
                    raise ConfigError("%s:%d: %s" % (path, lineno, exc)) from exc
        return cfg

    def to_file(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for key, value in asdict(self).items():
                text = value if isinstance(value, str) else repr(value)
                fh.write("%s = %s\n" % (key, text))

    def tol_or(self, default: float) -> float:
        return self.tol if self.tol >= 0 else default


def _fmt(value) -> str:
    """Deterministic cell formatting so equal configs give equal bytes."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12e" % float(value)
    if isinstance(value, complex):
        return "%.12e%+.12ej" % (value.real, value.imag)
    return str(value)


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(cfg: ExperimentConfig, name: str, header, rows, reports, extra=None) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    _write_csv(os.path.join(cfg.out, name + ".csv"), header, rows)
    payload = {
        "subcommand": name,
        "grid": grid_echo(build_grid(cfg.grid_K, cfg.grid_N)),
        "seed": cfg.seed,
        "backend": BACKEND,
        "config": asdict(cfg),
        "reports": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    if extra:
        payload.update(extra)
    _write_json(os.path.join(cfg.out, name + ".json"), payload)
    print("%s: %s (%d reports) -> %s" % (
        name, "pass" if payload["passed"] else "FAIL", len(reports), cfg.out))
    return 0 if payload["passed"] else 1


def _domain_states(grid):
    """The reference domain states used by the sweep subcommands."""
    out = [make_phi_n(n, 1.0, grid) for n in range(2, 7)]
    out += [make_bump(1.0, 2.0, grid), make_bump(2.0, 3.0, grid), make_bump(-2.0, -1.0, grid)]
    return out


def cmd_survival(cfg: ExperimentConfig) -> int:
    grid = build_grid(cfg.grid_K, cfg.grid_N)
    tol = cfg.tol_or(1e-6)
    rows = []
    reports = []
    # Closed-form comparison over the Gaussian family.
    for n in range(2, 7):
        for a0 in (0.5, 1.0, 2.0):
            psi = make_phi_n(n, a0, grid)
            times = np.linspace(0.0, 50.0, 101)
            series = evolution.survival_series(psi, psi, times)
            exact = (1.0 + times ** 2 / (16.0 * a0 ** 2)) ** (-(n + 0.5))
            for t, p, q in zip(times, series.probabilities, exact):
                rows.append((psi.state_id, t, p, q, abs(p - q) / q))
    worst = max(row[4] for row in rows)
    from .reporting import Check, Report
    reports.append(Report(
        name="survival_closed_form",
        statement="P(t) = (1 + t^2/(16 a0^2))^(-n-1/2) for the k^n Gaussian family",
        checks=[Check("max_rel_err", worst < tol, worst, tol)],
        grid=grid_echo(grid),
    ))
    # Survival inequality sweep.
    sweep_t = np.geomspace(0.1, cfg.horizon, 60)
    for psi in _domain_states(grid):
        reports.append(evolution.survival_bound_check(psi, sweep_t))
    header = ("state", "t", "P", "P_closed_form", "rel_err")
    return _emit(cfg, "survival", header, rows, reports)


def cmd_uncertainty(cfg: ExperimentConfig) -> int:
    grid = build_grid(cfg.grid_K, cfg.grid_N)
    n_list = (2, 5, 10, 50, 100, 200)
    report = spectral.kobe_sequence(n_list, 1.0, grid)
    rows = [
        (n, p, c, abs(p - c))
        for n, p, c in zip(n_list, report.data["products"], report.data["closed_form"])
    ]
    # Half-time table with the standard-deviation bound.
    ht_rows = []
    reports = [report]
    from .reporting import Check, Report
    for n in (2, 3, 4):
        psi = make_phi_n(n, 1.0, grid)
        res = evolution.half_time(psi, cfg.horizon)
        bound = 2.0 * np.sqrt(2.0) * std_dev(apply_T0, psi)
        ht_rows.append((psi.state_id, res.tau, bound, res.recross_near_horizon))
        reports.append(Report(
            name="half_time_bound",
            statement="2 sqrt(2) dT >= tau_h",
            checks=[Check("bound", bound >= res.tau, bound - res.tau, 0.0,
                          psi.state_id)],
            grid=grid_echo(grid),
            data={"tau": res.tau, "bound": bound},
        ))
    header = ("n", "product", "closed_form", "abs_err")
    code = _emit(cfg, "uncertainty", header, rows, reports,
                 extra={"half_time_table": [
                     {"state": s, "tau": t, "bound": b, "recross": bool(r)}
                     for s, t, b, r in ht_rows]})
    return code


def cmd_bounds(cfg: ExperimentConfig) -> int:
    grid = build_grid(cfg.grid_K, cfg.grid_N)
    rng = np.random.default_rng(cfg.seed)
    reports = []
    rows = []
    domain = _domain_states(grid)
    for _ in range(100):
        a = rng.uniform(0.0, 50.0)
        b = a + rng.uniform(0.0, 50.0 - a)
        B = spectral.BorelSet.from_intervals([(a, b)])
        for psi in domain:
            rep = spectral.check_ac_bound(psi, B)
            rep.seed = cfg.seed
            reports.append(rep)
            rows.append(("ac", psi.state_id, a, b, rep.data["lhs"], rep.data["rhs"]))
    for psi in (domain[0], domain[5]):
        for lam in np.linspace(0.0, 20.0, 5):
            for eps in (1.0, 0.1, 0.01):
                rep = spectral.resolvent_bound_check(psi, lam, eps)
                reports.append(rep)
                rows.append(("resolvent", psi.state_id, lam, eps,
                             rep.data["lhs"], rep.data["rhs"]))
    # Damped-oscillation helper table against the direct integral.
    from .reporting import Check, Report
    worst = 0.0
    for eps in (0.01, 0.1, 1.0, 10.0):
        for lam in np.linspace(-20.0, 20.0, 21):
            closed = spectral.f_eps_lambda(eps, lam)
            direct = spectral.f_eps_lambda_integral(eps, lam)
            worst = max(worst, abs(closed - direct))
            rows.append(("f", "", eps, lam, closed, direct))
    reports.append(Report(
        name="f_closed_form",
        statement="int_0^inf e^{-e t} sin(l t)/t dt = arctan(l/e), bounded by pi/2",
        checks=[Check("max_abs_err", worst < 1e-6, worst, 1e-6)],
        grid=grid_echo(grid),
    ))
    header = ("check", "state", "param1", "param2", "lhs", "rhs")
    return _emit(cfg, "bounds", header, rows, reports)


def cmd_weylrel(cfg: ExperimentConfig) -> int:
    grid = build_grid(cfg.grid_K, cfg.grid_N)
    tol = cfg.tol_or(1e-6)
    from .reporting import Check, Report
    rows = []
    reports = []
    bumps = [make_bump(1.0, 2.0, grid), make_bump(2.0, 3.0, grid), make_bump(-2.0, -1.0, grid)]
    for psi in bumps:
        for t in (1.0, -1.0, 3.0, -3.0, complex(1.0, -0.5)):
            res = evolution.free_tweakwr_residual(psi, t)
            rows.append(("weak_weyl", psi.state_id, str(t), res))
            reports.append(Report(
                name="weak_weyl_residual",
                statement="T exp(-i t H) = exp(-i t H) (T + t), Im t <= 0",
                checks=[Check("residual", res < tol, res, tol, "t=%s" % t)],
                grid=grid_echo(grid),
            ))
        reports.append(evolution.heisenberg_shift_check(psi, 5.0))
        for t in (0.5, 2.0, 8.0):
            rep = spectral.commutator_check(psi, t)
            reports.append(rep)
            for c in rep.checks:
                rows.append((c.name, psi.state_id, str(t), c.value))
    header = ("check", "state", "t", "residual")
    return _emit(cfg, "weylrel", header, rows, reports)


def cmd_domain(cfg: ExperimentConfig) -> int:
    from .reporting import Check, Report
    # Spacing refinement at fixed box probes the origin; box growth at
    # fixed spacing probes the momentum tail.  The evolved tail state
    # needs both so the quadratic phase stays resolved (K*dk constant).
    ladder_dk = BoxSequence.refine(cfg.grid_K, cfg.grid_N // 8, 4,
                                   grow_box=False, shrink_spacing=True)
    ladder_box = BoxSequence.refine(2.0 * cfg.grid_K, cfg.grid_N // 4, 4,
                                    grow_box=True, shrink_spacing=False)
    ladder_both = BoxSequence.refine(cfg.grid_K, cfg.grid_N // 4, 4,
                                     grow_box=True, shrink_spacing=True)
    cases = [
        ("phi_0", lambda g: make_phi_n(0, 1.0, g), ladder_dk, "diverging"),
        ("phi_1", lambda g: make_phi_n(1, 1.0, g), ladder_dk, "diverging"),
        ("phi_2", lambda g: make_phi_n(2, 1.0, g), ladder_dk, "converged"),
        ("phi_4", lambda g: make_phi_n(4, 1.0, g), ladder_dk, "converged"),
        ("bump", lambda g: make_bump(1.0, 2.0, g), ladder_dk, "converged"),
        ("power_tail", lambda g: make_power_tail(1.0, g), ladder_box, "converged"),
        ("evolved_power_tail",
         lambda g: evolution.free_propagate(make_power_tail(1.0, g), 1.0),
         ladder_both, "diverging"),
    ]
    rows = []
    reports = []
    for name, make, ladder, expected in cases:
        verdict = domain_diagnostic(make, ladder)
        for rec in verdict.records:
            rows.append((name, rec.half_width, rec.count,
                         rec.action_norm, rec.derivative_norm))
        reports.append(Report(
            name="domain_%s" % name,
            statement="T psi stays norm-bounded under grid refinement iff psi is a domain state",
            checks=[Check("verdict", verdict.verdict == expected,
                          verdict.growth_exponent, None,
                          "%s (expected %s)" % (verdict.verdict, expected))],
            data={"verdict": verdict.verdict, "exponent": verdict.growth_exponent},
        ))
    header = ("state", "K", "N", "action_norm", "derivative_norm")
    return _emit(cfg, "domain", header, rows, reports)


def cmd_scatter(cfg: ExperimentConfig) -> int:
    from .reporting import Check, Report
    grid = build_grid(cfg.grid_K, cfg.grid_N)
    barrier = PotentialSpec.from_callable(lambda x: 0.1 * np.exp(-x ** 2), grid, "barrier")
    psi = make_bump(1.0, 2.0, grid)
    tol = cfg.tol_or(scattering.DEFAULT_TOL)
    rows = []
    reports = []
    res = scattering.wave_operator(psi, barrier, "+", tol)
    for T, inc in zip(res.horizons[1:], res.increments):
        rows.append(("cauchy", "+", T, inc))
    reports.append(Report(
        name="wave_operator_convergence",
        statement="exp(+i T H1) exp(-i T H0) psi is Cauchy in the horizon",
        checks=[Check("converged", res.converged,
                      res.increments[-1] if res.increments else np.inf, tol)],
        grid=grid_echo(grid),
        data={"horizons": list(res.horizons), "increments": list(res.increments)},
    ))
    reports.append(scattering.intertwining_check(psi, barrier, 5.0, "+", tol))
    reports.append(scattering.t1_tweakwr_check(
        res.state, barrier, 2.0, "+", cfg.tol_or(scattering.CONJUGATION_TOL)))
    for rep in reports[-2:]:
        for c in rep.checks:
            rows.append((rep.name, "+", c.value, c.threshold))
    header = ("check", "direction", "value", "threshold")
    return _emit(cfg, "scatter", header, rows, reports)


def cmd_demo_interval(cfg: ExperimentConfig) -> int:
    from .reporting import Check, Report
    rows = []
    reports = []
    eps_exact = [2.0 * np.pi, 4.0 * np.pi, 0.0]
    eps_broken = [np.pi / 2.0, np.pi, 3.0]
    for eps in eps_exact + eps_broken:
        rep = operators.interval_ccr_demo(1.0, eps)
        rows.append((eps, rep.data["boundary_mismatch"], rep.data["shift_residual"]))
        expected_exact = eps in eps_exact
        reports.append(Report(
            name="interval_shift_eps_%.4f" % eps,
            statement=rep.statement,
            checks=[Check(
                "exactness_matches_eps",
                rep.passed == expected_exact,
                rep.data["shift_residual"],
                1e-10 if expected_exact else None,
            )],
            data=rep.data,
        ))
    header = ("eps", "boundary_mismatch", "shift_residual")
    return _emit(cfg, "demo-interval", header, rows, reports)


_SUBCOMMANDS = {
    "survival": cmd_survival,
    "uncertainty": cmd_uncertainty,
    "bounds": cmd_bounds,
    "weylrel": cmd_weylrel,
    "domain": cmd_domain,
    "scatter": cmd_scatter,
    "demo-interval": cmd_demo_interval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timeoplab",
        description="Run the time-operator experiment suites and emit CSV + JSON reports.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", nargs="?", default=None,
                       help="flat key=value config file; flags override it")
        p.add_argument("--grid-K", type=float, default=None)
        p.add_argument("--grid-N", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--horizon", type=float, default=None)
        p.add_argument("--out", type=str, default=None)
    return parser


def _resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    for flag, attr in (("grid_K", "grid_K"), ("grid_N", "grid_N"), ("seed", "seed"),
                       ("tol", "tol"), ("horizon", "horizon"), ("out", "out")):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg, attr, value)
    return cfg


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the configuration-error code
        return int(exc.code or 0)
    threads = os.environ.get(THREAD_ENV_VAR)
    if threads is not None:
        try:
            int(threads)
        except ValueError:
            print("invalid %s=%r" % (THREAD_ENV_VAR, threads), file=sys.stderr)
            return 2
    try:
        return _SUBCOMMANDS[args.subcommand](_resolve_config(args))
    except (ConfigError, GridError, OSError, scattering.ConvergenceError,
            states.DomainCoverageError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
