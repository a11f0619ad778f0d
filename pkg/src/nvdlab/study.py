"""Problem construction, references on a grid, convergence and comparison studies.

Everything here is driven by a resolved :class:`~nvdlab.config.RunConfig`.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import reference as ref
from .analysis import ConvergenceTable, check_meshes, error_norms
from .burgers import BurgersProblem, burgers_run
from .config import RunConfig
from .errors import ConfigError
from .grid import build_grid
from .schemes import SchemeId
from .systems import GasModel, RiemannIC, SweModel, SystemProblem, system_run, titarev_toro_problem

log = logging.getLogger(__name__)

PRIMARY_VARIABLE = {"burgers-inviscid": "u", "burgers-viscous": "u", "euler": "rho", "swe": "h"}


@dataclass
class Outcome:
    """Primitive fields of a finished run, keyed by variable name."""

    x: np.ndarray
    t: float
    fields: dict
    n_steps: int = 0
    snapshots: dict = field(default_factory=dict)


def build_problem(cfg: RunConfig, scheme=None, n_cells=None, t_final=None):
    scheme = SchemeId.parse(scheme or cfg.scheme)
    n = n_cells or cfg.n_cells
    t_final = cfg.t_final if t_final is None else t_final
    if cfg.problem == "burgers-inviscid":
        return BurgersProblem(build_grid(0.0, 2.0 * np.pi, n), scheme, cfg.theta, t_final, cfg.nu,
                              np.sin, cfg.bc_left, cfg.bc_right)
    if cfg.problem == "burgers-viscous":
        return BurgersProblem(build_grid(-1.0, 1.0, n), scheme, cfg.theta, t_final, cfg.nu,
                              lambda x: -np.sin(np.pi * x), cfg.bc_left, cfg.bc_right)
    if cfg.problem == "euler":
        base = titarev_toro_problem(n, scheme, cfg.theta, t_final, cfg.gamma)
        return base.with_changes(left=cfg.bc_left, right=cfg.bc_right)
    if cfg.problem == "swe":
        ic = RiemannIC(left=(cfg.h_left, 0.0), right=(cfg.h_right, 0.0), x0=0.0)
        return SystemProblem(SweModel(cfg.g), ic, -5.0, 5.0, n, scheme, cfg.theta, t_final,
                             cfg.bc_left, cfg.bc_right)
    raise ConfigError(f"unknown problem {cfg.problem!r}")


def _system_fields(model, U):
    W = model.to_primitive(U)
    return dict(zip(model.primitive_names, W))


def simulate(cfg: RunConfig, scheme=None, n_cells=None, t_final=None, snapshot_times=()) -> Outcome:
    problem = build_problem(cfg, scheme, n_cells, t_final)
    if isinstance(problem, BurgersProblem):
        res = burgers_run(problem, snapshot_times)
        snaps = {t: {"u": u} for t, u in res.snapshots.items()}
        return Outcome(res.x, res.t, {"u": res.u}, res.n_steps, snaps)
    res = system_run(problem, snapshot_times)
    snaps = {t: _system_fields(res.model, U) for t, U in res.snapshots.items()}
    return Outcome(res.x, res.t, _system_fields(res.model, res.U), res.n_steps, snaps)


def restrict(fine: np.ndarray, n_coarse: int) -> np.ndarray:
    """Block-average the last axis of ``fine`` onto ``n_coarse`` cells."""
    n_fine = fine.shape[-1]
    if n_fine % n_coarse:
        raise ConfigError(f"reference mesh {n_fine} is not a multiple of {n_coarse}")
    k = n_fine // n_coarse
    return fine.reshape(fine.shape[:-1] + (n_coarse, k)).mean(axis=-1)


def euler_reference(cfg: RunConfig, t: float):
    problem = build_problem(cfg, SchemeId.FOU, cfg.n_ref, t)
    return ref.euler_reference_first_order(problem, cfg.n_ref, cache=cfg.cache_dir)


def reference_fields(cfg: RunConfig, x: np.ndarray, t: float):
    """Reference primitive fields at cell centres ``x`` and time ``t``, or
    ``None`` when the configuration has no reference."""
    kind = cfg.reference
    if kind == "none":
        return None
    if kind == "series":
        return {"u": ref.platzman_u(x, t, cfg.n_terms)}
    if kind == "characteristics":
        return {"u": ref.burgers_characteristics(x, t)}
    if kind == "exact":
        if t == 0.0:
            ic = RiemannIC(left=(cfg.h_left, 0.0), right=(cfg.h_right, 0.0), x0=0.0)
            return _system_fields(SweModel(cfg.g), ic.sample(x, SweModel(cfg.g)))
        h, u = ref.solve_dambreak(cfg.h_left, cfg.h_right, cfg.g).sample(x / t)
        return {"h": h, "u": u}
    if kind == "fou-fine":
        fine = euler_reference(cfg, t)
        U = restrict(fine.U, x.size)
        return _system_fields(GasModel(cfg.gamma), U)
    raise ConfigError(f"unknown reference {kind!r}")


def convergence_study(cfg: RunConfig, scheme=None) -> ConvergenceTable:
    """Error table over ``cfg.meshes`` at time ``cfg.t_eval``.

    The default configuration for ``burgers-inviscid`` is the smooth,
    pre-shock sine-wave study at Courant number 0.2 scored against the
    characteristics solution.
    """
    if cfg.reference == "none":
        raise ConfigError(f"problem {cfg.problem!r} has no reference for a convergence study")
    meshes = check_meshes(cfg.meshes)
    scheme = SchemeId.parse(scheme or cfg.scheme)
    var = PRIMARY_VARIABLE[cfg.problem]
    reports = []
    for n in meshes:
        out = simulate(cfg, scheme, n, cfg.t_eval)
        exact = reference_fields(cfg, out.x, cfg.t_eval)
        reports.append(error_norms(out.fields[var], exact[var], scheme.value, cfg.problem))
    return ConvergenceTable(scheme.value, cfg.problem, reports)


@dataclass
class Comparison:
    x: np.ndarray
    variable: str
    solutions: dict
    reference: np.ndarray | None
    reports: dict

    def solution_columns(self) -> dict:
        cols = {"x": self.x}
        cols.update({str(s): v for s, v in self.solutions.items()})
        if self.reference is not None:
            cols["ref"] = self.reference
        return cols

    def error_columns(self) -> dict:
        if self.reference is None:
            raise ConfigError("no reference, no error columns")
        cols = {"x": self.x}
        cols.update({str(s): np.abs(v - self.reference) for s, v in self.solutions.items()})
        return cols


def dedupe_schemes(schemes) -> list:
    seen = []
    for s in schemes:
        s = SchemeId.parse(s)
        if s in seen:
            warnings.warn(f"duplicate scheme {s.value!r} ignored", stacklevel=3)
            continue
        seen.append(s)
    if not seen:
        raise ConfigError("no schemes to compare")
    return seen


def compare_schemes(cfg: RunConfig, schemes=None) -> Comparison:
    """Run every scheme on the same problem, grid and Courant number."""
    schemes = dedupe_schemes(schemes if schemes is not None else cfg.schemes)
    var = PRIMARY_VARIABLE[cfg.problem]
    solutions, reports = {}, {}
    x = exact = None
    for s in schemes:
        out = simulate(cfg, s)
        if x is None:
            x = out.x
            fields = reference_fields(cfg, x, out.t)
            exact = None if fields is None else fields[var]
        solutions[s] = out.fields[var]
        if exact is not None:
            reports[s] = error_norms(out.fields[var], exact, s.value, cfg.problem)
    return Comparison(x, var, solutions, exact, reports)
