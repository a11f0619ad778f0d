"""Conservative explicit solver for 1D hyperbolic systems ``U_t + F(U)_x = 0``.

Two models are provided: the Euler equations of gas dynamics with an ideal
gas (``U = [rho, rho u, E]``) and the shallow-water equations
(``U = [h, h u]``).  Every conserved component is reconstructed with the
chosen normalized-variable scheme and the face states are combined with a
Rusanov flux.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import ConfigError, PositivityFailure
from .grid import BoundaryKind, Grid1D, Transmissive, apply_bc, build_grid, check_boundaries
from .schemes import SchemeId, reconstruct_faces
from .stepping import check_finite, march


def _first_bad(mask) -> int:
    return int(np.argmax(mask))


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4

    conserved_names = ("rho", "mom", "E")
    primitive_names = ("rho", "u", "p")
    n_components = 3

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ConfigError(f"gamma must exceed 1, got {self.gamma}")

    def pressure(self, U):
        rho, mom, E = U[0], U[1], U[2]
        if np.any(rho <= 0.0):
            raise PositivityFailure(f"non-positive density at cell {_first_bad(np.asarray(rho) <= 0.0)}")
        return (self.gamma - 1.0) * (E - 0.5 * mom * mom / rho)

    def flux(self, U):
        rho, mom, E = U[0], U[1], U[2]
        p = self.pressure(U)
        u = mom / rho
        return np.array([mom, mom * u + p, u * (E + p)])

    def max_wavespeed(self, U):
        p = np.asarray(self.pressure(U))
        if np.any(p < 0.0):
            raise PositivityFailure(f"negative pressure at cell {_first_bad(np.ravel(p) < 0.0)}")
        return np.abs(U[1] / U[0]) + np.sqrt(self.gamma * p / U[0])

    def to_conserved(self, W):
        rho, u, p = W[0], W[1], W[2]
        return np.array([rho, rho * u, p / (self.gamma - 1.0) + 0.5 * rho * u * u])

    def to_primitive(self, U):
        return np.array([U[0], U[1] / U[0], self.pressure(U)])

    def check_admissible(self, U, step=None):
        where = f" at step {step}" if step is not None else ""
        bad = ~(U[0] > 0.0)
        if bad.any():
            raise PositivityFailure(f"density <= 0{where}, cell {_first_bad(bad)}")
        p = (self.gamma - 1.0) * (U[2] - 0.5 * U[1] * U[1] / U[0])
        bad = ~(p > 0.0)
        if bad.any():
            raise PositivityFailure(f"pressure <= 0{where}, cell {_first_bad(bad)}")


@dataclass(frozen=True)
class SweModel:
    g: float = 9.81

    conserved_names = ("h", "hu")
    primitive_names = ("h", "u")
    n_components = 2

    def __post_init__(self):
        if not self.g > 0.0:
            raise ConfigError(f"gravity must be positive, got {self.g}")

    def _velocity(self, U):
        h = np.asarray(U[0], dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(h > 0.0, U[1] / np.where(h > 0.0, h, 1.0), 0.0)

    def flux(self, U):
        h, hu = np.asarray(U[0], dtype=float), np.asarray(U[1], dtype=float)
        u = self._velocity(U)
        return np.array([hu, hu * u + 0.5 * self.g * h * h])

    def max_wavespeed(self, U):
        h = np.asarray(U[0], dtype=float)
        if np.any(h < 0.0):
            raise PositivityFailure(f"negative depth at cell {_first_bad(np.ravel(h) < 0.0)}")
        return np.abs(self._velocity(U)) + np.sqrt(self.g * h)

    def to_conserved(self, W):
        return np.array([W[0], W[0] * W[1]])

    def to_primitive(self, U):
        return np.array([U[0], self._velocity(U)])

    def check_admissible(self, U, step=None):
        bad = ~(U[0] >= 0.0)
        if bad.any():
            where = f" at step {step}" if step is not None else ""
            raise PositivityFailure(f"depth < 0{where}, cell {_first_bad(bad)}")


Model = Union[GasModel, SweModel]


def euler_pressure(rho, mom, E, gas: GasModel = GasModel()):
    return gas.pressure((np.asarray(rho, dtype=float), mom, E))


def physical_flux(state, model: Model):
    return model.flux(np.asarray(state, dtype=float))


def max_wavespeed(state, model: Model):
    return model.max_wavespeed(np.asarray(state, dtype=float))


@dataclass(frozen=True)
class SinePerturbation:
    """Adds ``amplitude * sin(wavenumber * pi * x)`` to one primitive variable."""

    amplitude: float
    wavenumber: float
    component: int = 0

    def __call__(self, x, m):
        out = np.zeros((m, np.size(x)))
        out[self.component] = self.amplitude * np.sin(self.wavenumber * np.pi * np.asarray(x))
        return out


@dataclass(frozen=True)
class RiemannIC:
    """Two primitive states separated at ``x0``, each optionally perturbed."""

    left: tuple
    right: tuple
    x0: float = 0.0
    left_perturbation: SinePerturbation | None = None
    right_perturbation: SinePerturbation | None = None

    def primitive(self, x, model: Model):
        x = np.asarray(x, dtype=float)
        m = model.n_components
        W = np.where(x < self.x0, np.reshape(self.left, (m, 1)), np.reshape(self.right, (m, 1)))
        W = W.astype(float)
        for pert, mask in ((self.left_perturbation, x < self.x0), (self.right_perturbation, x >= self.x0)):
            if pert is not None:
                W[:, mask] += pert(x[mask], m)
        return W

    def sample(self, x, model: Model):
        W = self.primitive(x, model)
        model.check_admissible(model.to_conserved(W))
        return model.to_conserved(W)


@dataclass(frozen=True)
class SystemProblem:
    model: Model
    ic: Union[RiemannIC, Callable]
    x_min: float
    x_max: float
    n_cells: int
    scheme: SchemeId = SchemeId.ADBQUICKEST
    theta: float = 0.6
    t_final: float = 1.0
    left: BoundaryKind = field(default_factory=Transmissive)
    right: BoundaryKind | None = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", SchemeId.parse(self.scheme))
        if self.right is None:
            object.__setattr__(self, "right", self.left)
        check_boundaries(self.left, self.right)
        if not 0.0 < self.theta <= 1.0:
            raise ConfigError(f"Courant number must lie in (0, 1], got {self.theta}")
        if not self.t_final >= 0.0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final}")
        build_grid(self.x_min, self.x_max, self.n_cells)

    @property
    def grid(self) -> Grid1D:
        return build_grid(self.x_min, self.x_max, self.n_cells)

    def with_changes(self, **changes) -> "SystemProblem":
        return dataclasses.replace(self, **changes)

    def fingerprint(self) -> dict:
        """JSON-able description used as a cache key."""
        if not isinstance(self.ic, RiemannIC):
            raise ConfigError("only Riemann initial data can be fingerprinted")
        return {
            "model": type(self.model).__name__,
            "params": dataclasses.asdict(self.model),
            "ic": dataclasses.asdict(self.ic),
            "domain": [self.x_min, self.x_max],
            "n_cells": self.n_cells,
            "scheme": self.scheme.value,
            "theta": self.theta,
            "t_final": self.t_final,
            "bc": [str(self.left), str(self.right)],
        }


@dataclass
class SystemResult:
    x: np.ndarray
    U: np.ndarray
    t: float
    n_steps: int
    model: Model
    snapshots: dict = field(default_factory=dict)

    @property
    def primitive(self) -> np.ndarray:
        return self.model.to_primitive(self.U)


def titarev_toro_problem(n_cells=2500, scheme=SchemeId.ADBQUICKEST, theta=0.6, t_final=5.0, gamma=1.4):
    """Shock interacting with a sinusoidal density field on ``[-5, 5]``."""
    ic = RiemannIC(
        left=(1.515695, 0.523346, 1.80500),
        right=(1.0, 0.0, 1.0),
        x0=-4.5,
        right_perturbation=SinePerturbation(0.1, 20.0, 0),
    )
    return SystemProblem(GasModel(gamma), ic, -5.0, 5.0, n_cells, scheme, theta, t_final)


DAM_BREAK_T_FINAL = 0.8


def dam_break_problem(n_cells=400, scheme=SchemeId.ADBQUICKEST, theta=0.6, hL=1.0, hR=0.1,
                      g=9.81, t_final=DAM_BREAK_T_FINAL, x_min=-5.0, x_max=5.0, x0=0.0):
    """Still water of depths ``hL | hR`` released at ``x0``."""
    ic = RiemannIC(left=(hL, 0.0), right=(hR, 0.0), x0=x0)
    return SystemProblem(SweModel(g), ic, x_min, x_max, n_cells, scheme, theta, t_final)


def rusanov_flux(UL, UR, model: Model):
    alpha = np.maximum(model.max_wavespeed(UL), model.max_wavespeed(UR))
    return 0.5 * (model.flux(UL) + model.flux(UR)) - 0.5 * alpha * (UR - UL)


def system_step(U: np.ndarray, grid: Grid1D, scheme, model: Model, dt: float) -> np.ndarray:
    """One forward-Euler step on the ghost-filled array ``U`` of shape
    ``(m, n + 4)``; returns a new array with stale ghosts."""
    lam = dt / grid.dx
    speed = model.max_wavespeed(U)
    theta_f = np.clip(np.maximum(speed[1:-2], speed[2:-1]) * lam, 0.0, 1.0)
    UL, UR = reconstruct_faces(U, scheme, theta_f)
    F = rusanov_flux(UL, UR, model)
    new = U.copy()
    new[:, 2:-2] = U[:, 2:-2] - lam * (F[:, 1:] - F[:, :-1])
    return new


def compute_dt(U, grid: Grid1D, theta: float, model: Model) -> float:
    s = float(np.max(model.max_wavespeed(U[:, grid.interior])))
    return theta * grid.dx / max(s, 1e-8)


def initial_field(problem: SystemProblem) -> np.ndarray:
    grid = problem.grid
    U = grid.new_field(problem.model.n_components)
    if isinstance(problem.ic, RiemannIC):
        U[:, grid.interior] = problem.ic.sample(grid.centers, problem.model)
    else:
        U[:, grid.interior] = problem.model.to_conserved(problem.ic(grid.centers))
    return U


def system_run(problem: SystemProblem, snapshot_times=(), callback=None) -> SystemResult:
    """Integrate ``problem`` to its final time with ``dt = theta dx / max speed``."""
    grid = problem.grid
    model = problem.model
    U = initial_field(problem)
    model.check_admissible(U[:, grid.interior])
    fill = lambda q: apply_bc(q, problem.left, problem.right)

    def step(q, dt, k):
        try:
            new = system_step(q, grid, problem.scheme, model, dt)
        except PositivityFailure as exc:
            raise PositivityFailure(f"step {k + 1}: {exc}") from None
        check_finite(new, k + 1, grid.interior)
        model.check_admissible(new[:, grid.interior], k + 1)
        return new

    U, snaps, n_steps = march(
        U, problem.t_final, fill, lambda q: compute_dt(q, grid, problem.theta, model),
        step, snapshot_times, callback,
    )
    interior = grid.interior
    return SystemResult(
        grid.centers, U[:, interior].copy(), problem.t_final, n_steps, model,
        {t: s[:, interior].copy() for t, s in snaps.items()},
    )
