"""Conservative explicit solver for the 1D viscous/inviscid Burgers equation.

    u_t + (u^2/2)_x = nu u_xx

Face states come from the normalized-variable reconstruction of each scheme
and are combined with a Rusanov (local Lax-Friedrichs) flux; time stepping is
forward Euler.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError
from .grid import (
    BoundaryKind,
    DirichletFixed,
    Grid1D,
    Periodic,
    apply_bc,
    build_grid,
    check_boundaries,
)
from .schemes import SchemeId, reconstruct_faces
from .stepping import check_finite, march

EPS_VEL = 1e-8
DIFFUSIVE_SAFETY = 0.5


@dataclass
class BurgersProblem:
    grid: Grid1D
    scheme: SchemeId = SchemeId.ADBQUICKEST
    theta: float = 0.5
    t_final: float = 1.0
    nu: float = 0.0
    initial_condition: Callable[[np.ndarray], np.ndarray] = np.sin
    left: BoundaryKind = field(default_factory=Periodic)
    right: BoundaryKind | None = None

    def __post_init__(self):
        self.scheme = SchemeId.parse(self.scheme)
        if self.right is None:
            self.right = self.left
        check_boundaries(self.left, self.right)
        if not self.nu >= 0.0:
            raise ConfigError(f"viscosity must be >= 0, got {self.nu}")
        if not 0.0 < self.theta <= 1.0:
            raise ConfigError(f"Courant number must lie in (0, 1], got {self.theta}")
        if not self.t_final >= 0.0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final}")


@dataclass
class BurgersResult:
    x: np.ndarray
    u: np.ndarray
    t: float
    n_steps: int
    snapshots: dict = field(default_factory=dict)


def sine_wave_problem(n_cells=400, scheme=SchemeId.ADBQUICKEST, theta=0.5, t_final=1.0):
    """Inviscid ``u0 = sin(x)`` on the periodic interval ``[0, 2 pi]``."""
    return BurgersProblem(build_grid(0.0, 2.0 * np.pi, n_cells), scheme, theta, t_final, 0.0, np.sin)


def viscous_sine_problem(nu=0.1, n_cells=400, scheme=SchemeId.ADBQUICKEST, theta=0.5, t_final=0.9):
    """``u0 = -sin(pi x)`` on ``[-1, 1]`` with ``u = 0`` at both walls."""
    return BurgersProblem(
        build_grid(-1.0, 1.0, n_cells), scheme, theta, t_final, nu,
        lambda x: -np.sin(np.pi * x), DirichletFixed((0.0,)),
    )


def compute_dt(u, grid: Grid1D, theta: float, nu: float = 0.0, remaining: float | None = None) -> float:
    """Time step from the convective Courant limit and, for ``nu > 0``, the
    explicit diffusion limit ``0.5 dx^2 / (2 nu)``.  ``remaining`` clips the
    step so a run lands on its final time."""
    u = np.asarray(u)
    if u.shape[-1] == grid.n_total:
        u = u[..., grid.interior]
    dx = grid.dx
    dt = theta * dx / max(float(np.max(np.abs(u))), EPS_VEL)
    if nu > 0.0:
        dt = min(dt, DIFFUSIVE_SAFETY * dx * dx / (2.0 * nu))
    if remaining is not None:
        dt = min(dt, remaining)
    return dt


def rusanov_flux(uL, uR):
    alpha = np.maximum(np.abs(uL), np.abs(uR))
    return 0.25 * (uL * uL + uR * uR) - 0.5 * alpha * (uR - uL)


def face_courant(q, dt, dx, speed=np.abs):
    """Courant number at every face from the wave speeds of its two cells."""
    s = speed(q)
    return np.clip(np.maximum(s[1:-2], s[2:-1]) * (dt / dx), 0.0, 1.0)


def burgers_step(u: np.ndarray, grid: Grid1D, scheme, nu: float, dt: float) -> np.ndarray:
    """One forward-Euler step on the ghost-filled padded array ``u``.

    Returns a new array; its ghost cells are stale until the next fill.
    """
    lam = dt / grid.dx
    theta_f = face_courant(u, dt, grid.dx)
    uL, uR = reconstruct_faces(u, scheme, theta_f)
    flux = rusanov_flux(uL, uR)
    new = u.copy()
    new[2:-2] = u[2:-2] - lam * (flux[1:] - flux[:-1])
    if nu > 0.0:
        new[2:-2] += nu * dt / grid.dx ** 2 * (u[3:-1] - 2.0 * u[2:-2] + u[1:-3])
    return new


def advection_step(q: np.ndarray, grid: Grid1D, scheme, velocity: float, dt: float) -> np.ndarray:
    """One step of ``q_t + a q_x = 0`` with a frozen, uniform velocity ``a``."""
    theta = min(abs(velocity) * dt / grid.dx, 1.0)
    left, right = reconstruct_faces(q, scheme, theta)
    flux = velocity * (left if velocity >= 0.0 else right)
    new = q.copy()
    new[2:-2] = q[2:-2] - dt / grid.dx * (flux[1:] - flux[:-1])
    return new


def initial_field(problem: BurgersProblem) -> np.ndarray:
    grid = problem.grid
    u = np.zeros(grid.n_total)
    u[grid.interior] = problem.initial_condition(grid.centers)
    return u


def burgers_run(problem: BurgersProblem, snapshot_times=(), callback=None) -> BurgersResult:
    """Integrate ``problem`` to its final time.

    ``callback(t, n_steps, u)`` is invoked after each step with the padded
    array (ghosts stale).
    """
    grid = problem.grid
    u = initial_field(problem)
    fill = lambda q: apply_bc(q, problem.left, problem.right)

    def dt_fn(q):
        return compute_dt(q, grid, problem.theta, problem.nu)

    def step(q, dt, k):
        new = burgers_step(q, grid, problem.scheme, problem.nu, dt)
        check_finite(new, k + 1, grid.interior)
        return new

    u, snaps, n_steps = march(u, problem.t_final, fill, dt_fn, step, snapshot_times, callback)
    interior = grid.interior
    return BurgersResult(
        grid.centers, u[interior].copy(), problem.t_final, n_steps,
        {t: s[interior].copy() for t, s in snaps.items()},
    )


def total_variation(u: np.ndarray, periodic: bool = False) -> float:
    u = np.asarray(u, dtype=float)
    tv = float(np.sum(np.abs(np.diff(u))))
    if periodic:
        tv += abs(float(u[0] - u[-1]))
    return tv
