"""Uniform cell-centred 1D grids with two ghost layers and boundary fills."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

N_GHOST = 2
MIN_CELLS = 5


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int
    n_ghost: int = N_GHOST

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        """Interior cell centres ``x_min + (i + 1/2) dx``."""
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def n_total(self) -> int:
        return self.n_cells + 2 * self.n_ghost

    @property
    def interior(self) -> slice:
        return slice(self.n_ghost, self.n_ghost + self.n_cells)

    def new_field(self, n_components: int = 1) -> np.ndarray:
        return np.zeros((n_components, self.n_total))


def build_grid(x_min: float, x_max: float, n_cells: int) -> Grid1D:
    """Uniform grid on ``[x_min, x_max]`` with ``n_cells`` cells."""
    if not (np.isfinite(x_min) and np.isfinite(x_max)) or not x_max > x_min:
        raise ConfigError(f"need x_max > x_min, got [{x_min}, {x_max}]")
    if int(n_cells) != n_cells or n_cells < MIN_CELLS:
        raise ConfigError(f"n_cells must be an integer >= {MIN_CELLS}, got {n_cells}")
    return Grid1D(float(x_min), float(x_max), int(n_cells))


class BoundaryKind:
    """Base class for boundary treatments."""


@dataclass(frozen=True)
class Periodic(BoundaryKind):
    def __str__(self):
        return "periodic"


@dataclass(frozen=True)
class Transmissive(BoundaryKind):
    """Zero-gradient copy of the nearest interior cell."""

    def __str__(self):
        return "transmissive"


@dataclass(frozen=True)
class DirichletFixed(BoundaryKind):
    """Prescribed wall value per component, imposed by odd reflection."""

    values: tuple = field(default=(0.0,))

    def __str__(self):
        return "dirichlet:" + ",".join(repr(float(v)) for v in self.values)


def parse_boundary(text: str) -> BoundaryKind:
    """Parse ``periodic``, ``transmissive`` or ``dirichlet:v0[,v1,...]``."""
    token = text.strip().lower()
    if token == "periodic":
        return Periodic()
    if token in ("transmissive", "outflow", "zero-gradient"):
        return Transmissive()
    if token.startswith("dirichlet"):
        _, _, rest = token.partition(":")
        try:
            values = tuple(float(v) for v in rest.split(",")) if rest else (0.0,)
        except ValueError:
            raise ConfigError(f"bad Dirichlet values in {text!r}") from None
        return DirichletFixed(values)
    raise ConfigError(f"unknown boundary kind {text!r}")


def check_boundaries(left: BoundaryKind, right: BoundaryKind) -> None:
    if isinstance(left, Periodic) != isinstance(right, Periodic):
        raise ConfigError("periodic boundaries must be applied on both ends")


def _wall_values(kind: DirichletFixed, m: int) -> np.ndarray:
    vals = np.asarray(kind.values, dtype=float)
    if vals.size == 1:
        return np.full(m, vals[0])
    if vals.size != m:
        raise ConfigError(f"Dirichlet boundary gives {vals.size} values for {m} components")
    return vals


def apply_bc(q: np.ndarray, left: BoundaryKind, right: BoundaryKind | None = None) -> np.ndarray:
    """Fill the two ghost layers of ``q`` in place and return it.

    ``q`` has shape ``(n + 4,)`` or ``(m, n + 4)``.
    """
    if right is None:
        right = left
    check_boundaries(left, right)
    g = N_GHOST
    n = q.shape[-1] - 2 * g
    comps = q if q.ndim == 2 else q[np.newaxis, :]
    m = comps.shape[0]

    if isinstance(left, Periodic):
        comps[:, :g] = comps[:, n:n + g]
        comps[:, n + g:] = comps[:, g:2 * g]
        return q

    if isinstance(left, Transmissive):
        comps[:, :g] = comps[:, g:g + 1]
    elif isinstance(left, DirichletFixed):
        wall = _wall_values(left, m)[:, None]
        # ghost g-1-k mirrors interior g+k
        comps[:, :g] = 2.0 * wall - comps[:, 2 * g - 1:g - 1:-1]
    else:
        raise ConfigError(f"unsupported boundary {left!r}")

    if isinstance(right, Transmissive):
        comps[:, n + g:] = comps[:, n + g - 1:n + g]
    elif isinstance(right, DirichletFixed):
        wall = _wall_values(right, m)[:, None]
        # ghost n+g+k mirrors interior n+g-1-k
        comps[:, n + g:] = 2.0 * wall - comps[:, n + g - 1:n - 1:-1]
    else:
        raise ConfigError(f"unsupported boundary {right!r}")
    return q
