"""Relative error norms, observed orders and convergence tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError

NORMS = ("l1", "l2", "linf")


@dataclass(frozen=True)
class ErrorReport:
    l1: float
    l2: float
    linf: float
    n_cells: int = 0
    scheme: str = ""
    problem: str = ""

    def __getitem__(self, norm: str) -> float:
        return getattr(self, norm)


def error_norms(numeric, reference, scheme="", problem="") -> ErrorReport:
    """Relative discrete L1, L2 and max-norm errors of ``numeric``.

    ``||num - ref||_p / ||ref||_p``; the cell width cancels on a uniform grid.
    Sums use ``math.fsum`` so the result is independent of summation order.
    """
    num = np.asarray(numeric, dtype=float).ravel()
    ref = np.asarray(reference, dtype=float).ravel()
    if num.shape != ref.shape:
        raise DomainError(f"shape mismatch: {num.shape} vs {ref.shape}")
    if not np.all(np.isfinite(ref)):
        raise DomainError("reference contains non-finite values")
    err = np.abs(num - ref)
    aref = np.abs(ref)
    rmax = float(aref.max())
    if rmax == 0.0:
        raise DomainError("reference is identically zero")
    emax = float(err.max())
    if emax == 0.0:
        return ErrorReport(0.0, 0.0, 0.0, num.size, str(scheme), problem)
    # sums of each vector scaled by its own maximum cannot under- or overflow
    e, r = err / emax, aref / rmax
    ratio = emax / rmax
    l1 = ratio * (math.fsum(e) / math.fsum(r))
    l2 = ratio * math.sqrt(math.fsum(e * e) / math.fsum(r * r))
    return ErrorReport(l1, l2, ratio, num.size, str(scheme), problem)


def observed_order(e_coarse: float, e_fine: float) -> float:
    """``log(e_coarse / e_fine) / log 2`` for a mesh halving."""
    if not (e_coarse > 0.0 and e_fine > 0.0):
        raise DomainError(f"observed order needs positive errors, got {e_coarse}, {e_fine}")
    return math.log(e_coarse / e_fine) / math.log(2.0)


def check_meshes(meshes) -> tuple:
    meshes = tuple(int(n) for n in meshes)
    if len(meshes) < 2:
        raise ConfigError("a convergence study needs at least two meshes")
    for coarse, fine in zip(meshes, meshes[1:]):
        if fine != 2 * coarse:
            raise ConfigError(f"meshes must double at each refinement, got {coarse} -> {fine}")
    return meshes


@dataclass
class ConvergenceTable:
    scheme: str
    problem: str
    reports: list = field(default_factory=list)

    def __post_init__(self):
        check_meshes([r.n_cells for r in self.reports])

    @property
    def n_cells(self):
        return [r.n_cells for r in self.reports]

    def errors(self, norm: str) -> list:
        return [r[norm] for r in self.reports]

    def orders(self, norm: str) -> list:
        """Observed orders; ``None`` for the first (coarsest) row."""
        e = self.errors(norm)
        return [None] + [observed_order(a, b) for a, b in zip(e, e[1:])]

    def rows(self):
        """``(N, L1, p1, L2, p2, Linf, pinf)`` tuples."""
        cols = [self.n_cells]
        for norm in NORMS:
            cols += [self.errors(norm), self.orders(norm)]
        return list(zip(*cols))

    def format(self) -> str:
        lines = [f"{self.scheme} ({self.problem})",
                 f"{'N':>6} {'L1':>11} {'p':>6} {'L2':>11} {'p':>6} {'Linf':>11} {'p':>6}"]
        for row in self.rows():
            parts = [f"{row[0]:>6d}"]
            for e, p in zip(row[1::2], row[2::2]):
                parts.append(f"{e:11.3e} {'--' if p is None else format(p, '.2f'):>6}")
            lines.append(" ".join(parts))
        return "\n".join(lines)
