"""Explicit time loop shared by the scalar and system solvers."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .errors import ConfigError, NumericalFailure


def check_finite(q: np.ndarray, step: int, interior: slice) -> None:
    bad = ~np.isfinite(q[..., interior])
    if bad.any():
        idx = np.argwhere(bad)[0]
        cell = int(idx[-1])
        comp = f", component {int(idx[0])}" if q.ndim == 2 else ""
        raise NumericalFailure(f"non-finite value at step {step}, cell {cell}{comp}")


def march(
    q: np.ndarray,
    t_final: float,
    fill_ghosts: Callable[[np.ndarray], None],
    compute_dt: Callable[[np.ndarray], float],
    step: Callable[[np.ndarray, float, int], np.ndarray],
    snapshot_times: Iterable[float] = (),
    callback: Callable[[float, int, np.ndarray], None] | None = None,
):
    """Advance ``q`` from ``t = 0`` to ``t_final``.

    Each step calls ``fill_ghosts``, picks ``dt = compute_dt(q)`` and clips it
    so the run lands exactly on every requested snapshot time and on
    ``t_final``.  ``callback(t, n_steps, q)`` runs after every step.

    Returns
    -------
    q, snapshots, n_steps
        ``snapshots`` maps each requested time to a copy of the state.
    """
    if not t_final >= 0.0:
        raise ConfigError(f"t_final must be >= 0, got {t_final}")
    targets = sorted({float(t) for t in snapshot_times})
    for t in targets:
        if t < 0.0 or t > t_final:
            raise ConfigError(f"snapshot time {t} outside [0, {t_final}]")

    snapshots = {}
    t = 0.0
    n_steps = 0
    pending = [s for s in targets]
    while pending and pending[0] == 0.0:
        fill_ghosts(q)
        snapshots[pending.pop(0)] = q.copy()

    while t < t_final:
        fill_ghosts(q)
        target = pending[0] if pending else t_final
        dt = compute_dt(q)
        if t + dt >= target:
            dt = target - t
            t_next = target
        else:
            t_next = t + dt
        q = step(q, dt, n_steps)
        n_steps += 1
        t = t_next
        if callback is not None:
            callback(t, n_steps, q)
        while pending and pending[0] <= t:
            fill_ghosts(q)
            snapshots[pending.pop(0)] = q.copy()
    fill_ghosts(q)
    return q, snapshots, n_steps
