"""Reference solutions used to score the numerical schemes.

* ``bessel_jn`` -- Bessel functions of the first kind by Miller's downward
  recurrence, vectorised over order and argument.
* ``platzman_u`` -- Fourier-Bessel series for inviscid Burgers with
  ``u0 = sin(x)``, valid before and after the shock forms.
* ``burgers_characteristics`` -- pre-shock solution by solving
  ``u = u0(x - u t)``.
* ``swe_dambreak_exact`` / ``DamBreakSolution`` -- exact wet-bed Riemann
  solution of the shallow-water equations.
* ``euler_reference_first_order`` -- fine-mesh first-order Euler run, cached
  on disk.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, OracleFailure

log = logging.getLogger(__name__)

MAX_ORDER = 600
MAX_ARG = 1.0e4
_BIG = 1.0e200


def bessel_jn(n, x):
    """Bessel function of the first kind ``J_n(x)`` for integer ``n >= 0``.

    Uses downward recurrence from ``n + 40 + ceil(1.2 |x|)`` normalised by
    ``J_0 + 2 sum_k J_2k = 1``.  ``n`` and ``x`` broadcast against each other.
    """
    n_arr = np.asarray(n)
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.equal(np.mod(n_arr, 1), 0)):
        raise DomainError("Bessel order must be an integer")
    n_arr = n_arr.astype(np.int64)
    if np.any((n_arr < 0) | (n_arr > MAX_ORDER)):
        raise DomainError(f"Bessel order outside [0, {MAX_ORDER}]: {n}")
    if np.any(~np.isfinite(x_arr)) or np.any(np.abs(x_arr) > MAX_ARG):
        raise DomainError(f"Bessel argument outside [-{MAX_ARG:g}, {MAX_ARG:g}]")
    n_b, x_b = np.broadcast_arrays(n_arr, x_arr)
    shape = n_b.shape
    n_f = n_b.ravel()
    x_f = x_b.ravel()
    ax = np.abs(x_f)

    out = np.where(n_f == 0, 1.0, 0.0)
    live = ax > 0.0
    if np.any(live):
        nn = n_f[live]
        xx = ax[live]
        start = nn + 40 + np.ceil(1.2 * xx).astype(np.int64)
        start += start % 2  # even start keeps the normalisation sum aligned
        top = int(start.max())
        j_next = np.zeros_like(xx)        # J_{k+1}
        j_cur = np.where(start == top, 1e-30, 0.0)  # J_k
        result = np.zeros_like(xx)
        norm = np.zeros_like(xx)
        two_over_x = 2.0 / xx
        for k in range(top, 0, -1):
            if k % 2 == 0:
                norm += j_cur
            result = np.where(nn == k, j_cur, result)
            j_prev = k * two_over_x * j_cur - j_next
            j_next, j_cur = j_cur, j_prev
            # rows whose start lies below top begin their recurrence here
            j_cur = np.where(start == k - 1, 1e-30, j_cur)
            j_next = np.where(start == k - 1, 0.0, j_next)
            big = np.abs(j_cur) > _BIG
            if np.any(big):
                scale = np.where(big, 1.0 / _BIG, 1.0)
                j_cur *= scale
                j_next *= scale
                result *= scale
                norm *= scale
        # k = 0
        result = np.where(nn == 0, j_cur, result)
        norm = 2.0 * norm + j_cur
        out[live] = result / norm
    neg = (x_f < 0.0) & (n_f % 2 == 1)
    out[neg] = -out[neg]
    out = out.reshape(shape)
    return out.item() if out.ndim == 0 else out


@lru_cache(maxsize=64)
def _platzman_coefficients(t: float, n_terms: int) -> np.ndarray:
    n = np.arange(1, n_terms + 1)
    return -2.0 * bessel_jn(n, -n * t) / (n * t)


def platzman_u(x, t: float, n_terms: int = 500):
    """Series solution of ``u_t + u u_x = 0`` with ``u(x, 0) = sin(x)``.

    ``u = -2 sum_{n>=1} J_n(-n t) / (n t) sin(n x)`` truncated after
    ``n_terms`` terms; ``t = 0`` returns ``sin(x)``.
    """
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return np.sin(x)
    if t < 0.0:
        raise DomainError(f"series solution needs t >= 0, got {t}")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    coef = _platzman_coefficients(float(t), int(n_terms))
    n = np.arange(1, n_terms + 1)
    u = np.sin(np.multiply.outer(x, n)) @ coef
    return u.item() if np.ndim(u) == 0 else u


def burgers_characteristics(
    x, t: float, u0=np.sin, du0=np.cos, u_bounds=(-1.0, 1.0), t_shock: float = 1.0,
    tol: float = 1e-13, max_iter: int = 200,
):
    """Pre-shock inviscid Burgers solution from ``u = u0(x - u t)``.

    Solved per point by Newton's method kept inside a bisection bracket
    ``u_bounds`` (the range of ``u0``).  The defaults describe ``u0 = sin``.

    Raises
    ------
    OracleFailure
        If ``t >= t_shock`` or the iteration does not reach ``tol``.
    """
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return u0(x)
    if t < 0.0:
        raise DomainError(f"need t >= 0, got {t}")
    if t >= t_shock:
        raise OracleFailure(f"t={t} is at or past the shock time {t_shock}")

    lo = np.full(x.shape, float(u_bounds[0]))
    hi = np.full(x.shape, float(u_bounds[1]))
    u = u0(x)
    for _ in range(max_iter):
        s = x - u * t
        g = u - u0(s)
        # g is increasing in u before the shock, so the sign picks the bracket side
        lo = np.where(g < 0.0, u, lo)
        hi = np.where(g > 0.0, u, hi)
        if np.all(np.abs(g) <= tol):
            break
        dg = 1.0 + t * du0(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = u - g / dg
        inside = (newton > lo) & (newton < hi) & np.isfinite(newton)
        u = np.where(np.abs(g) <= tol, u, np.where(inside, newton, 0.5 * (lo + hi)))
    resid = np.abs(u - u0(x - u * t))
    if np.any(resid > tol):
        raise OracleFailure(f"characteristics did not converge (max residual {resid.max():.3e})")
    return u.item() if u.ndim == 0 else u


# shallow-water dam break ------------------------------------------------------

def _swe_wave(h, hK, g):
    """Toro's depth function for one wave and its derivative."""
    cK = math.sqrt(g * hK)
    if h <= hK:
        return 2.0 * (math.sqrt(g * h) - cK), math.sqrt(g / h)
    gk = math.sqrt(0.5 * g * (h + hK) / (h * hK))
    f = (h - hK) * gk
    df = gk - g * (h - hK) / (4.0 * h * h * gk)
    return f, df


@dataclass(frozen=True)
class DamBreakSolution:
    """Exact solution of the wet-bed shallow-water Riemann problem.

    Evaluate with ``sample(xi)`` where ``xi = (x - x0) / t``.
    """

    hL: float
    hR: float
    g: float
    uL: float
    uR: float
    h_star: float
    u_star: float

    @property
    def cL(self):
        return math.sqrt(self.g * self.hL)

    @property
    def cR(self):
        return math.sqrt(self.g * self.hR)

    @property
    def c_star(self):
        return math.sqrt(self.g * self.h_star)

    @property
    def left_is_shock(self):
        return self.h_star > self.hL

    @property
    def right_is_shock(self):
        return self.h_star > self.hR

    def shock_speed_left(self):
        q = math.sqrt(0.5 * (self.h_star + self.hL) * self.h_star / self.hL ** 2)
        return self.uL - q * self.cL

    def shock_speed_right(self):
        q = math.sqrt(0.5 * (self.h_star + self.hR) * self.h_star / self.hR ** 2)
        return self.uR + q * self.cR

    def wave_speeds(self):
        """``(left head, left tail, right tail, right head)``; a shock has
        head == tail."""
        if self.left_is_shock:
            sl = self.shock_speed_left()
            left = (sl, sl)
        else:
            left = (self.uL - self.cL, self.u_star - self.c_star)
        if self.right_is_shock:
            sr = self.shock_speed_right()
            right = (sr, sr)
        else:
            right = (self.u_star + self.c_star, self.uR + self.cR)
        return left[0], left[1], right[0], right[1]

    def sample(self, xi):
        """Depth and velocity at similarity coordinates ``xi``."""
        xi = np.asarray(xi, dtype=float)
        g = self.g
        l_head, l_tail, r_tail, r_head = self.wave_speeds()
        h = np.empty_like(xi)
        u = np.empty_like(xi)

        left = xi < l_head
        h[left], u[left] = self.hL, self.uL
        fan_l = (xi >= l_head) & (xi < l_tail)
        c = (self.uL + 2.0 * self.cL - xi[fan_l]) / 3.0
        h[fan_l], u[fan_l] = c * c / g, (self.uL + 2.0 * self.cL + 2.0 * xi[fan_l]) / 3.0
        star = (xi >= l_tail) & (xi <= r_tail)
        h[star], u[star] = self.h_star, self.u_star
        fan_r = (xi > r_tail) & (xi <= r_head)
        c = (-self.uR + 2.0 * self.cR + xi[fan_r]) / 3.0
        h[fan_r], u[fan_r] = c * c / g, (self.uR - 2.0 * self.cR + 2.0 * xi[fan_r]) / 3.0
        right = xi > r_head
        h[right], u[right] = self.hR, self.uR
        return h, u

    def rankine_hugoniot_residuals(self):
        """Relative mass and momentum jump residuals for each shock wave."""
        g = self.g
        out = {}
        for side, shock, hK, uK, speed in (
            ("left", self.left_is_shock, self.hL, self.uL, self.shock_speed_left),
            ("right", self.right_is_shock, self.hR, self.uR, self.shock_speed_right),
        ):
            if not shock:
                continue
            s = speed()
            hs, us = self.h_star, self.u_star
            mass = s * (hs - hK) - (hs * us - hK * uK)
            mom = s * (hs * us - hK * uK) - (hs * us * us + 0.5 * g * hs * hs - hK * uK * uK - 0.5 * g * hK * hK)
            scale_m = max(abs(hs * us), abs(s * hs), 1e-300)
            scale_p = max(0.5 * g * hs * hs, abs(s * hs * us), 1e-300)
            out[side] = (abs(mass) / scale_m, abs(mom) / scale_p)
        return out


def solve_dambreak(hL: float, hR: float, g: float = 9.81, uL: float = 0.0, uR: float = 0.0,
                   tol: float = 1e-12, max_iter: int = 200) -> DamBreakSolution:
    """Star state of the wet-bed shallow-water Riemann problem.

    The depth function ``f_L(h) + f_R(h) + uR - uL`` is increasing in ``h``;
    its root is found by Newton steps kept inside a bisection bracket.
    """
    if not (hL > 0.0 and hR > 0.0):
        raise DomainError(f"dam break needs positive depths, got hL={hL}, hR={hR}")
    if not g > 0.0:
        raise DomainError(f"gravity must be positive, got {g}")
    du = uR - uL
    cL, cR = math.sqrt(g * hL), math.sqrt(g * hR)
    if 2.0 * (cL + cR) <= du:
        raise OracleFailure("data generate a dry bed; wet-bed solver does not apply")

    def f(h):
        fl, dl = _swe_wave(h, hL, g)
        fr, dr = _swe_wave(h, hR, g)
        return fl + fr + du, dl + dr

    if hL == hR and du == 0.0:
        return DamBreakSolution(hL, hR, g, uL, uR, hL, uL)

    lo = 0.0
    hi = max(hL, hR)
    while f(hi)[0] < 0.0:
        lo, hi = hi, 2.0 * hi
    # two-rarefaction estimate as a starting guess
    h = ((0.5 * (cL + cR) - 0.25 * du) ** 2) / g
    if not lo < h < hi:
        h = 0.5 * (lo + hi)
    for _ in range(max_iter):
        val, der = f(h)
        if val > 0.0:
            hi = h
        else:
            lo = h
        new = h - val / der
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - h) <= tol * max(new, 1.0):
            h = new
            break
        h = new
    else:
        raise OracleFailure("star depth iteration did not converge")
    u_star = 0.5 * (uL + uR) + 0.5 * (_swe_wave(h, hR, g)[0] - _swe_wave(h, hL, g)[0])
    return DamBreakSolution(hL, hR, g, uL, uR, h, u_star)


def swe_dambreak_exact(hL: float, hR: float, g: float, xi):
    """``(h, u)`` of the still-water dam break at ``xi = x / t``."""
    return solve_dambreak(hL, hR, g).sample(xi)


# fine-mesh first-order Euler reference -------------------------------------

CACHE_ENV = "NVDLAB_CACHE_DIR"


def cache_dir(path=None) -> Path:
    if path is None:
        path = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "nvdlab"
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _atomic_save(path: Path, **arrays) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, **arrays)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def euler_reference_first_order(problem, n_cells: int = 25000, cache=None, use_cache: bool = True):
    """First-order (FOU) run of an Euler problem on a fine mesh.

    The run is keyed by a hash of its configuration and stored as ``.npz``
    under ``cache`` (default: ``$NVDLAB_CACHE_DIR`` or ``~/.cache/nvdlab``).

    Returns
    -------
    SystemResult
    """
    from .systems import SchemeId, SystemResult, system_run

    fine = problem.with_changes(n_cells=n_cells, scheme=SchemeId.FOU)
    key = hashlib.sha256(json.dumps(fine.fingerprint(), sort_keys=True).encode()).hexdigest()[:24]
    path = None
    if use_cache:
        path = cache_dir(cache) / f"euler-fou-{key}.npz"
        if path.exists():
            with np.load(path) as data:
                log.info("loaded cached reference %s", path)
                return SystemResult(data["x"], data["U"], float(data["t"]), int(data["n_steps"]), fine.model)
    result = system_run(fine)
    if path is not None:
        _atomic_save(path, x=result.x, U=result.U, t=result.t, n_steps=result.n_steps)
        log.info("wrote reference %s", path)
    return result
