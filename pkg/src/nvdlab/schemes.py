"""Bounded upwind convection schemes in Leonard's normalized variables.

Every scheme is a map from the normalized upstream value ``phat_U`` to the
normalized face value ``phat_f``.  Outside the monotone range ``[0, 1]`` all
schemes fall back to first-order upwind (``phat_f = phat_U``).

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError

# relative tolerance for detecting a locally flat stencil
EPS_NORM = 1e-12

# normalized value reported for a degenerate stencil; any value outside
# [0, 1] works because every scheme is the identity there
DEGENERATE_SENTINEL = -1.0


class SchemeId(str, enum.Enum):
    FOU = "fou"
    WACEB = "waceb"
    CUBISTA = "cubista"
    ADBQUICKEST = "adbquickest"

    @classmethod
    def parse(cls, name: "str | SchemeId") -> "SchemeId":
        """Look a scheme up by (case-insensitive) name."""
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            known = ", ".join(s.value for s in cls)
            raise ConfigError(f"unknown scheme {name!r} (expected one of: {known})") from None

    def __str__(self) -> str:
        return self.value


HIGH_RESOLUTION = (SchemeId.WACEB, SchemeId.CUBISTA, SchemeId.ADBQUICKEST)


class NormalizedValue(NamedTuple):
    value: "float | np.ndarray"
    smooth: "bool | np.ndarray"


@dataclass(frozen=True)
class CourantContext:
    """Courant number and the derived ADBQUICKEST coefficients."""

    theta: float
    tau: float
    mu: float
    a: float
    b: float
    degenerate: bool = False


def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def _adb_coefficients(theta):
    """Return ``(tau, mu, a, b)`` for Courant numbers ``theta`` in [0, 1].

    The breakpoint formulas share a factor ``(1 - theta)`` between numerator
    and denominator; it is cancelled here so that ``a`` and ``b`` stay accurate
    as ``theta -> 1`` (identical values for ``theta`` in [0, 1)).
    """
    theta = np.asarray(theta, dtype=float)
    tau = 1.0 - np.abs(theta)
    mu = 1.0 - theta * theta
    a = (2.0 - theta) / (7.0 - 2.0 * theta)
    b = (theta + 4.0) / (2.0 * theta + 5.0)
    return tau, mu, a, b


def adb_breakpoints(theta: float) -> CourantContext:
    """Courant context for ADBQUICKEST at Courant number ``theta``.

    Raises
    ------
    DomainError
        If ``theta`` is outside ``[0, 1]``.
    """
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"Courant number theta={theta!r} outside [0, 1]")
    tau, mu, a, b = (float(v) for v in _adb_coefficients(theta))
    return CourantContext(theta, tau, mu, a, b, degenerate=theta == 1.0)


def normalize(phi_U, phi_D, phi_R) -> NormalizedValue:
    """Leonard's normalized upstream value ``(phi_U - phi_R)/(phi_D - phi_R)``.

    A stencil with ``|phi_D - phi_R| <= EPS_NORM * max(1, |phi_D|, |phi_R|)`` is
    flagged as not smooth and gets ``DEGENERATE_SENTINEL`` as its value.
    """
    phi_U = np.asarray(phi_U, dtype=float)
    phi_D = np.asarray(phi_D, dtype=float)
    phi_R = np.asarray(phi_R, dtype=float)
    denom = phi_D - phi_R
    scale = np.maximum(1.0, np.maximum(np.abs(phi_D), np.abs(phi_R)))
    smooth = np.abs(denom) > EPS_NORM * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(smooth, (phi_U - phi_R) / np.where(smooth, denom, 1.0), DEGENERATE_SENTINEL)
    return NormalizedValue(_out(value), _out(smooth))


def _waceb(p):
    return np.select(
        [(p >= 0.0) & (p < 0.3), (p >= 0.3) & (p <= 5.0 / 6.0), (p > 5.0 / 6.0) & (p <= 1.0)],
        [2.0 * p, 0.75 * p + 0.375, 1.0],
        default=p,
    )


def _cubista(p):
    return np.select(
        [(p > 0.0) & (p < 0.375), (p >= 0.375) & (p <= 0.75), (p > 0.75) & (p < 1.0)],
        [1.75 * p, 0.75 * p + 0.375, 0.25 * p + 0.75],
        default=p,
    )


def _adb_low(p, theta):
    return (2.0 - theta) * p


def _adb_mid(p, tau, mu):
    return p + 0.5 * tau * (1.0 - p) - mu * (1.0 - 2.0 * p) / 6.0


def _adb_high(p, theta):
    return 1.0 - theta + theta * p


def _adbquickest(p, theta):
    theta = np.asarray(theta, dtype=float)
    tau, mu, a, b = _adb_coefficients(theta)
    out = np.select(
        [(p > 0.0) & (p < a), (p >= a) & (p <= b), (p > b) & (p < 1.0)],
        [_adb_low(p, theta), _adb_mid(p, tau, mu), _adb_high(p, theta)],
        default=p,
    )
    return np.where(theta >= 1.0, p, out)


def face_value_normalized(scheme, phat_U, ctx=None):
    """Normalized face value ``phat_f`` for one of the schemes.

    Parameters
    ----------
    scheme : SchemeId or str
    phat_U : NormalizedValue, float or ndarray
        A ``NormalizedValue`` whose ``smooth`` flag is false yields the upwind
        value regardless of the scheme.
    ctx : CourantContext, float or ndarray, optional
        Courant number; only ADBQUICKEST uses it.
    """
    scheme = SchemeId.parse(scheme)
    if isinstance(phat_U, NormalizedValue):
        p = np.asarray(phat_U.value, dtype=float)
        smooth = np.asarray(phat_U.smooth, dtype=bool)
    else:
        p = np.asarray(phat_U, dtype=float)
        smooth = np.ones(p.shape, dtype=bool)

    if scheme is SchemeId.FOU:
        out = p
    elif scheme is SchemeId.WACEB:
        out = _waceb(p)
    elif scheme is SchemeId.CUBISTA:
        out = _cubista(p)
    else:
        if ctx is None:
            raise ConfigError("ADBQUICKEST needs a Courant number")
        theta = ctx.theta if isinstance(ctx, CourantContext) else ctx
        theta = np.asarray(theta, dtype=float)
        if np.any((theta < 0.0) | (theta > 1.0)):
            raise DomainError(f"Courant number outside [0, 1]: {theta}")
        out = _adbquickest(p, theta)
    return _out(np.where(smooth, out, p))


def denormalize(phat_f, phi_D, phi_R):
    """Map a normalized face value back to physical units."""
    phat_f = np.asarray(phat_f, dtype=float)
    return _out(phi_R + phat_f * (np.asarray(phi_D, dtype=float) - phi_R))


def _face(phi_U, phi_D, phi_R, scheme, theta):
    nv = normalize(phi_U, phi_D, phi_R)
    phat_f = face_value_normalized(scheme, nv, theta)
    # incremental form returns phi_U bit-for-bit wherever the scheme is upwind
    face = phi_U + (phat_f - nv.value) * (phi_D - phi_R)
    return np.where(nv.smooth, face, phi_U)


def reconstruct_face(values, flow_sign, scheme, theta=None):
    """Face value at ``i+1/2`` from the five cell values ``i-2 .. i+2``.

    ``flow_sign`` is ``+1`` (or ``"+"``) for flow towards increasing ``x``,
    in which case the downstream, upstream and remote-upstream cells are
    ``i+1, i, i-1``; otherwise they are ``i, i+1, i+2``.
    """
    v = np.asarray(values, dtype=float)
    if v.shape[0] != 5:
        raise ValueError("reconstruct_face needs the five values i-2..i+2")
    if flow_sign in (1, "+") or (not isinstance(flow_sign, str) and flow_sign > 0):
        D, U, R = v[3], v[2], v[1]
    else:
        D, U, R = v[2], v[3], v[4]
    return _out(_face(U, D, R, scheme, theta))


def reconstruct_faces(q, scheme, theta=None):
    """Left and right states at every face of a ghost-padded array.

    ``q`` holds ``n + 4`` values along its last axis (two ghost layers each
    side).  The ``n + 1`` faces returned run from the left boundary face to the
    right boundary face.  ``theta`` is a scalar or one value per face.

    Returns
    -------
    (left, right) : tuple of ndarray
        ``left`` is reconstructed from the stencil for positive flow,
        ``right`` from the stencil for negative flow.
    """
    q = np.asarray(q, dtype=float)
    scheme = SchemeId.parse(scheme)
    if scheme is SchemeId.FOU:
        return q[..., 1:-2].copy(), q[..., 2:-1].copy()
    left = _face(q[..., 1:-2], q[..., 2:-1], q[..., :-3], scheme, theta)
    right = _face(q[..., 2:-1], q[..., 1:-2], q[..., 3:], scheme, theta)
    return left, right
