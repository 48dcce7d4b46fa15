"""Modulus special functions and distortion bounds for quasiregular maps.

``elliptic_k`` uses the arithmetic-geometric mean; ``mu`` is the modulus of
the Grötzsch ring, ``phi_k2`` the planar distortion function
``mu^{-1}(mu(r)/K)``. All of ``mu``, ``mu_inverse`` and ``phi_k2`` accept
scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import elementwise

from .bounds import Interval
from .errors import ConvergenceFailure, DomainMembership, InvalidParameter
from .geometry import as_point

HALF_PI = 0.5 * math.pi
#: ``v`` in the linear upper bound ``v (K-1) + K`` of ``c(K)``.
V_CONST = math.log(2.0 * (1.0 + math.sqrt(1.0 - math.exp(-2.0))))

_AGM_MAX_ITER = 64
# |d log r| below this gives |dr| < 1e-14 since r < 1
_U_TOL = 1e-15
# beyond this mu(r) = log(4/r) to full double precision
_ASYMPTOTIC_Y = 40.0


@dataclass(frozen=True)
class Dilatation:
    """Distortion data of a K-quasiregular map.

    ``K_I`` defaults to ``K`` and ``alpha`` to ``K_I^(1/(1-n))``; any smaller
    positive ``alpha`` is also admissible.
    """

    K: float
    K_I: float | None = None
    n: int = 2
    alpha: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.K) and self.K >= 1.0):
            raise InvalidParameter("K must be >= 1")
        k_i = self.K if self.K_I is None else float(self.K_I)
        if not (1.0 <= k_i <= self.K):
            raise InvalidParameter("K_I must lie in [1, K]")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameter("n must be an integer >= 2")
        top = k_i ** (1.0 / (1.0 - self.n))
        a = top if self.alpha is None else float(self.alpha)
        if not (0.0 < a <= top * (1.0 + 1e-15)):
            raise InvalidParameter(f"alpha must lie in (0, {top}]")
        object.__setattr__(self, "K_I", k_i)
        object.__setattr__(self, "alpha", a)


def _agm(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for _ in range(_AGM_MAX_ITER):
        if np.all(np.abs(a - b) <= 1e-15 * a):
            return 0.5 * (a + b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    raise ConvergenceFailure("AGM iteration did not converge")


def _complement(r):
    return np.sqrt((1.0 - r) * (1.0 + r))


def _scalar_out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def elliptic_k(r):
    """Complete elliptic integral of the first kind ``K(r) = pi / (2 AGM(1, r'))``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr >= 0.0) | (r_arr >= 1.0)):
        raise InvalidParameter("elliptic_k needs 0 <= r < 1")
    return _scalar_out(HALF_PI / _agm(np.ones_like(r_arr), _complement(r_arr)), r)


def mu(r):
    """``mu(r) = (pi/2) K(r') / K(r)``, decreasing from infinity to 0 on (0, 1)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0.0) | (r_arr >= 1.0)):
        raise InvalidParameter("mu needs 0 < r < 1")
    one = np.ones_like(r_arr)
    return _scalar_out(HALF_PI * _agm(one, _complement(r_arr)) / _agm(one, r_arr), r)


def _mu_inverse_large(y: np.ndarray) -> np.ndarray:
    """Inverse for ``y >= pi/2`` (so ``r <= 1/sqrt(2)``)."""
    out = 4.0 * np.exp(-y)
    todo = y <= _ASYMPTOTIC_Y
    if not np.any(todo):
        return out
    yt = y[todo]
    # log(1/r) < mu(r) < log(4/r); widened by 2 so rounding cannot flip a sign.
    # Solving in u = log r keeps the relative accuracy of tiny roots.
    lo = -yt - math.log(2.0)
    hi = np.minimum(-yt + math.log(8.0), math.log(0.75))
    res = elementwise.find_root(lambda u, target: mu(np.exp(u)) - target, (lo, hi), args=(yt,),
                                tolerances={"xatol": _U_TOL, "xrtol": 4 * np.finfo(float).eps})
    if not np.all(res.success):
        raise ConvergenceFailure("mu inversion did not converge")
    out[todo] = np.exp(res.x)
    return out


def mu_inverse(y):
    """Solve ``mu(r) = y`` for ``r`` in (0, 1)."""
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(~(y_arr > 0.0)) or not np.all(np.isfinite(y_arr)):
        raise InvalidParameter("mu_inverse needs a finite y > 0")
    small = y_arr < HALF_PI
    out = np.empty_like(y_arr)
    out[~small] = _mu_inverse_large(y_arr[~small])
    if np.any(small):
        # mu(r) mu(r') = pi^2 / 4
        out[small] = _complement(_mu_inverse_large(math.pi ** 2 / (4.0 * y_arr[small])))
    return float(out[0]) if np.ndim(y) == 0 else out.reshape(np.shape(y))


def gamma2(s):
    """Planar Grötzsch capacity ``gamma_2(s) = 2 pi / mu(1/s)`` for ``s > 1``."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(~(s_arr > 1.0)):
        raise InvalidParameter("gamma2 needs s > 1")
    return _scalar_out(2.0 * math.pi / np.asarray(mu(1.0 / s_arr)), s)


def phi_k2(K, r):
    """``phi_{K,2}(r) = mu^{-1}(mu(r) / K)``; 0 and 1 are fixed points."""
    K_arr = np.asarray(K, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(K_arr > 0.0)) or np.any(~(r_arr >= 0.0) | (r_arr > 1.0)):
        raise InvalidParameter("phi_k2 needs K > 0 and 0 <= r <= 1")
    K_b, r_b = np.broadcast_arrays(K_arr, r_arr)
    out = r_b.astype(float).copy()
    inner = (r_b > 0.0) & (r_b < 1.0)
    if np.any(inner):
        out[inner] = mu_inverse(np.asarray(mu(r_b[inner])) / K_b[inner])
    if np.ndim(K) == 0 and np.ndim(r) == 0:
        return float(out)
    return out


def c_of_k(K: float) -> tuple[float, float]:
    """``c(K) = 2 artanh(phi_{K,2}(th(1/2)))`` and its bound ``v (K-1) + K``."""
    if not (math.isfinite(K) and K >= 1.0):
        raise InvalidParameter("c(K) needs K >= 1")
    exact = 2.0 * math.atanh(phi_k2(K, math.tanh(0.5)))
    return exact, V_CONST * (K - 1.0) + K


def lambda_range(n: int) -> Interval:
    """Known range of the Grötzsch ring constant: 4 for n = 2, else ``[4, 2 e^(n-1))``."""
    if int(n) != n or n < 2:
        raise InvalidParameter("n must be an integer >= 2")
    if n == 2:
        return Interval(4.0, 4.0)
    return Interval(4.0, 2.0 * math.exp(n - 1))


def _lambda(n: int) -> float:
    """Value used in formulas: exact for n = 2, the conservative upper end otherwise."""
    return lambda_range(n).upper


class SchwarzRhoBounds(NamedTuple):
    b1_phi: float | None
    b1_power: float
    b2: float
    b3: float | None


def _as_out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def schwarz_rho_bounds(d: Dilatation, rho_xy) -> SchwarzRhoBounds:
    """Upper bounds for ``rho(f(x), f(y))`` given ``rho(x, y)`` (scalar or array).

    ``b1_phi`` and ``b3`` bound ``rho`` itself (planar only, ``None`` for
    n > 2); ``b1_power`` bounds ``th(rho(f(x), f(y)) / 2)``; ``b2`` bounds
    ``rho``.
    """
    r = np.asarray(rho_xy, dtype=float)
    if not np.all(np.isfinite(r) & (r >= 0.0)):
        raise InvalidParameter("rho must be finite and >= 0")
    th = np.tanh(0.5 * r)
    b1_power = _lambda(d.n) ** (1.0 - d.alpha) * th ** d.alpha
    b2 = d.K_I * (r + math.log(4.0))
    if d.n != 2:
        return SchwarzRhoBounds(None, _as_out(b1_power, rho_xy), _as_out(b2, rho_xy), None)
    phi = np.asarray(phi_k2(d.K, th))
    with np.errstate(divide="ignore"):
        b1_phi = np.where(phi >= 1.0, np.inf, 2.0 * np.arctanh(np.minimum(phi, 1.0)))
    b3 = c_of_k(d.K)[0] * np.maximum(r, r ** (1.0 / d.K))
    return SchwarzRhoBounds(*(_as_out(v, rho_xy) for v in (b1_phi, b1_power, b2, b3)))


class DistortionBounds(NamedTuple):
    phi_bound: float | None
    power_bound: float
    sharp_phi: float | None
    sharp_power: float | None


def dkqr_bounds(d: Dilatation, metric_value) -> DistortionBounds:
    """Upper bounds for ``d(f(x), f(y))`` with d one of j*, w, s, p on the unit ball.

    ``sharp_phi``/``sharp_power`` are the planar forms with ``alpha = 1/K``.
    Accepts a scalar or an array of metric values.
    """
    m = np.asarray(metric_value, dtype=float)
    if not np.all((m >= 0.0) & (m < 1.0)):
        raise InvalidParameter("metric value must lie in [0, 1)")
    arg = 2.0 * m / (1.0 + m * m)
    power = _lambda(d.n) ** (1.0 - d.alpha) * arg ** d.alpha
    if d.n != 2:
        return DistortionBounds(None, _as_out(power, metric_value), None, None)
    vals = (
        phi_k2(d.K, arg),
        power,
        phi_k2(2.0 * d.K, m * m),
        4.0 ** (1.0 - 1.0 / (2.0 * d.K)) * m ** (1.0 / d.K),
    )
    return DistortionBounds(*(_as_out(v, metric_value) for v in vals))


class JPBounds(NamedTuple):
    lhs_form: float | None
    argument: float
    phi_bound: float | None
    power_bound: float


def jp_argument(x, y) -> float:
    """``2p/(1+p^2)`` for the point pair function p of the unit ball, in closed form."""
    px, py = as_point(x), as_point(y)
    if px.size != py.size:
        raise InvalidParameter("points must share a dimension")
    rx, ry = float(np.linalg.norm(px)), float(np.linalg.norm(py))
    if not (rx < 1.0 and ry < 1.0):
        raise DomainMembership("points must lie in the unit ball")
    dxy = float(np.linalg.norm(px - py))
    if dxy == 0.0:
        return 0.0
    prod = (1.0 - rx) * (1.0 - ry)
    return dxy * math.sqrt(dxy * dxy + 4.0 * prod) / (dxy * dxy + 2.0 * prod)


def jp_argument_planar(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized :func:`jp_argument` for complex arrays of unit-disk points."""
    dxy = np.abs(x - y)
    prod = (1.0 - np.abs(x)) * (1.0 - np.abs(y))
    with np.errstate(invalid="ignore"):
        val = dxy * np.sqrt(dxy * dxy + 4.0 * prod) / (dxy * dxy + 2.0 * prod)
    return np.where(dxy == 0.0, 0.0, val)


def _jstar_ball(u, v) -> float:
    pu, pv = as_point(u), as_point(v)
    dist = float(np.linalg.norm(pu - pv))
    if dist == 0.0:
        return 0.0
    return dist / (dist + 2.0 - 2.0 * max(float(np.linalg.norm(pu)), float(np.linalg.norm(pv))))


def jpqr_bounds(d: Dilatation, x, y, fx=None, fy=None) -> JPBounds:
    """Bounds for ``j*(f(x), f(y))`` in terms of ``x`` and ``y``.

    With ``y = f(y) = 0`` this is the origin-fixing special case, whose
    argument is ``|x|(2-|x|)/(|x|^2-2|x|+2)``. ``lhs_form`` is ``j*`` of the
    supplied image points, if any.
    """
    arg = jp_argument(x, y)
    power = _lambda(d.n) ** (1.0 - d.alpha) * arg ** d.alpha
    phi = phi_k2(d.K, arg) if d.n == 2 else None
    lhs = _jstar_ball(fx, fy) if fx is not None and fy is not None else None
    return JPBounds(lhs, arg, phi, power)


def sector_qc_many(K: float, alpha: float, beta: float, w_value):
    """Vectorized :func:`sector_qc_bounds` returning ``(lower, upper)``."""
    if not (0.0 < alpha <= math.pi and 0.0 < beta <= math.pi):
        raise InvalidParameter("sector angles must lie in (0, pi]")
    w = np.asarray(w_value, dtype=float)
    if not np.all((w >= 0.0) & (w < 1.0)):
        raise InvalidParameter("w must lie in [0, 1)")
    c = c_of_k(K)[0]
    lower = beta * w ** K / (c ** K * math.pi * math.sin(beta / 2.0))
    upper = c * (math.pi * math.sin(alpha / 2.0) / alpha) ** (1.0 / K) * w ** (1.0 / K)
    return lower, upper


def sector_qc_bounds(K: float, alpha: float, beta: float, w_value: float) -> Interval:
    """Two-sided bound on ``w`` after a K-quasiconformal map between sectors of angles alpha, beta."""
    lower, upper = sector_qc_many(K, alpha, beta, float(w_value))
    return Interval(float(lower), float(upper))


__all__ = [
    "Dilatation",
    "DistortionBounds",
    "JPBounds",
    "SchwarzRhoBounds",
    "V_CONST",
    "c_of_k",
    "dkqr_bounds",
    "elliptic_k",
    "gamma2",
    "jp_argument",
    "jp_argument_planar",
    "jpqr_bounds",
    "lambda_range",
    "mu",
    "mu_inverse",
    "phi_k2",
    "schwarz_rho_bounds",
    "sector_qc_bounds",
    "sector_qc_many",
]
