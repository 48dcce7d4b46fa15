"""Sharp constants and distortion intervals.

Everything here is a closed-form function of radii (``r_l``, ``r_u`` for the
points, ``R_l``, ``R_u`` for their images), of the hyperbolic midpoint norm
``|q|`` and of ``t = th(rho/4)``. Scalar functions return :class:`Interval`;
the ``*_many`` variants take and return numpy arrays for the experiment
drivers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, InvalidWindow, UnsupportedCombination
from .geometry import Domain
from .metrics import MetricKind

_SQRT2 = math.sqrt(2.0)
# closing a lower > upper gap this small is rounding, not an empty interval
_PINCH = 1e-14


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidParameter("interval endpoints must be finite")
        if lo < 0.0:
            raise InvalidParameter("interval endpoints must be non-negative")
        if lo > hi:
            if lo - hi > _PINCH * max(1.0, hi):
                raise InvalidParameter(f"empty interval ({lo}, {hi})")
            hi = lo
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def __iter__(self):
        return iter((self.lower, self.upper))

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class RadiusWindow:
    """``0 <= r_l <= r_u < 1``: the range of ``|x|`` and ``|y|``."""

    r_l: float
    r_u: float

    def __post_init__(self):
        rl, ru = float(self.r_l), float(self.r_u)
        if not (0.0 <= rl <= ru < 1.0):
            raise InvalidWindow(f"need 0 <= r_l <= r_u < 1, got ({rl}, {ru})")
        object.__setattr__(self, "r_l", rl)
        object.__setattr__(self, "r_u", ru)


def jstar_threshold() -> float:
    """Real root of ``1 - 3r - r^2 - r^3`` in (0, 1), by Cardano's formula."""
    c = (48.0 * math.sqrt(33.0) + 208.0) ** (1.0 / 3.0)
    return c / 6.0 - 16.0 / (3.0 * c) - 1.0 / 3.0


JSTAR_THRESHOLD = jstar_threshold()


# ---------------------------------------------------------------------------
# constants c_low, c_up with c_low th(rho/2) <= d <= c_up th(rho/2)


def _jstar_low_unrefined(r):
    return (1.0 + r) / np.sqrt(5.0 + 2.0 * r + r * r)


def _jstar_low(r):
    r = np.asarray(r, dtype=float)
    return np.where(r < JSTAR_THRESHOLD, 0.5 * (1.0 + r * r), _jstar_low_unrefined(r))


def _p_up(r):
    return (1.0 + r * r) / (2.0 * np.sqrt(1.0 - 2.0 * r + 2.0 * r * r))


_RATIO_TAGS = ("t", "jstar", "p", "barrlund", "s", "w")


def _check_kind(kind: MetricKind | str) -> str:
    if isinstance(kind, str):
        kind = MetricKind.parse(kind)
    if kind.tag not in _RATIO_TAGS or (kind.tag == "barrlund" and kind.p != 2.0):
        raise UnsupportedCombination(f"no radius-dependent bound for {kind.label}")
    return kind.tag


def ratio_constants(kind: MetricKind | str, r_l, r_u, *, refined: bool | None = None):
    """Vectorized ``(c_low(r_l), c_up(r_u))``.

    ``refined=None`` gives the constants as stated for each metric: the j*
    lower constant is piecewise in ``r_l``, the s and w one is
    ``(1+r)/sqrt(5+2r+r^2)``. ``refined=False`` uses the latter for j* too;
    ``refined=True`` uses the piecewise constant for j*, s and w (valid since
    ``j* <= w <= s``).
    """
    tag = _check_kind(kind)
    rl = np.asarray(r_l, dtype=float)
    ru = np.asarray(r_u, dtype=float)
    if tag == "t":
        return np.full_like(rl, 0.5), 0.5 * (1.0 + ru)
    if tag == "p":
        return 0.5 * (1.0 + rl), _p_up(ru)
    if tag == "barrlund":
        return np.sqrt(0.5 * (1.0 + rl * rl)), (1.0 + ru) / _SQRT2
    piecewise = refined if refined is not None else tag == "jstar"
    low = _jstar_low(rl) if piecewise else _jstar_low_unrefined(rl)
    return low, (0.5 * (1.0 + ru) if tag == "jstar" else _p_up(ru))


def ratio_bounds_vs_half_rho(kind: MetricKind | str, window: RadiusWindow) -> Interval:
    """Best constants ``(c_low, c_up)`` with ``c_low th(rho/2) <= d <= c_up th(rho/2)``
    for all ``|x|, |y|`` in the window (unit ball)."""
    if not isinstance(window, RadiusWindow):
        window = RadiusWindow(*window)
    lo, hi = ratio_constants(kind, window.r_l, window.r_u)
    return Interval(float(lo), float(hi))


def halfspace_barrlund_bounds() -> Interval:
    """``th(rho/2) <= b_2 <= sqrt(2) th(rho/2)`` on the half-space."""
    return Interval(1.0, _SQRT2)


# ---------------------------------------------------------------------------
# conformal maps


_FIXED = {
    # (tag, from, to) -> (lower, upper); "*" matches both ball and half
    ("t", "*", "*"): (0.5, 2.0),
    ("jstar", "*", "*"): (0.5, 2.0),
    ("jstar", "half", "half"): (1.0 / _SQRT2, _SQRT2),
    ("barrlund", "half", "half"): (1.0 / _SQRT2, _SQRT2),
    ("barrlund", "half", "ball"): (0.5, _SQRT2),
    ("barrlund", "ball", "half"): (1.0 / _SQRT2, 2.0),
    ("barrlund", "ball", "ball"): (0.5, 2.0),
}
for _tag in ("w", "s", "p"):
    _FIXED[(_tag, "ball", "ball")] = (0.5, 2.0)
    _FIXED[(_tag, "half", "ball")] = (0.5, 1.0)
    _FIXED[(_tag, "ball", "half")] = (1.0, 2.0)
    # both sides equal th(rho/2), which is conformally invariant
    _FIXED[(_tag, "half", "half")] = (1.0, 1.0)


def fixed_conformal_constants(kind: MetricKind | str, source: Domain, target: Domain) -> Interval:
    """Bounds on ``d(f(x), f(y)) / d(x, y)`` for a conformal ``f`` of ``source`` onto ``target``."""
    tag = _check_kind(kind)
    for dom in (source, target):
        if dom.kind not in ("ball", "half"):
            raise UnsupportedCombination("conformal constants are known for balls and half-spaces only")
    if source.n != target.n:
        raise UnsupportedCombination("source and target must have the same dimension")
    key = (tag, source.kind, target.kind)
    lo, hi = _FIXED.get(key, _FIXED.get((tag, "*", "*"), (None, None)))
    return Interval(lo, hi)


def conformal_distortion_many(kind: MetricKind | str, r_l, r_u, R_l, R_u, *, refined: bool = False):
    """Vectorized :func:`conformal_distortion_bounds` returning ``(lower, upper)`` arrays."""
    lo_r, up_r = ratio_constants(kind, r_l, r_u, refined=refined)
    lo_R, up_R = ratio_constants(kind, R_l, R_u, refined=refined)
    return lo_R / up_r, up_R / lo_r


def conformal_distortion_bounds(kind: MetricKind | str, window: RadiusWindow, image_window: RadiusWindow,
                                *, refined: bool = False) -> Interval:
    """Bounds on ``d(f(x), f(y)) / d(x, y)`` for a conformal self-map of the unit ball,
    given ``|x|, |y|`` in ``window`` and ``|f(x)|, |f(y)|`` in ``image_window``.

    The default reproduces the closed forms with the ``(1+r)/sqrt(5+2r+r^2)``
    lower constant for j*, s and w. ``refined=True`` switches to the sharper
    ``(1+r^2)/2`` below :data:`JSTAR_THRESHOLD`.
    """
    if not isinstance(window, RadiusWindow):
        window = RadiusWindow(*window)
    if not isinstance(image_window, RadiusWindow):
        image_window = RadiusWindow(*image_window)
    lo, hi = conformal_distortion_many(kind, window.r_l, window.r_u, image_window.r_l, image_window.r_u,
                                       refined=refined)
    return Interval(float(lo), float(hi))


def ta_image_window(a, window: RadiusWindow) -> RadiusWindow:
    """Image radii for ``T_a`` from the circle-image extremes at ``r_l`` and ``r_u``."""
    m = abs(complex(a))
    if not m < 1.0:
        raise InvalidParameter("|a| must be < 1")
    return RadiusWindow(abs(m - window.r_l) / (1.0 - m * window.r_l), (m + window.r_u) / (1.0 + m * window.r_u))


# ---------------------------------------------------------------------------
# triangular ratio metric around the hyperbolic midpoint


def _check_qt(q, t, q_max_inclusive: bool):
    q = np.asarray(q, dtype=float)
    t = np.asarray(t, dtype=float)
    q_ok = (q >= 0.0) & ((q <= 1.0) if q_max_inclusive else (q < 1.0))
    if not np.all(q_ok) or not np.all((t > 0.0) & (t < 1.0)):
        raise InvalidParameter("need 0 <= |q| < 1 (or <= 1) and 0 < t < 1")
    return q, t


def hypmidrot_many(q_abs, t):
    """Vectorized bounds on ``s(x, y)`` itself from ``|q|`` and ``t``."""
    q, t = _check_qt(q_abs, t, False)
    upper = (1.0 + q) * t / (1.0 + q * t * t)
    inner = np.sqrt((q * q + t * t) / (1.0 + q * q * t * t))
    outer = t * (1.0 + q) / np.sqrt((1.0 + t * t) * (1.0 + q * q * t * t))
    return np.where(q < t * t, inner, outer), upper


def hypmidrot_bounds(q_abs: float, t: float) -> Interval:
    """Best bounds for ``s(x, y)`` given the midpoint norm ``|q|`` and ``t = th(rho(x,y)/4)``."""
    lo, hi = hypmidrot_many(q_abs, t)
    return Interval(float(lo), float(hi))


def conf_quotient_many(q_abs, t):
    """Vectorized ``(l, u)``; ``|q| = 1`` is accepted as the limit row."""
    q, t = _check_qt(q_abs, t, True)
    low = (1.0 + q * t * t) / (1.0 + q)
    inner = 2.0 * t / (1.0 + t * t) * np.sqrt((1.0 + q * q * t * t) / (q * q + t * t))
    outer = 2.0 / (1.0 + q) * np.sqrt((1.0 + q * q * t * t) / (1.0 + t * t))
    return low, np.where(q < t * t, inner, outer)


def conf_quotient_bounds(q_abs: float, t: float) -> Interval:
    """``(l, u)`` bounding ``s(f(x), f(y)) / s(x, y)`` for conformal self-maps of the unit ball."""
    lo, hi = conf_quotient_many(q_abs, t)
    return Interval(float(lo), float(hi))


def lu_branch(q_abs: float, t: float) -> str:
    return "q<t^2" if q_abs < t * t else "q>=t^2"


def conf_quotient_bounds_midpointfree(t: float) -> Interval:
    """The ``|q|``-free envelope ``((1+t^2)/2, 2/(1+t^2))``."""
    if not (0.0 < t < 1.0):
        raise InvalidParameter("need 0 < t < 1")
    return Interval(0.5 * (1.0 + t * t), 2.0 / (1.0 + t * t))


def sector_w_power_bounds(alpha: float, beta: float) -> Interval:
    """Bounds on ``w(f(x), f(y)) / w(x, y)`` for ``f(z) = z^(beta/alpha)`` between sectors."""
    if not (0.0 < alpha <= beta <= math.pi):
        raise InvalidParameter("need 0 < alpha <= beta <= pi")
    return Interval(1.0, beta * math.sin(alpha / 2.0) / (alpha * math.sin(beta / 2.0)))


__all__ = [
    "Interval",
    "JSTAR_THRESHOLD",
    "RadiusWindow",
    "conf_quotient_bounds",
    "conf_quotient_bounds_midpointfree",
    "conf_quotient_many",
    "conformal_distortion_bounds",
    "conformal_distortion_many",
    "fixed_conformal_constants",
    "halfspace_barrlund_bounds",
    "hypmidrot_bounds",
    "hypmidrot_many",
    "jstar_threshold",
    "lu_branch",
    "ratio_bounds_vs_half_rho",
    "ratio_constants",
    "sector_w_power_bounds",
    "ta_image_window",
]
