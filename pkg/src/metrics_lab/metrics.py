"""The hyperbolic metric and six intrinsic (quasi-)metrics.

Scalar entry points take points as coordinate vectors (or complex numbers
for planar domains). Pairs in ``ball<n>``/``half<n>`` with ``n > 2`` are
first moved to the plane through ``x``, ``y`` and the origin (ball) or the
vertical plane through ``x``, ``y`` (half-space); every metric here depends
only on the position of the pair inside that plane.

The ``planar_*`` kernels and :func:`evaluate_many` are vectorized over
complex numpy arrays and are what the experiment drivers call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainMembership, InvalidParameter, NonConvexDomain
from .geometry import (
    PARAM_TOL,
    Domain,
    golden_section,
    PlaneFrame,
    minimize_on_boundary,
    planar_boundary_distance,
    planar_require,
    plane_coordinates,
)

_SCAN_CHUNK = 256
_LINE_CHUNK = 8192
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MetricKind:
    """Metric selector; ``p`` is the Barrlund exponent."""

    tag: str
    p: float | None = None

    TAGS = ("rho", "j", "jstar", "s", "p", "w", "t", "barrlund")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise InvalidParameter(f"unknown metric {self.tag!r}")
        if self.tag == "barrlund":
            if self.p is None or not (self.p >= 1.0) or not math.isfinite(self.p):
                raise InvalidParameter("Barrlund metric needs a finite exponent p >= 1")
        elif self.p is not None:
            raise InvalidParameter("only the Barrlund metric takes an exponent")

    @classmethod
    def parse(cls, text: str, p: float | None = None) -> "MetricKind":
        """Accepts ``rho j jstar s p w t barrlund b2 barrlund:<p>``."""
        t = text.strip().lower().replace("*", "star").replace("-", "")
        if t in ("b2", "barrlund2"):
            return cls("barrlund", 2.0)
        if t.startswith("barrlund"):
            rest = t[len("barrlund"):].lstrip(":")
            return cls("barrlund", float(rest) if rest else (2.0 if p is None else float(p)))
        return cls(t)

    @property
    def label(self) -> str:
        return f"barrlund:{self.p:g}" if self.tag == "barrlund" else self.tag


RHO = MetricKind("rho")
J = MetricKind("j")
JSTAR = MetricKind("jstar")
S = MetricKind("s")
P = MetricKind("p")
W = MetricKind("w")
T = MetricKind("t")
BARRLUND2 = MetricKind("barrlund", 2.0)


# ---------------------------------------------------------------------------
# vectorized planar kernels


def _zero_where_equal(x, y, values):
    return np.where(x == y, 0.0, values)


def sector_to_half_plane(theta: float, z: np.ndarray) -> np.ndarray:
    """``z -> z**(pi/theta)`` with the argument taken in ``(0, theta)``."""
    z = np.asarray(z, dtype=complex)
    k = math.pi / theta
    arg = np.mod(np.angle(z), 2.0 * math.pi)
    return np.abs(z) ** k * np.exp(1j * k * arg)


def planar_rho(domain: Domain, x, y) -> np.ndarray:
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    if domain.kind == "sector":
        return planar_rho(Domain.half_space(2), sector_to_half_plane(domain.theta, x),
                          sector_to_half_plane(domain.theta, y))
    d = np.abs(x - y)
    with np.errstate(divide="ignore", invalid="ignore"):
        if domain.kind == "ball":
            rx, ry = np.abs(x), np.abs(y)
            sh = d / np.sqrt((1 - rx) * (1 + rx) * (1 - ry) * (1 + ry))
            val = 2.0 * np.arcsinh(sh)
        else:
            val = 2.0 * np.arcsinh(d / (2.0 * np.sqrt(x.imag * y.imag)))
    return _zero_where_equal(x, y, val)


def planar_th_half_rho(domain: Domain, x, y) -> np.ndarray:
    """``th(rho/2)`` from the planar closed forms ``|x-y|/|1-x conj(y)|``, ``|x-y|/|x-conj(y)|``."""
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    if domain.kind == "sector":
        return planar_th_half_rho(Domain.half_space(2), sector_to_half_plane(domain.theta, x),
                                  sector_to_half_plane(domain.theta, y))
    with np.errstate(divide="ignore", invalid="ignore"):
        if domain.kind == "ball":
            val = np.abs(x - y) / np.abs(1.0 - x * np.conj(y))
        else:
            val = np.abs(x - y) / np.abs(x - np.conj(y))
    return _zero_where_equal(x, y, val)


def planar_j(domain, x, y):
    d = np.abs(x - y)
    m = np.minimum(planar_boundary_distance(domain, x), planar_boundary_distance(domain, y))
    return np.log1p(d / m)


def planar_jstar(domain, x, y):
    d = np.abs(x - y)
    m = np.minimum(planar_boundary_distance(domain, x), planar_boundary_distance(domain, y))
    return d / (d + 2.0 * m)


def planar_t(domain, x, y):
    d = np.abs(x - y)
    return d / (d + planar_boundary_distance(domain, x) + planar_boundary_distance(domain, y))


def planar_p(domain, x, y):
    d = np.abs(x - y)
    return d / np.sqrt(d * d + 4.0 * planar_boundary_distance(domain, x) * planar_boundary_distance(domain, y))


def _pair_infimum(domain: Domain, x: np.ndarray, y: np.ndarray, p: float) -> np.ndarray:
    """``inf_z (|x-z|^p + |z-y|^p)^(1/p)`` over the boundary, in row chunks."""
    out = np.empty(x.shape, dtype=float)
    chunk = _SCAN_CHUNK if domain.kind == "ball" else _LINE_CHUNK
    for start in range(0, x.size, chunk):
        xs = x[start:start + chunk][:, None]
        ys = y[start:start + chunk][:, None]
        m = xs.shape[0]
        if p == 1.0:
            def cost(z):
                return np.abs(xs - z) + np.abs(z - ys)
        elif p == 2.0:
            def cost(z):
                a, b = xs - z, z - ys
                return np.sqrt(a.real ** 2 + a.imag ** 2 + b.real ** 2 + b.imag ** 2)
        else:
            def cost(z):
                return (np.abs(xs - z) ** p + np.abs(z - ys) ** p) ** (1.0 / p)
        kwargs = {}
        if domain.kind == "ball":
            kwargs["seeds"] = np.hstack([np.angle(xs), np.angle(ys)])
        elif domain.kind == "half":
            kwargs["center"] = 0.5 * (xs.real + ys.real)[:, 0]
            kwargs["scale"] = np.maximum.reduce([xs.imag[:, 0], ys.imag[:, 0], np.abs(xs - ys)[:, 0]])
        else:
            kwargs["scale"] = np.maximum(np.abs(xs), np.abs(ys))[:, 0]
        val, _ = minimize_on_boundary(domain, cost, m, unimodal_lines=True, **kwargs)
        out[start:start + m] = val
    return out


def _circle_sum_infimum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``min_{|z|=1} |x-z| + |z-y|`` for points of the unit disk.

    Critical points satisfy ``(x-z)(y-z)/z^2`` real, i.e. the quartic
    ``conj(x y) z^4 - conj(x+y) z^3 + (x+y) z - x y = 0``. Its roots, pushed to
    the circle, and the directions of ``x``, ``y``, ``x+y`` are the candidates;
    each is polished by a short golden-section search in the angle.
    """
    m = x.size
    lead = np.conj(x * y)
    ok = np.abs(lead) > 1e-12
    safe = np.where(ok, lead, 1.0)
    comp = np.zeros((m, 4, 4), dtype=complex)
    comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
    comp[:, 0, 0] = np.conj(x + y) / safe
    comp[:, 0, 2] = -(x + y) / safe
    comp[:, 0, 3] = x * y / safe
    roots = np.linalg.eigvals(comp)
    ang = np.where(ok[:, None] & np.isfinite(roots) & (roots != 0), np.angle(roots), 0.0)
    extra = np.stack([np.angle(x), np.angle(y), np.angle(x + y)], axis=1)
    ang = np.hstack([ang, extra])
    xs, ys = x[:, None], y[:, None]

    def cost(t):
        z = np.exp(1j * t)
        return np.abs(xs - z) + np.abs(z - ys)

    raw = cost(ang)
    h = 1e-5
    val, _ = golden_section(cost, ang - h, ang + h, PARAM_TOL)
    return np.minimum(raw, val).min(axis=1)


def planar_s(domain: Domain, x, y) -> np.ndarray:
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    d = np.abs(x - y)
    if domain.kind == "half":
        return _zero_where_equal(x, y, d / np.abs(x - np.conj(y)))
    if domain.kind == "ball":
        out = np.empty(x.shape)
        for start in range(0, x.size, _LINE_CHUNK):
            sl = slice(start, start + _LINE_CHUNK)
            out[sl] = d[sl] / _circle_sum_infimum(x[sl], y[sl])
        return _zero_where_equal(x, y, out)
    return _zero_where_equal(x, y, d / _pair_infimum(domain, x, y, 1.0))


def planar_w(domain: Domain, x, y) -> np.ndarray:
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    if not domain.is_convex:
        raise NonConvexDomain("the w-quasi-metric needs a convex domain")
    d = np.abs(x - y)
    with np.errstate(divide="ignore", invalid="ignore"):
        if domain.kind == "ball":
            swap = np.abs(x) < np.abs(y)
            big = np.where(swap, y, x)
            small = np.where(swap, x, y)
            rb = np.abs(big)
            tilde = big * (2.0 - rb) / rb
            val = d / np.abs(small - tilde)
        elif domain.kind == "half":
            val = d / np.minimum(np.abs(x - np.conj(y)), np.abs(y - np.conj(x)))
        else:
            val = d / np.minimum(_sector_reflection_gap(domain, x, y), _sector_reflection_gap(domain, y, x))
    return _zero_where_equal(x, y, val)


def _sector_reflection_gap(domain: Domain, x, y):
    """``inf |x - y~|`` over reflections ``y~ = 2z - y`` through nearest boundary points z of y."""
    e2 = np.exp(2j * domain.theta)
    d0 = np.where(y.real >= 0, np.abs(y.imag), np.abs(y))
    w = y * np.exp(-1j * domain.theta)
    d1 = np.where(w.real >= 0, np.abs(w.imag), np.abs(y))
    dmin = np.minimum(d0, d1)
    r0 = np.where(d0 <= dmin * (1 + 1e-12), np.abs(x - np.conj(y)), np.inf)
    r1 = np.where(d1 <= dmin * (1 + 1e-12), np.abs(x - e2 * np.conj(y)), np.inf)
    return np.minimum(r0, r1)


def planar_barrlund(domain: Domain, p: float, x, y) -> np.ndarray:
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    d = np.abs(x - y)
    if p == 2.0 and domain.kind == "ball":
        rx, ry = np.abs(x), np.abs(y)
        val = d / np.sqrt(2.0 + rx * rx + ry * ry - 2.0 * np.abs(x + y))
    elif p == 2.0 and domain.kind == "half":
        val = _SQRT2 * d / np.sqrt(d * d + (x.imag + y.imag) ** 2)
    else:
        val = d / _pair_infimum(domain, x, y, float(p))
    return _zero_where_equal(x, y, val)


def planar_evaluate(kind: MetricKind, domain: Domain, x, y) -> np.ndarray:
    x, y = np.atleast_1d(np.asarray(x, complex)), np.atleast_1d(np.asarray(y, complex))
    planar_require(domain, x, y)
    tag = kind.tag
    if tag == "rho":
        return planar_rho(domain, x, y)
    if tag == "j":
        return planar_j(domain, x, y)
    if tag == "jstar":
        return planar_jstar(domain, x, y)
    if tag == "t":
        return planar_t(domain, x, y)
    if tag == "p":
        return planar_p(domain, x, y)
    if tag == "s":
        return planar_s(domain, x, y)
    if tag == "w":
        return planar_w(domain, x, y)
    return planar_barrlund(domain, kind.p, x, y)


def evaluate_many(kind: MetricKind, domain: Domain, X, Y) -> np.ndarray:
    """Vectorized :func:`evaluate`: complex arrays for planar domains, ``(m, n)`` arrays otherwise."""
    if domain.n == 2:
        return planar_evaluate(kind, domain, X, Y)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if domain.kind == "ball":
        ok = (np.linalg.norm(X, axis=1) < 1) & (np.linalg.norm(Y, axis=1) < 1)
    else:
        ok = (X[:, -1] > 0) & (Y[:, -1] > 0)
    if not np.all(ok):
        raise DomainMembership(f"point outside {domain.label}")
    zx, zy = plane_coordinates(domain, X, Y)
    return planar_evaluate(kind, Domain(domain.kind, 2), zx, zy)


# ---------------------------------------------------------------------------
# scalar API


def _planar_pair(domain: Domain, x, y) -> tuple[Domain, complex, complex]:
    px, py = domain.require(x), domain.require(y)
    if domain.n == 2:
        return domain, complex(px[0], px[1]), complex(py[0], py[1])
    frame = PlaneFrame.through(domain, px, py)
    return Domain(domain.kind, 2), frame.project(px), frame.project(py)


def _scalar(fn, domain, x, y, *args) -> float:
    d2, zx, zy = _planar_pair(domain, x, y)
    return float(fn(d2, *args, np.array([zx]), np.array([zy]))[0])


def rho(domain: Domain, x, y) -> float:
    """Hyperbolic distance, from ``sinh(rho/2)`` on both the ball and the half-space."""
    return _scalar(planar_rho, domain, x, y)


def th_half_rho(domain: Domain, x, y) -> float:
    """``th(rho/2)`` computed from its own closed form, independent of :func:`rho`."""
    return _scalar(planar_th_half_rho, domain, x, y)


def j_family(kind: MetricKind | str, domain: Domain, x, y) -> float:
    """Distance ratio metric ``j``, ``j* = th(j/2)`` or the ``t``-metric."""
    tag = kind.tag if isinstance(kind, MetricKind) else str(kind).lower().replace("*", "star")
    fns = {"j": planar_j, "jstar": planar_jstar, "t": planar_t}
    if tag not in fns:
        raise InvalidParameter(f"j_family covers j, jstar and t, not {tag!r}")
    return _scalar(fns[tag], domain, x, y)


def s_metric(domain: Domain, x, y) -> float:
    """Triangular ratio metric."""
    return _scalar(planar_s, domain, x, y)


def p_function(domain: Domain, x, y) -> float:
    return _scalar(planar_p, domain, x, y)


def w_quasi(domain: Domain, x, y) -> float:
    if not domain.is_convex:
        raise NonConvexDomain("the w-quasi-metric needs a convex domain")
    return _scalar(planar_w, domain, x, y)


def barrlund(domain: Domain, p: float, x, y) -> float:
    MetricKind("barrlund", float(p))
    return _scalar(planar_barrlund, domain, x, y, float(p))


def evaluate(kind: MetricKind | str, domain: Domain, x, y) -> float:
    if isinstance(kind, str):
        kind = MetricKind.parse(kind)
    if kind.tag == "w" and not domain.is_convex:
        raise NonConvexDomain("the w-quasi-metric needs a convex domain")
    d2, zx, zy = _planar_pair(domain, x, y)
    return float(planar_evaluate(kind, d2, zx, zy)[0])
