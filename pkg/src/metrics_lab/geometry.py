"""Domains, boundary distances and the boundary-infimum routine.

Three domain families are supported: the unit ball ``ball<n>``, the upper
half-space ``half<n>`` and the open planar sector ``sector:<theta>``.
Points are real coordinate vectors; planar points may also be given as
Python complex numbers. Vectorized helpers whose names start with
``planar_`` work on complex numpy arrays and expect a two-dimensional
domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ConvergenceFailure,
    DomainMembership,
    InvalidParameter,
    NonConvexDomain,
    UnsupportedDimension,
)

TWO_PI = 2.0 * math.pi
_GOLD = (math.sqrt(5.0) - 1.0) / 2.0

#: Coarse scan size of :func:`minimize_on_boundary` per boundary segment.
N_SCAN = 4096
#: Number of best discrete local minima refined per segment.
N_BRACKETS = 3
#: Parameter tolerance of the golden-section refinement.
PARAM_TOL = 1e-14


def as_point(x, n: int | None = None) -> np.ndarray:
    """Convert ``x`` (complex, sequence or array) to a float coordinate vector."""
    if isinstance(x, (complex, np.complexfloating)):
        arr = np.array([x.real, x.imag], dtype=float)
    else:
        arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size < 2:
        raise InvalidParameter(f"a point needs at least 2 coordinates, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter("point coordinates must be finite")
    if n is not None and arr.size != n:
        raise InvalidParameter(f"expected a point in R^{n}, got {arr.size} coordinates")
    return arr


def to_complex(x) -> complex:
    p = as_point(x, 2)
    return complex(p[0], p[1])


@dataclass(frozen=True)
class Domain:
    """One of ``ball`` (unit ball), ``half`` (upper half-space) or ``sector``."""

    kind: str
    n: int = 2
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in ("ball", "half", "sector"):
            raise InvalidParameter(f"unknown domain kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameter("dimension must be an integer >= 2")
        if self.kind == "sector":
            if self.n != 2:
                raise InvalidParameter("sectors are planar (n = 2)")
            if self.theta is None or not (0.0 < self.theta < TWO_PI):
                raise InvalidParameter("sector angle must lie in (0, 2*pi)")
        elif self.theta is not None:
            raise InvalidParameter("theta only applies to sectors")

    @classmethod
    def ball(cls, n: int = 2) -> "Domain":
        return cls("ball", n)

    @classmethod
    def half_space(cls, n: int = 2) -> "Domain":
        return cls("half", n)

    @classmethod
    def sector(cls, theta: float) -> "Domain":
        return cls("sector", 2, float(theta))

    @classmethod
    def parse(cls, text: str) -> "Domain":
        """Parse ``ball<n>``, ``half<n>`` or ``sector:<theta-radians>``."""
        text = text.strip().lower()
        try:
            if text.startswith("sector:"):
                return cls.sector(float(text.split(":", 1)[1]))
            for prefix, kind in (("ball", "ball"), ("half", "half")):
                if text.startswith(prefix):
                    return cls(kind, int(text[len(prefix):]))
        except ValueError as exc:
            raise InvalidParameter(f"cannot parse domain {text!r}") from exc
        raise InvalidParameter(f"cannot parse domain {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "sector":
            return f"sector:{self.theta!r}"
        return f"{self.kind}{self.n}"

    @property
    def is_convex(self) -> bool:
        return self.kind != "sector" or self.theta <= math.pi

    def contains(self, x) -> bool:
        p = as_point(x, self.n)
        if self.kind == "ball":
            return float(np.linalg.norm(p)) < 1.0
        if self.kind == "half":
            return p[-1] > 0.0
        return bool(planar_contains(self, np.array([complex(p[0], p[1])]))[0])

    def require(self, x) -> np.ndarray:
        p = as_point(x, self.n)
        if not self.contains(p):
            raise DomainMembership(f"point {p.tolist()} is not in {self.label}")
        return p


# ---------------------------------------------------------------------------
# vectorized planar helpers


def planar_contains(domain: Domain, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if domain.kind == "ball":
        return np.abs(z) < 1.0
    if domain.kind == "half":
        return z.imag > 0.0
    arg = np.mod(np.angle(z), TWO_PI)
    return (z != 0) & (arg > 0.0) & (arg < domain.theta)


def planar_require(domain: Domain, *arrays: np.ndarray) -> None:
    if domain.n != 2:
        raise UnsupportedDimension(f"{domain.label} is not planar")
    for z in arrays:
        z = np.asarray(z)
        if not np.all(np.isfinite(z)):
            raise InvalidParameter("point coordinates must be finite")
        if not np.all(planar_contains(domain, z)):
            raise DomainMembership(f"point outside {domain.label}")


def _ray_distance(z: np.ndarray, direction: complex) -> np.ndarray:
    w = z * np.conj(direction)
    return np.where(w.real >= 0.0, np.abs(w.imag), np.abs(z))


def planar_boundary_distance(domain: Domain, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if domain.kind == "ball":
        return 1.0 - np.abs(z)
    if domain.kind == "half":
        return z.imag.copy()
    return np.minimum(
        _ray_distance(z, 1.0 + 0j), _ray_distance(z, complex(math.cos(domain.theta), math.sin(domain.theta)))
    )


def boundary_distance(domain: Domain, x) -> float:
    """Euclidean distance from ``x`` to the boundary of ``domain``."""
    p = domain.require(x)
    if domain.kind == "ball":
        return float(1.0 - np.linalg.norm(p))
    if domain.kind == "half":
        return float(p[-1])
    return float(planar_boundary_distance(domain, np.array([complex(p[0], p[1])]))[0])


def nearest_boundary_points(domain: Domain, x) -> list[np.ndarray]:
    """All boundary points at distance ``d_G(x)`` from ``x``.

    Only convex domains are supported. At the centre of the ball every
    boundary point is nearest, which cannot be enumerated.
    """
    p = domain.require(x)
    if not domain.is_convex:
        raise NonConvexDomain(f"{domain.label} is not convex")
    if domain.kind == "ball":
        r = math.hypot(*p)
        if r == 0.0:
            raise InvalidParameter("every boundary point of the ball is nearest to the origin")
        return [p / r]
    if domain.kind == "half":
        foot = p.copy()
        foot[-1] = 0.0
        return [foot]
    z = complex(p[0], p[1])
    e = complex(math.cos(domain.theta), math.sin(domain.theta))
    feet = [(z.real, abs(z.imag)), ((z * e.conjugate()).real * e, abs((z * e.conjugate()).imag))]
    d = min(f[1] for f in feet)
    out = []
    for foot, dist in feet:
        if dist <= d * (1.0 + 1e-12):
            w = complex(foot)
            out.append(np.array([w.real, w.imag]))
    return out


def ahlfors_bracket(x, y) -> float:
    """``A[x, y] = sqrt(|x-y|^2 + (1-|x|^2)(1-|y|^2))`` for points of the unit ball."""
    px, py = as_point(x), as_point(y)
    if px.size != py.size:
        raise InvalidParameter("points must share a dimension")
    ball = Domain.ball(px.size)
    ball.require(px)
    ball.require(py)
    return float(_ahlfors(np.linalg.norm(px - py), np.linalg.norm(px), np.linalg.norm(py)))


def _ahlfors(dxy, rx, ry):
    return np.sqrt(dxy * dxy + (1.0 - rx) * (1.0 + rx) * (1.0 - ry) * (1.0 + ry))


# ---------------------------------------------------------------------------
# reduction of n-dimensional pairs to a plane


@dataclass(frozen=True)
class PlaneFrame:
    """Isometric identification of a 2-plane of R^n with the complex plane."""

    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def project(self, x) -> complex:
        d = as_point(x) - self.origin
        return complex(float(d @ self.e1), float(d @ self.e2))

    def embed(self, w: complex) -> np.ndarray:
        return self.origin + w.real * self.e1 + w.imag * self.e2

    @classmethod
    def through(cls, domain: Domain, x, y) -> "PlaneFrame":
        """Plane through x, y and 0 (ball) or vertical plane through x, y (half-space)."""
        px, py = as_point(x, domain.n), as_point(y, domain.n)
        n = domain.n
        if domain.kind == "ball":
            e1 = _unit_or_none(px)
            if e1 is None:
                e1 = _unit_or_none(py)
            if e1 is None:
                e1 = np.eye(n)[0]
            e2 = _orthonormal_complement(e1, py if _unit_or_none(px) is not None else px)
            return cls(np.zeros(n), e1, e2)
        if domain.kind == "half":
            h = py[:-1] - px[:-1]
            u = _unit_or_none(h)
            if u is None:
                u = np.eye(n - 1)[0]
            e1 = np.append(u, 0.0)
            e2 = np.eye(n)[-1]
            origin = np.append(px[:-1], 0.0)
            return cls(origin, e1, e2)
        return cls(np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0]))


def _unit_or_none(v: np.ndarray):
    # divide by the largest coordinate first: subnormal norms are rounded coarsely
    big = float(np.max(np.abs(v)))
    if big == 0.0:
        return None
    v = v / big
    return v / math.hypot(*v)


def _orthonormal_complement(e1: np.ndarray, v: np.ndarray) -> np.ndarray:
    w = v - (v @ e1) * e1
    r = math.hypot(*w)
    if r > 1e-14 * math.hypot(*v) and r > 0.0:
        return _unit_or_none(w)
    # collinear: any direction orthogonal to e1
    k = int(np.argmin(np.abs(e1)))
    w = np.eye(e1.size)[k] - e1[k] * e1
    return w / math.hypot(*w)


def _row_norms(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row norms and unit rows (zero rows stay zero), safe against underflow."""
    scale = np.max(np.abs(X), axis=1)
    safe = np.where(scale > 0.0, scale, 1.0)
    Xs = X / safe[:, None]
    ns = np.sqrt(np.einsum("ij,ij->i", Xs, Xs))
    units = Xs / np.where(ns > 0.0, ns, 1.0)[:, None]
    return scale * ns, units


def plane_coordinates(domain: Domain, X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized planar coordinates of pairs ``X[i], Y[i]`` (shape ``(m, n)``)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if domain.kind == "ball":
        rx, ux = _row_norms(X)
        ry = _row_norms(Y)[0]
        along = np.einsum("ij,ij->i", Y, ux)
        across = _row_norms(Y - along[:, None] * ux)[0]
        zx = rx.astype(complex)
        zy = np.where(rx > 0, along + 1j * across, ry + 0j)
        return zx, zy
    if domain.kind == "half":
        h = _row_norms(Y[:, :-1] - X[:, :-1])[0]
        return 1j * X[:, -1], h + 1j * Y[:, -1]
    raise UnsupportedDimension("sectors are already planar")


# ---------------------------------------------------------------------------
# boundary infimum


@dataclass(frozen=True)
class _Segment:
    lo: float
    hi: float
    mode: str  # "periodic", "closed-open" or "open"
    to_point: Callable[[np.ndarray], np.ndarray]

    def grid(self, n: int) -> np.ndarray:
        i = np.arange(n, dtype=float)
        if self.mode == "open":
            return self.lo + (self.hi - self.lo) * (i + 0.5) / n
        return self.lo + (self.hi - self.lo) * i / n


def _unit_circle(t: np.ndarray) -> np.ndarray:
    if t.ndim == 1 and t.size == N_SCAN and t[0] == 0.0:
        return _CIRCLE_GRID
    return np.exp(1j * t)


_CIRCLE_GRID = np.exp(2j * math.pi * np.arange(N_SCAN) / N_SCAN)


def _segments(domain: Domain, m: int, center, scale) -> list[_Segment]:
    if domain.n != 2:
        raise UnsupportedDimension("boundary infimum is computed on planar domains")
    if domain.kind == "ball":
        return [_Segment(0.0, TWO_PI, "periodic", _unit_circle)]
    c = np.broadcast_to(np.asarray(0.0 if center is None else center, dtype=float), (m,))[:, None]
    h = np.broadcast_to(np.asarray(1.0 if scale is None else scale, dtype=float), (m,))[:, None]
    if np.any(h <= 0) or not np.all(np.isfinite(h)):
        raise InvalidParameter("scale must be positive and finite")
    if domain.kind == "half":
        # u -> c + h tan(u) compactifies the real line
        return [_Segment(-math.pi / 2, math.pi / 2, "open", lambda u: (c + h * np.tan(u)) + 0j)]
    e = complex(math.cos(domain.theta), math.sin(domain.theta))
    return [
        _Segment(0.0, math.pi / 2, "closed-open", lambda u: (h * np.tan(u)) + 0j),
        _Segment(0.0, math.pi / 2, "closed-open", lambda u: (h * np.tan(u)) * e),
    ]


def golden_section(f, a: np.ndarray, b: np.ndarray, tol: float):
    """Vectorized golden-section search on brackets ``[a, b]``."""
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    width = float(np.max(b - a)) if a.size else 0.0
    iters = 0 if width <= tol else math.ceil(math.log(width / tol) / math.log(1.0 / _GOLD))
    for _ in range(iters):
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        keep = np.where(left, c, d)
        fkeep = np.where(left, fc, fd)
        new = np.where(left, b - _GOLD * (b - a), a + _GOLD * (b - a))
        fnew = f(new)
        c = np.where(left, new, keep)
        fc = np.where(left, fnew, fkeep)
        d = np.where(left, keep, new)
        fd = np.where(left, fkeep, fnew)
    better = fc <= fd
    return np.where(better, fc, fd), np.where(better, c, d)


def minimize_on_boundary(
    domain: Domain,
    cost: Callable[[np.ndarray], np.ndarray],
    m: int,
    *,
    center=None,
    scale=None,
    seeds: np.ndarray | None = None,
    n_scan: int = N_SCAN,
    n_brackets: int = N_BRACKETS,
    tol: float = PARAM_TOL,
    unimodal_lines: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched infimum of ``cost`` over the boundary of a planar domain.

    ``cost`` maps complex boundary points of shape ``(m, k)`` to real values
    of the same shape, row ``i`` belonging to problem ``i``. Each boundary
    segment is scanned at ``n_scan`` parameter values; the ``n_brackets``
    best discrete local minima (plus a bracket of one grid step around every
    ``seeds`` parameter, ball only) are refined by golden-section search.
    Returns the infimum values and the minimizing boundary points.

    With ``unimodal_lines`` the caller promises that the cost is unimodal
    along every straight boundary piece (true for p-norms of distances,
    which are convex there); those pieces are then refined directly,
    without the scan.
    """
    segments = _segments(domain, m, center, scale)
    best_val = np.full(m, np.inf)
    best_pt = np.zeros(m, dtype=complex)
    rows = np.arange(m)[:, None]
    for seg in segments:
        if unimodal_lines and seg.mode != "periodic":
            first = seg.lo if seg.mode == "closed-open" else np.nextafter(seg.lo, seg.hi)
            lo = np.full((m, 1), first)
            hi = np.full((m, 1), np.nextafter(seg.hi, seg.lo))
            val, par = golden_section(lambda t: cost(seg.to_point(t)), lo, hi, tol)
            seg_val, seg_pt = val[:, 0], seg.to_point(par)[:, 0]
            if seg.mode == "closed-open":
                v0 = cost(seg.to_point(np.full((m, 1), seg.lo)))[:, 0]
                seg_pt = np.where(v0 <= seg_val, seg.to_point(np.full((m, 1), seg.lo))[:, 0], seg_pt)
                seg_val = np.minimum(v0, seg_val)
            take = seg_val < best_val
            best_val = np.where(take, seg_val, best_val)
            best_pt = np.where(take, seg_pt, best_pt)
            continue
        g = seg.grid(n_scan)
        step = (seg.hi - seg.lo) / n_scan
        V = np.broadcast_to(cost(seg.to_point(g)), (m, n_scan))
        if seg.mode == "periodic":
            is_min = (V <= np.roll(V, 1, axis=1)) & (V <= np.roll(V, -1, axis=1))
        else:
            pad = np.full((m, 1), np.inf)
            is_min = (V <= np.hstack([pad, V[:, :-1]])) & (V <= np.hstack([V[:, 1:], pad]))
        k = min(n_brackets, n_scan)
        masked = np.where(is_min, V, np.inf)
        idx = np.argpartition(masked, k - 1, axis=1)[:, :k] if k < n_scan else np.tile(np.arange(n_scan), (m, 1))
        usable = np.isfinite(masked[rows, idx])
        centre = g[idx]
        if seg.mode == "periodic":
            lo, hi = centre - step, centre + step
        else:
            first = seg.lo if seg.mode == "closed-open" else np.nextafter(seg.lo, seg.hi)
            lo = np.where(idx > 0, g[np.maximum(idx - 1, 0)], first)
            hi = np.where(idx < n_scan - 1, g[np.minimum(idx + 1, n_scan - 1)], np.nextafter(seg.hi, seg.lo))
        if seeds is not None and seg.mode == "periodic":
            s = np.asarray(seeds, dtype=float).reshape(m, -1)
            lo = np.hstack([lo, s - step])
            hi = np.hstack([hi, s + step])
            usable = np.hstack([usable, np.ones(s.shape, dtype=bool)])
        val, par = golden_section(lambda t: cost(seg.to_point(t)), lo, hi, tol)
        val = np.where(usable, val, np.inf)
        j = np.argmin(val, axis=1)
        rv = val[np.arange(m), j]
        rp = seg.to_point(par[np.arange(m), j][:, None])[:, 0]
        i0 = np.argmin(V, axis=1)
        sv = V[np.arange(m), i0]
        sp = seg.to_point(g[i0][:, None])[:, 0]
        seg_val = np.where(rv <= sv, rv, sv)
        seg_pt = np.where(rv <= sv, rp, sp)
        take = seg_val < best_val
        best_val = np.where(take, seg_val, best_val)
        best_pt = np.where(take, seg_pt, best_pt)
    if not np.all(np.isfinite(best_val)):
        raise ConvergenceFailure("boundary minimization produced a non-finite value")
    return best_val, best_pt


def boundary_cost_infimum(domain: Domain, cost: Callable[[np.ndarray], np.ndarray], *, center: float = 0.0,
                          scale: float = 1.0) -> tuple[float, np.ndarray]:
    """Infimum of a continuous boundary cost and a minimizing boundary point.

    ``cost`` must accept a complex numpy array of boundary points and return
    real values elementwise. ``center``/``scale`` position the compactifying
    substitution ``c + h tan(u)`` of unbounded boundaries (half-plane line,
    sector rays) near the region of interest.
    """
    if domain.n != 2:
        raise UnsupportedDimension("boundary_cost_infimum supports planar domains only")
    val, pt = minimize_on_boundary(domain, lambda z: np.asarray(cost(z), dtype=float), 1, center=center,
                                   scale=scale)
    return float(val[0]), np.array([pt[0].real, pt[0].imag])


__all__: Sequence[str] = [
    "Domain",
    "PlaneFrame",
    "ahlfors_bracket",
    "as_point",
    "boundary_cost_infimum",
    "boundary_distance",
    "minimize_on_boundary",
    "nearest_boundary_points",
    "plane_coordinates",
    "planar_boundary_distance",
    "planar_contains",
    "planar_require",
    "to_complex",
]
