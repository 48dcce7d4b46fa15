"""Planar Möbius maps, the disk automorphism ``T_a``, sector power maps and
the hyperbolic midpoint."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMap, DomainMembership, InvalidParameter, PoleAtInput
from .geometry import Domain, PlaneFrame, as_point, to_complex

_DET_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """``z -> (s z + t) / (u z + v)``, stored up to a common scalar.

    ``reversing`` marks the sense-reversing map obtained by conjugating the
    argument first; it only affects :meth:`apply`.
    """

    s: complex
    t: complex
    u: complex
    v: complex
    reversing: bool = False

    def __post_init__(self):
        coeffs = (self.s, self.t, self.u, self.v)
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in map(complex, coeffs)):
            raise DegenerateMap("coefficients must be finite")
        for name in ("s", "t", "u", "v"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.s * self.v - self.t * self.u) <= _DET_FLOOR:
            raise DegenerateMap("sv - tu vanishes")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.s, self.t], [self.u, self.v]], dtype=complex)

    def apply(self, z) -> complex:
        z = complex(z)
        if self.reversing:
            z = z.conjugate()
        den = self.u * z + self.v
        if abs(den) < _DET_FLOOR:
            raise PoleAtInput(f"{z} is the pole of the map")
        return (self.s * z + self.t) / den

    def apply_many(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.reversing:
            z = np.conj(z)
        den = self.u * z + self.v
        if np.any(np.abs(den) < _DET_FLOOR):
            raise PoleAtInput("an input hits the pole of the map")
        return (self.s * z + self.t) / den

    __call__ = apply

    def normalized(self) -> tuple[complex, ...]:
        """Coefficients divided by the largest-magnitude one."""
        c = (self.s, self.t, self.u, self.v)
        big = max(c, key=abs)
        return tuple(x / big for x in c)

    def equals(self, other: "MoebiusMap", tol: float = 1e-12) -> bool:
        if self.reversing != other.reversing:
            return False
        a, b = np.array(self.normalized()), np.array(other.normalized())
        return bool(np.max(np.abs(a - b)) <= tol)

    def __eq__(self, other):
        return isinstance(other, MoebiusMap) and self.equals(other, 0.0)

    def __hash__(self):
        return hash((tuple(np.round(np.array(self.normalized()), 12)), self.reversing))


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """``m1 o m2``. Sense-reversing factors are not supported here."""
    if m1.reversing or m2.reversing:
        raise InvalidParameter("composition of sense-reversing maps is not implemented")
    (s, t), (u, v) = m1.matrix @ m2.matrix
    return MoebiusMap(s, t, u, v)


def inverse(m: MoebiusMap) -> MoebiusMap:
    if m.reversing:
        raise InvalidParameter("inverse of a sense-reversing map is not implemented")
    return MoebiusMap(m.v, -m.t, -m.u, m.s)


def make_ta(a) -> MoebiusMap:
    """``T_a(z) = (z - a) / (1 - conj(a) z)``, an automorphism of the unit disk."""
    a = complex(a) if np.isscalar(a) else to_complex(a)
    if not abs(a) < 1.0:
        raise DomainMembership(f"|a| must be < 1, got {abs(a)}")
    return MoebiusMap(1, -a, -a.conjugate(), 1)


def disk_automorphism(a, phase: float = 0.0) -> MoebiusMap:
    """``e^{i phase} T_a``; every Möbius self-map of the disk has this form."""
    m = make_ta(a)
    e = complex(math.cos(phase), math.sin(phase))
    return MoebiusMap(e * m.s, e * m.t, m.u, m.v)


def sector_power_map(alpha: float, beta: float, z) -> complex:
    """``z -> z^(beta/alpha)`` from the sector of angle ``alpha`` onto the one of angle ``beta``."""
    for name, ang in (("alpha", alpha), ("beta", beta)):
        if not (0.0 < ang <= 2.0 * math.pi):
            raise InvalidParameter(f"{name} must lie in (0, 2*pi]")
    z = complex(z)
    arg = math.atan2(z.imag, z.real) % (2.0 * math.pi)
    if z == 0 or not (0.0 < arg < alpha):
        raise DomainMembership(f"{z} is not in the sector of angle {alpha}")
    k = beta / alpha
    r = abs(z) ** k
    return complex(r * math.cos(k * arg), r * math.sin(k * arg))


def sector_power_map_many(alpha: float, beta: float, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    arg = np.mod(np.angle(z), 2.0 * math.pi)
    if np.any((z == 0) | (arg <= 0.0) | (arg >= alpha)):
        raise DomainMembership(f"a point is not in the sector of angle {alpha}")
    k = beta / alpha
    return np.abs(z) ** k * np.exp(1j * k * arg)


def planar_midpoint(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized hyperbolic midpoint in the unit disk."""
    x, y = np.asarray(x, complex), np.asarray(y, complex)
    ax = (1.0 - np.abs(x)) * (1.0 + np.abs(x))
    ay = (1.0 - np.abs(y)) * (1.0 + np.abs(y))
    d = np.abs(x - y)
    bracket = np.sqrt(d * d + ax * ay)
    return (y * ax + x * ay) / (1.0 - (np.abs(x) * np.abs(y)) ** 2 + bracket * np.sqrt(ax * ay))


def hyperbolic_midpoint(x, y):
    """Point ``q`` with ``rho(x, q) = rho(q, y) = rho(x, y) / 2`` in the unit ball.

    Planar input (complex numbers) gives a complex result; coordinate
    vectors give a vector, computed in the plane through x, y and 0.
    """
    planar = isinstance(x, (complex, np.complexfloating)) and isinstance(y, (complex, np.complexfloating))
    px, py = as_point(x), as_point(y)
    if px.size != py.size:
        raise InvalidParameter("points must share a dimension")
    ball = Domain.ball(px.size)
    ball.require(px)
    ball.require(py)
    if px.size == 2:
        q = complex(planar_midpoint(np.array([complex(*px)]), np.array([complex(*py)]))[0])
        return q if planar else np.array([q.real, q.imag])
    frame = PlaneFrame.through(ball, px, py)
    q = complex(planar_midpoint(np.array([frame.project(px)]), np.array([frame.project(py)]))[0])
    return frame.embed(q)


def ball_automorphism(a, X: np.ndarray) -> np.ndarray:
    """Möbius self-map of the unit ball sending ``a`` to 0, applied to rows of ``X``.

    ``a`` is one point or one point per row. In the plane this is ``T_a``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    A = np.broadcast_to(np.atleast_2d(np.asarray(a, dtype=float)), X.shape)
    na2 = np.einsum("ij,ij->i", A, A)
    nx2 = np.einsum("ij,ij->i", X, X)
    diff = X - A
    nd2 = np.einsum("ij,ij->i", diff, diff)
    den = 1.0 - 2.0 * np.einsum("ij,ij->i", X, A) + nx2 * na2
    return ((1.0 - na2)[:, None] * diff - nd2[:, None] * A) / den[:, None]


def disk_image_radii(a, r: float) -> tuple[float, float]:
    """Minimum and maximum of ``|T_a(z)|`` over the circle ``|z| = r``."""
    a = complex(a)
    if not abs(a) < 1.0:
        raise DomainMembership(f"|a| must be < 1, got {abs(a)}")
    if not (0.0 < r < 1.0):
        raise InvalidParameter("r must lie in (0, 1)")
    m = abs(a)
    return abs(m - r) / (1.0 - m * r), (m + r) / (1.0 + m * r)


__all__ = [
    "MoebiusMap",
    "ball_automorphism",
    "compose",
    "disk_automorphism",
    "disk_image_radii",
    "hyperbolic_midpoint",
    "inverse",
    "make_ta",
    "planar_midpoint",
    "sector_power_map",
    "sector_power_map_many",
]
