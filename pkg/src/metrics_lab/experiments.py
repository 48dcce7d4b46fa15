"""Seeded experiments: bound-method comparison, supremum estimates,
inequality fuzzing and the ``l``/``u`` grid.

Random numbers come from counter-based Philox streams. Trial ``i`` of a
stream keyed by ``(seed, stream)`` always reads the same 128 doubles, so
results do not depend on how trials are split into chunks or threads.
Chunks run on a thread pool sized by ``METRICS_LAB_THREADS`` (0 or unset:
one per CPU); every reduction is an integer sum or a max with a fixed
tie-break, hence bit-identical for any thread count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bounds as bd
from .errors import InvalidParameter
from .geometry import Domain, plane_coordinates
from .metrics import (
    MetricKind,
    planar_barrlund,
    planar_jstar,
    planar_p,
    planar_rho,
    planar_s,
    planar_t,
    planar_th_half_rho,
    planar_w,
)
from .moebius import ball_automorphism, planar_midpoint, sector_power_map_many
from .schwarz import Dilatation, dkqr_bounds, jp_argument_planar, phi_k2, schwarz_rho_bounds, sector_qc_many

THREADS_ENV = "METRICS_LAB_THREADS"
DOUBLES_PER_TRIAL = 128
CHUNK_TRIALS = 1 << 14
SLACK = 1e-9

# stream ids, one per experiment
_STREAM_COMPARE = 1
_STREAM_SUP = 2
_STREAM_FUZZ = 3
_STREAM_SCHWARZ = 4

SUP_KINDS = ("t", "jstar", "w", "s", "p", "barrlund:2")
_U64 = 1 << 64


# ---------------------------------------------------------------------------
# plumbing


def worker_count(threads: int | None = None) -> int:
    if threads is None:
        try:
            threads = int(os.environ.get(THREADS_ENV, "0") or 0)
        except ValueError as exc:
            raise InvalidParameter(f"{THREADS_ENV} must be an integer") from exc
    if threads < 0:
        raise InvalidParameter("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def _check_seed(seed: int) -> int:
    if int(seed) != seed or not (0 <= seed < _U64):
        raise InvalidParameter("seed must be an unsigned 64-bit integer")
    return int(seed)


def _check_trials(trials: int) -> int:
    if int(trials) != trials or trials < 1:
        raise InvalidParameter("trials must be a positive integer")
    return int(trials)


def trial_uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles in [0, 1) for trials ``start .. start+count-1``, shape ``(count, 128)``."""
    bitgen = np.random.Philox(key=_check_seed(seed) + (stream << 64))
    # one Philox block yields four 64-bit words, i.e. four doubles
    bitgen.advance(start * (DOUBLES_PER_TRIAL // 4))
    return np.random.Generator(bitgen).random((count, DOUBLES_PER_TRIAL))


def _run_chunks(fn: Callable[[int, int], object], trials: int, threads: int | None) -> list:
    spans = [(s, min(CHUNK_TRIALS, trials - s)) for s in range(0, trials, CHUNK_TRIALS)]
    workers = min(worker_count(threads), len(spans))
    if workers <= 1:
        return [fn(s, c) for s, c in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda sc: fn(*sc), spans))


def sample_unit_disk(rng: np.random.Generator) -> complex:
    """Uniform point of the open unit disk by rejection from the square [-1, 1]^2."""
    while True:
        u, v = 2.0 * rng.random(2) - 1.0
        if u * u + v * v < 1.0:
            return complex(u, v)


def _fallback_points(seed: int, stream: int, trial: int, k: int, n: int) -> np.ndarray:
    rng = np.random.default_rng([seed, stream, trial, 1])
    pts: list[np.ndarray] = []
    while len(pts) < k:
        p = 2.0 * rng.random(n) - 1.0
        if p @ p < 1.0 and not any(np.array_equal(p, q) for q in pts):
            pts.append(p)
    return np.array(pts)


def ball_points(U: np.ndarray, k: int, n: int, seed: int, stream: int, start: int,
                width: int = DOUBLES_PER_TRIAL) -> np.ndarray:
    """First ``k`` accepted cube samples per trial, shape ``(trials, k, n)``.

    The first ``width`` doubles of every trial are read as consecutive
    candidates of ``n`` coordinates each; a candidate is accepted if it lies
    in the open unit ball and differs from the previously accepted one. The
    rare trial without ``k`` acceptances falls back to a generator keyed by
    ``(seed, stream, trial)``.
    """
    m = U.shape[0]
    per = width // n
    C = 2.0 * U[:, : per * n].reshape(m, per, n) - 1.0
    ok = np.einsum("ijk,ijk->ij", C, C) < 1.0
    # successive duplicates would make a degenerate pair
    dup = np.zeros_like(ok)
    dup[:, 1:] = np.all(C[:, 1:] == C[:, :-1], axis=2)
    ok &= ~dup
    cum = np.cumsum(ok, axis=1)
    out = np.empty((m, k, n))
    rows = np.arange(m)
    for j in range(k):
        idx = np.argmax(cum >= j + 1, axis=1)
        out[:, j] = C[rows, idx]
    for i in np.nonzero(cum[:, -1] < k)[0]:
        out[i] = _fallback_points(seed, stream, start + int(i), k, n)
    return out


def disk_points(U: np.ndarray, k: int, seed: int, stream: int, start: int,
                width: int = DOUBLES_PER_TRIAL) -> np.ndarray:
    P = ball_points(U, k, 2, seed, stream, start, width)
    return P[..., 0] + 1j * P[..., 1]


def _interior(u: np.ndarray) -> np.ndarray:
    """Map [0, 1) doubles to the open interval (0, 1)."""
    return (np.floor(u * 2.0 ** 52) + 0.5) / 2.0 ** 52


def _ta(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    return (z - a) / (1.0 - np.conj(a) * z)


def _th_quarter_rho(th_half: np.ndarray) -> np.ndarray:
    """``th(rho/4)`` from ``th(rho/2)`` without cancellation."""
    return th_half / (1.0 + np.sqrt((1.0 - th_half) * (1.0 + th_half)))


# ---------------------------------------------------------------------------
# bound-method comparison


@dataclass(frozen=True)
class RunConfig:
    """What an experiment run needs; identical configs give identical output."""

    experiment: str
    seed: int = 0
    trials: int = 1
    params: dict = field(default_factory=dict)
    fmt: str = "json"
    output: str | None = None

    def __post_init__(self):
        _check_seed(self.seed)
        _check_trials(self.trials)
        if self.fmt not in ("json", "csv"):
            raise InvalidParameter("format must be json or csv")


@dataclass(frozen=True)
class ComparisonSummary:
    total: int
    both_better: int
    lower_better: int
    upper_better: int
    seed: int

    @property
    def fraction(self) -> float:
        return self.both_better / self.total

    def as_dict(self) -> dict:
        d = asdict(self)
        d["fraction"] = self.fraction
        return d


def compare_triples(a: np.ndarray, x: np.ndarray, y: np.ndarray):
    """Both bound pairs for ``s(T_a x, T_a y) / s(x, y)`` on arrays of triples.

    ``x`` and ``y`` are swapped where needed so that ``|x| <= |y|``. Returns
    ``(radius_lower, radius_upper, midpoint_lower, midpoint_upper)``.
    """
    swap = np.abs(x) > np.abs(y)
    x, y = np.where(swap, y, x), np.where(swap, x, y)
    r_l, r_u = np.abs(x), np.abs(y)
    m = np.abs(a)
    R_l = np.abs(m - r_l) / (1.0 - m * r_l)
    R_u = (m + r_u) / (1.0 + m * r_u)
    lo_a, hi_a = bd.conformal_distortion_many("s", r_l, r_u, R_l, R_u)
    q = np.abs(planar_midpoint(x, y))
    t = _th_quarter_rho(planar_th_half_rho(Domain.ball(2), x, y))
    lo_b, hi_b = bd.conf_quotient_many(q, t)
    return lo_a, hi_a, lo_b, hi_b


def compare_bound_methods(trials: int, seed: int, threads: int | None = None) -> ComparisonSummary:
    """Count trials where the midpoint bounds beat the radius bounds at both ends.

    Each trial draws ``a``, then two more disk points named so that
    ``|x| <= |y|``; all three are uniform on the disk.
    """
    trials, seed = _check_trials(trials), _check_seed(seed)

    def chunk(start: int, count: int):
        U = trial_uniforms(seed, _STREAM_COMPARE, start, count)
        P = disk_points(U, 3, seed, _STREAM_COMPARE, start)
        lo_a, hi_a, lo_b, hi_b = compare_triples(P[:, 0], P[:, 1], P[:, 2])
        lower = lo_b > lo_a
        upper = hi_b < hi_a
        return int(np.sum(lower & upper)), int(np.sum(lower)), int(np.sum(upper))

    parts = _run_chunks(chunk, trials, threads)
    both, low, up = (sum(p[i] for p in parts) for i in range(3))
    return ComparisonSummary(trials, both, low, up, seed)


def example_boundcomp(a: complex = 0.7, x: complex = 0.1 + 0.3j, y: complex = 0.3 + 0.5j) -> dict:
    """The measured ``s`` quotient under ``T_a`` next to the radius and midpoint bounds."""
    lo_a, hi_a, lo_b, hi_b = (float(v[0]) for v in compare_triples(np.array([a]), np.array([x]), np.array([y])))
    ball = Domain.ball(2)
    xs, ys = np.array([x]), np.array([y])
    quotient = float(planar_s(ball, _ta(a, xs), _ta(a, ys))[0] / planar_s(ball, xs, ys)[0])
    return {"quotient": quotient, "radius_lower": lo_a, "radius_upper": hi_a,
            "midpoint_lower": lo_b, "midpoint_upper": hi_b}


_PROBE_FLOOR = 1e-6


def directed_ratio_extremes(kind: MetricKind | str, r_l: float, r_u: float, n_angles: int = 4001):
    """Smallest and largest ``d / th(rho/2)`` found on the extremal pair families.

    The pairs are ``x = r e^{i phi/2}``, ``y = r e^{-i phi/2}`` with ``r`` at
    either end of the window and ``phi`` from near 0 (``x -> y``) up to pi
    (``x = -y``), plus the radial pair ``(r_l, r_u)``. The angle grid is
    polished with a bounded scalar minimizer around the best grid points.
    """
    from scipy.optimize import minimize_scalar

    kind = MetricKind.parse(kind) if isinstance(kind, str) else kind
    metric = _planar_metric(kind)
    ball = Domain.ball(2)
    window = bd.RadiusWindow(r_l, r_u)

    def ratio(r, phi):
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        x, y = r * np.exp(0.5j * phi), r * np.exp(-0.5j * phi)
        return metric(x, y) / planar_th_half_rho(ball, x, y)

    phis = np.unique(np.concatenate([np.geomspace(1e-7, 1e-2, 200), np.linspace(1e-2, math.pi, n_angles)]))
    lo, hi = math.inf, -math.inf
    for r in {max(window.r_l, _PROBE_FLOOR), max(window.r_u, _PROBE_FLOOR)}:
        vals = ratio(r, phis)
        for sign in (1.0, -1.0):
            i = int(np.argmin(sign * vals))
            a, b = phis[max(i - 1, 0)], phis[min(i + 1, phis.size - 1)]
            res = minimize_scalar(lambda t: sign * float(ratio(r, t)[0]), bounds=(a, b), method="bounded",
                                  options={"xatol": 1e-12})
            best = min(sign * vals[i], res.fun) * sign
            lo, hi = (min(lo, best), hi) if sign > 0 else (lo, max(hi, best))
    if window.r_u > window.r_l:
        x, y = np.array([complex(max(window.r_l, _PROBE_FLOOR))]), np.array([complex(window.r_u)])
        v = float((metric(x, y) / planar_th_half_rho(ball, x, y))[0])
        lo, hi = min(lo, v), max(hi, v)
    return lo, hi


# ---------------------------------------------------------------------------
# supremum of the distortion under T_a


def _planar_metric(kind: MetricKind) -> Callable:
    ball = Domain.ball(2)
    fns = {"t": planar_t, "jstar": planar_jstar, "w": planar_w, "s": planar_s, "p": planar_p}
    if kind.tag in fns:
        return lambda x, y: fns[kind.tag](ball, x, y)
    if kind.tag == "barrlund":
        return lambda x, y: planar_barrlund(ball, kind.p, x, y)
    raise InvalidParameter(f"no distortion estimate for {kind.label}")


PROBE_RADII = (1e-2, 1e-3, 1e-4)


def sup_distortion_estimate(a, kind: MetricKind | str, trials: int, seed: int, threads: int | None = None) -> float:
    """Estimate ``sup d(T_a x, T_a y) / d(x, y)`` over pairs of the unit disk.

    Random uniform pairs are combined with the symmetric probe
    ``x = k e^{i arg a}, y = -x`` for small ``k``, where the quotient tends
    to ``1 + |a|``. The estimate is a running maximum, so it never decreases
    when more trials are added.
    """
    a = complex(a)
    if not abs(a) < 1.0:
        raise InvalidParameter("|a| must be < 1")
    kind = MetricKind.parse(kind) if isinstance(kind, str) else kind
    metric = _planar_metric(kind)
    trials, seed = _check_trials(trials), _check_seed(seed)

    def quotient(x, y):
        with np.errstate(invalid="ignore", divide="ignore"):
            q = metric(_ta(a, x), _ta(a, y)) / metric(x, y)
        return np.where(x == y, -np.inf, q)

    direction = a / abs(a) if a != 0 else 1.0 + 0j
    x = np.array(PROBE_RADII) * direction
    best = float(np.max(quotient(x, -x)))

    def chunk(start: int, count: int):
        U = trial_uniforms(seed, _STREAM_SUP, start, count)
        P = disk_points(U, 2, seed, _STREAM_SUP, start)
        return float(np.max(quotient(P[:, 0], P[:, 1])))

    return max([best] + _run_chunks(chunk, trials, threads))


# ---------------------------------------------------------------------------
# inequality fuzzing


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    violations: int = 0
    max_excess: float = -math.inf
    worst: dict | None = None

    def merge(self, other: "CheckResult") -> None:
        self.checked += other.checked
        self.violations += other.violations
        if other.max_excess > self.max_excess:
            self.max_excess, self.worst = other.max_excess, other.worst

    def as_dict(self) -> dict:
        return {"checked": self.checked, "violations": self.violations, "max_excess": self.max_excess,
                "worst": self.worst}


@dataclass
class FuzzReport:
    """Per-check counts; ``max_excess`` is the largest ``max(lower - v, v - upper)``.

    A negative ``max_excess`` is the smallest margin seen. Equality checks
    have ``lower == upper``, so their ``max_excess`` is the largest deviation.
    """

    domain: str
    trials: int
    seed: int
    checks: dict[str, CheckResult]

    @property
    def total_violations(self) -> int:
        return sum(c.violations for c in self.checks.values())

    def as_dict(self) -> dict:
        return {"domain": self.domain, "total_violations": self.total_violations,
                "checks": {k: v.as_dict() for k, v in self.checks.items()}}


class _Checker:
    def __init__(self, start: int, points: dict[str, np.ndarray], perturb: dict[str, float] | None):
        self.start = start
        self.points = points
        self.perturb = perturb or {}
        self.results: dict[str, CheckResult] = {}

    def __call__(self, name: str, value, lower=None, upper=None, mask=None) -> None:
        value = np.asarray(value, dtype=float)
        f = self.perturb.get(name, 1.0)
        lo = np.full(value.shape, -np.inf) if lower is None else np.broadcast_to(np.asarray(lower, float), value.shape) / f
        hi = np.full(value.shape, np.inf) if upper is None else np.broadcast_to(np.asarray(upper, float), value.shape) * f
        excess = np.maximum(lo - value, value - hi)
        excess = np.where(np.isnan(excess), np.inf, excess)
        if mask is not None:
            excess = np.where(mask, excess, -np.inf)
        checked = int(value.size if mask is None else np.count_nonzero(mask))
        res = CheckResult(name, checked, int(np.count_nonzero(excess > SLACK)))
        if checked:
            i = int(np.argmax(excess))
            res.max_excess = float(excess[i])
            res.worst = {"trial": self.start + i, "value": float(value[i]), "lower": float(lo[i]),
                         "upper": float(hi[i]),
                         **{k: _jsonable(v[i]) for k, v in self.points.items()}}
        if name in self.results:
            self.results[name].merge(res)
        else:
            self.results[name] = res


def _jsonable(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [float(v.real), float(v.imag)]
    return v.tolist() if v.ndim else float(v)


def _fuzz_sample(domain: Domain, U: np.ndarray, seed: int, start: int):
    """Pair ``x, y``, Möbius data ``a, phase`` (balls only), in the domain's own coordinates."""
    n = domain.n
    if domain.kind == "ball":
        P = ball_points(U, 3, n, seed, _STREAM_FUZZ, start, width=120)
        X, Y = P[:, 0], P[:, 1]
        if n == 2:
            X, Y = X[:, 0] + 1j * X[:, 1], Y[:, 0] + 1j * Y[:, 1]
        return X, Y, P[:, 2], 2.0 * math.pi * U[:, 120]
    if domain.kind == "half":
        def pt(off):
            horiz = 2.0 * U[:, off:off + n - 1] - 1.0
            height = 10.0 ** (-3.0 * U[:, off + n - 1])
            return np.hstack([horiz, height[:, None]])
        X, Y = pt(0), pt(n)
        if n == 2:
            X, Y = X[:, 0] + 1j * X[:, 1], Y[:, 0] + 1j * Y[:, 1]
        return X, Y, None, None
    th = domain.theta

    def spt(off):
        return 10.0 ** (-2.0 * U[:, off]) * np.exp(1j * th * _interior(U[:, off + 1]))
    return spt(0), spt(2), None, None


def _planar(domain: Domain, X, Y):
    if domain.n == 2:
        return domain, np.asarray(X, complex), np.asarray(Y, complex)
    zx, zy = plane_coordinates(domain, X, Y)
    return Domain(domain.kind, 2), zx, zy


_FUZZ_SUB_P3 = 10_000


def _fuzz_chunk(domain: Domain, seed: int, start: int, count: int, perturb, total_trials: int) -> dict:
    U = trial_uniforms(seed, _STREAM_FUZZ, start, count)
    X, Y, A, phase = _fuzz_sample(domain, U, seed, start)
    pts = {"x": X, "y": Y}
    if A is not None:
        pts.update(a=A, phase=phase)
    check = _Checker(start, pts, perturb)
    D, x, y = _planar(domain, X, Y)
    dist = np.abs(x - y)
    distinct = dist > 0.0

    js, t, p, s = planar_jstar(D, x, y), planar_t(D, x, y), planar_p(D, x, y), planar_s(D, x, y)
    w = planar_w(D, x, y) if D.is_convex else None
    b2 = planar_barrlund(D, 2.0, x, y)
    sq2 = math.sqrt(2.0)

    check("metrics/j*<=s<=2j*", s, js, 2.0 * js)
    check("metrics/j*<=p<=sqrt2*j*", p, js, sq2 * js)
    check("metrics/p/sqrt2<=s<=sqrt2*p", s, p / sq2, sq2 * p)
    check("metrics/max(s,p)/2<=t<=j*", t, 0.5 * np.maximum(s, p), js)
    check("metrics/s<=b2<=sqrt2*s", b2, s, sq2 * s)
    # p = 3 only on the first trials: the ball minimizer for general p scans
    sub = slice(0, max(0, min(count, _FUZZ_SUB_P3 - start)))
    if sub.stop > 0:
        b3 = planar_barrlund(D, 3.0, x[sub], y[sub])
        check("metrics/s<=b3<=2^(2/3)*s", b3, s[sub], 2.0 ** (2.0 / 3.0) * s[sub])
    if w is not None:
        check("convex/j*<=w<=s", w, js, s)
        check("convex/s<=p<=sqrt2*j*", p, s, sq2 * js)

    if D.kind in ("ball", "half"):
        th2 = planar_th_half_rho(D, x, y)
        th4 = _th_quarter_rho(th2)
        check("hyperbolic/th(rho/4)<=j*", js, th4)
        check("hyperbolic/th(rho/2)/2<=t<=j*", t, 0.5 * th2, js)
        check("hyperbolic/j*<=th(rho/2)", js, None, th2)
        if D.kind == "half":
            for name, v in (("w", w), ("s", s), ("p", p)):
                check(f"hyperbolic/{name}=th(rho/2)", v, th2, th2)
            ratio = np.where(distinct, b2 / np.where(distinct, th2, 1.0), 1.0)
            check("radius/b2 in [1,sqrt2]*th(rho/2)", ratio, 1.0, sq2, mask=distinct)
        else:
            check("hyperbolic/s<=p<=th(rho/2)", p, s, th2)
            check("ball/max(s,c*p)<=b2<=sqrt2*s", b2, np.maximum(s, 4.0 / (math.sqrt(10) + sq2) * p), sq2 * s)
            _ball_checks(check, D, x, y, A, phase, domain, dict(t=t, jstar=js, p=p, s=s, w=w, b2=b2), th2, th4,
                         distinct)
    if D.kind == "sector" and D.theta <= math.pi / 2:
        beta = math.pi
        fx, fy = sector_power_map_many(D.theta, beta, x), sector_power_map_many(D.theta, beta, y)
        wf = planar_w(Domain.sector(beta), fx, fy)
        lo, hi = bd.sector_w_power_bounds(D.theta, beta)
        ratio = np.where(distinct, wf / np.where(distinct, w, 1.0), 1.0)
        check("sector/power-map w quotient", ratio, lo, hi, mask=distinct)
    return check.results


def _ball_checks(check, D, x, y, A, phase, domain, vals, th2, th4, distinct):
    r_x, r_y = np.abs(x), np.abs(y)
    r_l, r_u = np.minimum(r_x, r_y), np.maximum(r_x, r_y)
    safe_th2 = np.where(distinct, th2, 1.0)
    for tag, label in (("t", "t"), ("jstar", "j*"), ("p", "p"), ("barrlund", "b2"), ("s", "s"), ("w", "w")):
        lo, hi = bd.ratio_constants(MetricKind("barrlund", 2.0) if tag == "barrlund" else tag, r_l, r_u)
        key = "b2" if tag == "barrlund" else tag
        check(f"radius/{label}/th(rho/2) in window constants", vals[key] / safe_th2, lo, hi, mask=distinct)
    check("radius/b2/th(rho/2) in [1/sqrt2,sqrt2]", vals["b2"] / safe_th2, 1.0 / math.sqrt(2.0), math.sqrt(2.0),
          mask=distinct)

    # a Möbius self-map h = e^{i phase} T_a (balls of any dimension: T_a alone)
    if domain.n == 2:
        a = A[:, 0] + 1j * A[:, 1]
        rot = np.exp(1j * phase)
        hx, hy = rot * _ta(a, x), rot * _ta(a, y)
        m = np.abs(a)
    else:
        Xn, Yn = check.points["x"], check.points["y"]
        hX, hY = ball_automorphism(A, Xn), ball_automorphism(A, Yn)
        hx, hy = plane_coordinates(domain, hX, hY)
        m = np.linalg.norm(A, axis=1)
    hvals = dict(t=planar_t(D, hx, hy), jstar=planar_jstar(D, hx, hy), p=planar_p(D, hx, hy),
                 s=planar_s(D, hx, hy), w=planar_w(D, hx, hy), b2=planar_barrlund(D, 2.0, hx, hy))
    for key in ("jstar", "w", "s", "p"):
        v = vals[key]
        check(f"moebius/{key}(h x,h y)<=2d/(1+d^2)", hvals[key], None, 2.0 * v / (1.0 + v * v))

    R_l = np.abs(m - r_l) / (1.0 - m * r_l)
    R_u = (m + r_u) / (1.0 + m * r_u)
    for key in ("t", "jstar", "p", "b2", "s", "w"):
        kind = MetricKind("barrlund", 2.0) if key == "b2" else key
        denom = np.where(distinct, vals[key], 1.0)
        quotient = hvals[key] / denom
        for refined in (False, True):
            lo, hi = bd.conformal_distortion_many(kind, r_l, r_u, R_l, R_u, refined=refined)
            mode = "refined" if refined else "displayed"
            check(f"conformal/{key} quotient in radius bounds ({mode})", quotient, lo, hi, mask=distinct)

    q = np.abs(planar_midpoint(x, y))
    t = np.where(distinct, th4, 0.5)
    s_lo, s_hi = bd.hypmidrot_many(q, t)
    check("midpoint/s in hypmidrot bounds", vals["s"], s_lo, s_hi, mask=distinct)
    ratio = hvals["s"] / np.where(distinct, vals["s"], 1.0)
    l, u = bd.conf_quotient_many(q, t)
    check("midpoint/s quotient in (l,u)", ratio, l, u, mask=distinct)
    check("midpoint/s quotient in midpoint-free envelope", ratio, 0.5 * (1 + t * t), 2.0 / (1 + t * t), mask=distinct)


def inequality_fuzz(domain: Domain, trials: int, seed: int, *, perturb: dict[str, float] | None = None,
                    threads: int | None = None) -> FuzzReport:
    """Evaluate every applicable inequality on random pairs of ``domain``.

    ``perturb`` maps check names to factors ``f``; the check then uses
    ``lower / f`` and ``upper * f``. Factors below 1 tighten it, which is how
    the harness proves it can see a violation.
    """
    trials, seed = _check_trials(trials), _check_seed(seed)
    parts = _run_chunks(lambda s, c: _fuzz_chunk(domain, seed, s, c, perturb, trials), trials, threads)
    merged: dict[str, CheckResult] = {}
    for part in parts:
        for name, res in part.items():
            if name in merged:
                merged[name].merge(res)
            else:
                merged[name] = CheckResult(name)
                merged[name].merge(res)
    unknown = set(perturb or {}) - set(merged)
    if unknown:
        raise InvalidParameter(f"unknown checks to perturb: {sorted(unknown)}")
    return FuzzReport(domain.label, trials, seed, merged)


# ---------------------------------------------------------------------------
# distortion bounds for conformal (K = 1) maps


def schwarz_fuzz(trials: int, seed: int, *, threads: int | None = None) -> FuzzReport:
    """Check the quasiregular distortion bounds on maps known to be conformal.

    Möbius self-maps ``e^{i phase} T_a`` of the disk, rotations (for the
    origin-fixing bound) and the power map from the sector of angle pi/2
    onto the upper half-plane.
    """
    trials, seed = _check_trials(trials), _check_seed(seed)
    d1 = Dilatation(1.0)
    ball = Domain.ball(2)
    alpha, beta = math.pi / 2.0, math.pi
    s_alpha, s_beta = Domain.sector(alpha), Domain.sector(beta)

    def chunk(start: int, count: int):
        U = trial_uniforms(seed, _STREAM_SCHWARZ, start, count)
        P = disk_points(U, 3, seed, _STREAM_SCHWARZ, start, width=120)
        x, y, a = P[:, 0], P[:, 1], P[:, 2]
        rot = np.exp(2j * math.pi * U[:, 120])
        hx, hy = rot * _ta(a, x), rot * _ta(a, y)
        check = _Checker(start, {"x": x, "y": y, "a": a, "rotation": rot}, None)

        rho, rho_h = planar_rho(ball, x, y), planar_rho(ball, hx, hy)
        th_h = planar_th_half_rho(ball, hx, hy)
        b = schwarz_rho_bounds(d1, rho)
        check("schwarz/th(rho'/2)<=phi(th(rho/2))", th_h, None, phi_k2(1.0, planar_th_half_rho(ball, x, y)))
        check("schwarz/th(rho'/2)<=power form", th_h, None, b.b1_power)
        check("schwarz/rho'<=K_I(rho+log4)", rho_h, None, b.b2)
        check("schwarz/rho'<=c(K)max(rho,rho^(1/K))", rho_h, None, b.b3)

        for name, fn in (("jstar", planar_jstar), ("w", planar_w), ("s", planar_s), ("p", planar_p)):
            m, mh = fn(ball, x, y), fn(ball, hx, hy)
            db = dkqr_bounds(d1, m)
            for field_name in db._fields:
                check(f"dkqr/{name}<={field_name}", mh, None, getattr(db, field_name))

        arg = jp_argument_planar(x, y)
        js_h = planar_jstar(ball, hx, hy)
        check("jpqr/j*(fx,fy)<=phi(arg)", js_h, None, phi_k2(1.0, arg))
        check("jpqr/j*(fx,fy)<=power(arg)", js_h, None, 4.0 ** (1.0 - d1.alpha) * arg ** d1.alpha)
        # origin-fixing map: a rotation, y = 0
        rx = np.abs(rot * x)
        arg0 = jp_argument_planar(x, np.zeros_like(x))
        check("jpqr/|f(x)|/(2-|f(x)|)<=phi(arg0)", rx / (2.0 - rx), None, phi_k2(1.0, arg0))

        # power map of sectors, conformal
        u, v = _sector_pair(U, alpha)
        fu, fv = sector_power_map_many(alpha, beta, u), sector_power_map_many(alpha, beta, v)
        w_a = planar_w(s_alpha, u, v)
        w_b = planar_w(s_beta, fu, fv)
        check("sector/w after power map in qc bounds", w_b, *sector_qc_many(1.0, alpha, beta, w_a))
        rho_a, rho_b = planar_rho(s_alpha, u, v), planar_rho(s_beta, fu, fv)
        check("sector/rho'<=c(K)max(rho,rho^(1/K))", rho_b, None, schwarz_rho_bounds(d1, rho_a).b3)
        return check.results

    parts = _run_chunks(chunk, trials, threads)
    merged: dict[str, CheckResult] = {}
    for part in parts:
        for name, res in part.items():
            merged.setdefault(name, CheckResult(name)).merge(res)
    return FuzzReport("schwarz", trials, seed, merged)


def _sector_pair(U: np.ndarray, theta: float):
    def pt(off):
        return 10.0 ** (-2.0 * U[:, off]) * np.exp(1j * theta * _interior(U[:, off + 1]))
    return pt(122), pt(124)


# ---------------------------------------------------------------------------
# l/u grid


GRID_COLUMNS = ("q", "t", "l", "u", "branch")


def grid_lu(resolution: int) -> list[dict]:
    """Rows ``(q, t, l, u, branch)`` on ``q = i/(R-1)``, ``t = (j+1)/(R+1)``, plus the seam ``q = t^2``."""
    if int(resolution) != resolution or resolution < 2:
        raise InvalidParameter("resolution must be an integer >= 2")
    R = int(resolution)
    ts = [(j + 1) / (R + 1) for j in range(R)]
    rows = []
    for t in ts:
        qs = sorted({i / (R - 1) for i in range(R)} | {t * t})
        for q in qs:
            lo, hi = bd.conf_quotient_bounds(q, t)
            rows.append({"q": q, "t": t, "l": lo, "u": hi, "branch": bd.lu_branch(q, t)})
    return rows


# ---------------------------------------------------------------------------
# serialization


def to_json_payload(experiment: str, seed: int | None, trials: int | None, results) -> dict:
    return {"experiment": experiment, "seed": seed, "trials": trials, "results": results}


def to_json(experiment: str, seed: int | None, trials: int | None, results) -> str:
    return json.dumps(to_json_payload(experiment, seed, trials, results))


def to_csv(rows: list[dict], columns: tuple[str, ...] | None = None) -> str:
    if not rows:
        return ""
    columns = columns or tuple(rows[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


__all__ = [
    "CHUNK_TRIALS",
    "ComparisonSummary",
    "FuzzReport",
    "RunConfig",
    "SUP_KINDS",
    "THREADS_ENV",
    "compare_bound_methods",
    "compare_triples",
    "directed_ratio_extremes",
    "example_boundcomp",
    "grid_lu",
    "inequality_fuzz",
    "sample_unit_disk",
    "schwarz_fuzz",
    "sup_distortion_estimate",
    "to_csv",
    "to_json",
    "to_json_payload",
    "trial_uniforms",
    "worker_count",
]
