"""Command-line front end. Prints one JSON document (or CSV) per call.

Exit codes: 0 success, 1 fuzz found violations, 2 usage error,
3 domain or validation error, 4 convergence failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import bounds as bd
from . import experiments as ex
from .errors import ConvergenceFailure, InvalidParameter, ValidationError
from .geometry import Domain
from .metrics import MetricKind, evaluate
from .moebius import hyperbolic_midpoint
from .schwarz import Dilatation, c_of_k, dkqr_bounds, jpqr_bounds, schwarz_rho_bounds, sector_qc_bounds

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_VALIDATION, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

FUZZ_DOMAINS = ("ball2", "half2", "ball3", f"sector:{math.pi / 2!r}")


def parse_point(text: str):
    """``0.1,0.3,0.2`` (coordinates) or ``0.1+0.3i`` (planar complex)."""
    t = text.strip().replace(" ", "")
    try:
        if "," in t:
            return [float(v) for v in t.split(",")]
        if t.endswith(("i", "j")):
            return complex(t[:-1] + "j")
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"cannot parse point {text!r}")


def parse_complex(text: str) -> complex:
    p = parse_point(text) if ("," in text or text.strip().endswith(("i", "j"))) else None
    try:
        if p is None:
            return complex(float(text))
        if isinstance(p, complex):
            return p
        if len(p) == 2:
            return complex(p[0], p[1])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}")


def parse_pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return lo, hi


def _domain(text: str) -> Domain:
    return Domain.parse(text)


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _json_safe(obj.tolist())
    return obj


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, csv rows, exit code)


def cmd_metric(args):
    domain = _domain(args.domain)
    kind = MetricKind.parse(args.kind, args.p)
    v = evaluate(kind, domain, args.x, args.y)
    return {"value": v}, [{"kind": kind.label, "domain": domain.label, "value": v}], EXIT_OK


def cmd_bounds(args):
    fam = args.family
    if fam == "ratio":
        iv = bd.ratio_bounds_vs_half_rho(args.kind, bd.RadiusWindow(*args.window))
    elif fam == "halfspace-barrlund":
        iv = bd.halfspace_barrlund_bounds()
    elif fam == "hypmidrot":
        iv = bd.hypmidrot_bounds(args.q, args.t)
    elif fam == "quotient":
        iv = bd.conf_quotient_bounds(args.q, args.t)
    elif fam == "midpoint-free":
        iv = bd.conf_quotient_bounds_midpointfree(args.t)
    elif fam == "sector-power":
        iv = bd.sector_w_power_bounds(args.alpha, args.beta)
    else:
        iv = bd.fixed_conformal_constants(args.kind, _domain(args.source), _domain(args.target))
    d = {"family": fam, **iv.as_dict()}
    return d, [d], EXIT_OK


def cmd_distort(args):
    window = bd.RadiusWindow(*args.window)
    if (args.a is None) == (args.image_window is None):
        raise InvalidParameter("give exactly one of --a and --image-window")
    image = bd.ta_image_window(args.a, window) if args.a is not None else bd.RadiusWindow(*args.image_window)
    iv = bd.conformal_distortion_bounds(args.kind, window, image, refined=args.refined)
    d = {"kind": args.kind, "image_window": [image.r_l, image.r_u], **iv.as_dict()}
    return d, [{k: v for k, v in d.items() if k != "image_window"}], EXIT_OK


def cmd_midpoint(args):
    q = hyperbolic_midpoint(args.x, args.y)
    coords = [q.real, q.imag] if isinstance(q, complex) else [float(v) for v in q]
    return {"midpoint": coords}, [{f"q{i}": v for i, v in enumerate(coords)}], EXIT_OK


def cmd_schwarz(args):
    d = Dilatation(args.K, args.K_I, args.n)
    form = args.form
    if form == "rho":
        out = schwarz_rho_bounds(d, args.rho)._asdict()
    elif form == "distortion":
        out = dkqr_bounds(d, args.value)._asdict()
    elif form == "jp":
        if args.x is None or args.y is None:
            raise InvalidParameter("--x and --y are required for the jp form")
        out = jpqr_bounds(d, args.x, args.y)._asdict()
    elif form == "sector":
        out = sector_qc_bounds(args.K, args.alpha, args.beta, args.value).as_dict()
    else:
        exact, upper = c_of_k(args.K)
        out = {"c": exact, "c_upper": upper}
    out = {"form": form, **out}
    return out, [out], EXIT_OK


def cmd_mc_compare(args):
    summary = ex.compare_bound_methods(args.trials, args.seed, threads=args.threads)
    d = summary.as_dict()
    return ex.to_json_payload("mc-compare", args.seed, args.trials, d), [d], EXIT_OK


def cmd_sup_estimate(args):
    kinds = ex.SUP_KINDS if args.kind == "all" else (args.kind,)
    rows = [{"kind": MetricKind.parse(k).label,
             "estimate": ex.sup_distortion_estimate(args.a, k, args.trials, args.seed, threads=args.threads),
             "one_plus_abs_a": 1.0 + abs(args.a)} for k in kinds]
    return ex.to_json_payload("sup-estimate", args.seed, args.trials, {"a": args.a, "estimates": rows}), rows, EXIT_OK


def cmd_fuzz(args):
    names = FUZZ_DOMAINS if args.domain == ["all"] else args.domain
    reports = [ex.inequality_fuzz(_domain(n), args.trials, args.seed, threads=args.threads) for n in names]
    if args.schwarz:
        reports.append(ex.schwarz_fuzz(args.trials, args.seed, threads=args.threads))
    rows = [{"domain": r.domain, "check": name, **c.as_dict()} for r in reports for name, c in r.checks.items()]
    for row in rows:
        row.pop("worst")
    total = sum(r.total_violations for r in reports)
    payload = ex.to_json_payload("fuzz", args.seed, args.trials,
                                 {"total_violations": total, "reports": [r.as_dict() for r in reports]})
    return payload, rows, EXIT_OK if total == 0 else EXIT_VIOLATIONS


def cmd_grid(args):
    rows = ex.grid_lu(args.resolution)
    return ex.to_json_payload("grid", None, None, {"rows": rows}), rows, EXIT_OK


def cmd_example(args):
    d = ex.example_boundcomp()
    return ex.to_json_payload("boundcomp", None, None, d), [d], EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metrics-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", help="write to this file instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="evaluate one metric at a pair of points")
    p.add_argument("--kind", required=True, help="rho j jstar s p w t barrlund b2 barrlund:<p>")
    p.add_argument("--p", type=float, help="Barrlund exponent")
    p.add_argument("--domain", required=True, help="ball<n>, half<n> or sector:<theta>")
    p.add_argument("--x", type=parse_point, required=True)
    p.add_argument("--y", type=parse_point, required=True)
    p.set_defaults(fn=cmd_metric)

    p = sub.add_parser("bounds", help="radius, midpoint and fixed-domain bound constants")
    p.add_argument("--family", default="ratio",
                   choices=("ratio", "halfspace-barrlund", "hypmidrot", "quotient", "midpoint-free",
                            "sector-power", "fixed"))
    p.add_argument("--kind", default="s")
    p.add_argument("--window", type=parse_pair, default=(0.0, 0.5), help="r_l,r_u")
    p.add_argument("--q", type=float, help="|q|, norm of the hyperbolic midpoint")
    p.add_argument("--t", type=float, help="th(rho/4)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--source", default="half2")
    p.add_argument("--target", default="half2")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("distort", help="bounds on d(f x, f y)/d(x, y) for conformal self-maps of the disk")
    p.add_argument("--kind", default="s")
    p.add_argument("--window", type=parse_pair, required=True, help="r_l,r_u")
    p.add_argument("--a", type=parse_complex, help="use the image window of T_a")
    p.add_argument("--image-window", type=parse_pair, help="R_l,R_u")
    p.add_argument("--refined", action="store_true")
    p.set_defaults(fn=cmd_distort)

    p = sub.add_parser("midpoint", help="hyperbolic midpoint in the unit ball")
    p.add_argument("--x", type=parse_point, required=True)
    p.add_argument("--y", type=parse_point, required=True)
    p.set_defaults(fn=cmd_midpoint)

    p = sub.add_parser("schwarz", help="distortion bounds for K-quasiregular maps")
    p.add_argument("--form", choices=("rho", "distortion", "jp", "sector", "c"), default="rho")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--K-I", dest="K_I", type=float)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--value", type=float, default=0.5, help="metric value (distortion, sector forms)")
    p.add_argument("--x", type=parse_point)
    p.add_argument("--y", type=parse_point)
    p.add_argument("--alpha", type=float, default=math.pi / 2)
    p.add_argument("--beta", type=float, default=math.pi)
    p.set_defaults(fn=cmd_schwarz)

    def seeded(q, trials: int):
        q.add_argument("--trials", type=int, default=trials)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--threads", type=int, help=f"worker threads, overrides {ex.THREADS_ENV}")

    p = sub.add_parser("mc-compare", help="Monte Carlo comparison of the radius and midpoint bounds")
    seeded(p, 1_000_000)
    p.set_defaults(fn=cmd_mc_compare)

    p = sub.add_parser("sup-estimate", help="estimate sup d(T_a x, T_a y)/d(x, y)")
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--kind", default="all")
    seeded(p, 100_000)
    p.set_defaults(fn=cmd_sup_estimate)

    p = sub.add_parser("fuzz", help="random-pair inequality checks")
    p.add_argument("--domain", nargs="+", default=["all"])
    p.add_argument("--schwarz", action="store_true", help="also run the conformal-map distortion checks")
    seeded(p, 100_000)
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("grid", help="l and u on a (|q|, t) grid")
    p.add_argument("--resolution", type=int, default=11)
    p.set_defaults(fn=cmd_grid)

    p = sub.add_parser("example", help="worked examples")
    p.add_argument("name", choices=("boundcomp",))
    p.set_defaults(fn=cmd_example)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        payload, rows, code = args.fn(args)
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = ex.to_csv(rows) if args.format == "csv" else json.dumps(_json_safe(payload))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
