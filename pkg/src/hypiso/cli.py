"""Command line front end: construct, offset, verify, optimize, render, table.

Exit codes: 0 all checks pass, 1 check failures, 2 usage errors,
3 unreadable input.  HYPISO_TOL overrides the comparison tolerance
(default 1e-9).  All output is deterministic for fixed inputs and
seeds; floats are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .bodies import (
    Body,
    ball,
    inradius,
    offset,
    q_counterexample,
    rolls_freely,
    sausage,
    two_ball_hull,
)
from .optimize import (
    ShapeProblem,
    perimeter_to_d,
    random_thick_body,
    solve,
)
from .render import RenderSpec, render_svg
from .serialize import csv_line, dumps
from .spline import GeometryError, NonSimpleBoundaryError
from .steiner import (
    SIGN_AS_PRINTED,
    SIGN_STEINER_CONSISTENT,
    bound_scaled,
    deficit,
    flow_invariant,
    outer_flow,
    sausage_measures,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_TOL = 1e-9


class CliError(Exception):
    code = EXIT_USAGE


class UsageError(CliError):
    code = EXIT_USAGE


class InputError(CliError):
    code = EXIT_IO


def _tolerance() -> float:
    raw = os.environ.get("HYPISO_TOL", "")
    if not raw:
        return DEFAULT_TOL
    try:
        t = float(raw)
    except ValueError:
        raise UsageError(f"HYPISO_TOL is not a number: {raw!r}")
    if not (t > 0 and math.isfinite(t)):
        raise UsageError("HYPISO_TOL must be positive and finite")
    return t


def _load_body(path: str) -> Body:
    try:
        with open(path, encoding="ascii") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")
    try:
        return Body.from_json_dict(obj)
    except (KeyError, TypeError, ValueError, GeometryError) as e:
        raise InputError(f"{path} is not a valid body file: {e}")


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}")


# ---------------------------------------------------------------------------
# construct

def _build_body(args) -> Body:
    kind = args.kind
    if kind == "sausage":
        if args.lam is None or args.d is None:
            raise UsageError("sausage needs --lambda and --d")
        return sausage(args.lam, args.d)
    if kind == "ball":
        if args.r is None:
            raise UsageError("ball needs --r")
        return ball(args.r)
    if kind == "hull2":
        if args.r is None or args.d is None:
            raise UsageError("hull2 needs --r and --d")
        return two_ball_hull(args.r, args.d)
    if kind == "qbody":
        if args.lam is None or args.eps is None:
            raise UsageError("qbody needs --lambda and --eps")
        return q_counterexample(args.lam, args.eps,
                                1.0 if args.d is None else args.d)
    if kind == "random":
        if args.lam is None:
            raise UsageError("random needs --lambda")
        return random_thick_body(args.lam, args.n_arcs, args.seed)
    raise UsageError(f"unknown body kind {kind!r}")


def cmd_construct(args) -> int:
    try:
        body = _build_body(args)
    except (ValueError, GeometryError) as e:
        raise UsageError(str(e))
    if args.out:
        _write_text(args.out, dumps(body.to_json_dict()) + "\n")
    m = body.measure
    rin = inradius(body) if body.convex else math.nan
    print(csv_line([m.area, m.perimeter, rin]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# offset

def cmd_offset(args) -> int:
    body = _load_body(args.body)
    if args.rho is None:
        raise UsageError("offset needs --rho")
    try:
        shifted = offset(body, args.rho)
    except NonSimpleBoundaryError as e:
        print(f"offset failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, GeometryError) as e:
        raise UsageError(str(e))
    if args.out:
        _write_text(args.out, dumps(shifted.to_json_dict()) + "\n")
    m = shifted.measure
    print(csv_line([m.area, m.perimeter]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _steiner_agreement(body: Body, rho: float) -> float:
    geo = offset(body, rho).measure
    flow = outer_flow(body.measure, rho)
    return max(abs(geo.area - flow.area),
               abs(geo.perimeter - flow.perimeter))


def cmd_verify(args) -> int:
    body = _load_body(args.body)
    lam = args.lam
    if lam is None:
        lam = body.thick_for or body.meta.get("lambda")
    if lam is None:
        raise UsageError("no --lambda given and none stored in the body")
    lam = float(lam)
    if lam <= 1.0:
        raise UsageError("thickness parameter must exceed 1")
    tol = _tolerance()

    checks = []

    cert = body.thickness_certificate(lam)
    checks.append({
        "name": f"thickness[lam={lam:g}]", "gate": True, "ok": cert.ok,
        "min_kappa": cert.min_kappa, "max_kappa": cert.max_kappa,
        "violations": len(cert.violations),
    })

    rep_s = deficit(body.measure, lam, SIGN_STEINER_CONSISTENT)
    checks.append({
        "name": "deficit[steiner_consistent]", "gate": True,
        "ok": rep_s.deficit >= -tol, "deficit": rep_s.deficit,
        "bound_value": rep_s.bound_value,
    })
    rep_p = deficit(body.measure, lam, SIGN_AS_PRINTED)
    checks.append({
        "name": "deficit[as_printed]", "gate": False,
        "ok": rep_p.deficit >= -tol, "deficit": rep_p.deficit,
        "bound_value": rep_p.bound_value,
    })

    if body.convex:
        roll = rolls_freely(body, lam)
        checks.append({
            "name": f"rolling[lam={lam:g}]", "gate": True, "ok": roll.ok,
            "worst_margin": roll.worst_margin,
        })

    for rho in (0.1, 0.25, 0.4):
        try:
            err = _steiner_agreement(body, rho)
            ok = err <= tol
        except (GeometryError, ValueError) as e:
            err, ok = math.inf, False
        checks.append({
            "name": f"steiner_offset[rho={rho:g}]", "gate": True,
            "ok": ok, "max_err": err,
        })

    overall = all(c["ok"] for c in checks if c["gate"])
    width = max(len(c["name"]) for c in checks) + 2
    for c in checks:
        status = ("PASS" if c["ok"] else "FAIL") if c["gate"] else "INFO"
        detail = " ".join(
            f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
            for k, v in c.items() if k not in ("name", "gate", "ok"))
        print(f"{c['name']:<{width}}{status}  {detail}")
    print(f"{'overall':<{width}}{'PASS' if overall else 'FAIL'}")
    if args.out:
        report = {
            "lambda": lam,
            "tolerance": tol,
            "overall_ok": overall,
            "checks": checks,
        }
        _write_text(args.out, dumps(report) + "\n")
    return EXIT_OK if overall else EXIT_CHECK


# ---------------------------------------------------------------------------
# optimize

def cmd_optimize(args) -> int:
    if args.lam is None:
        raise UsageError("optimize needs --lambda")
    if (args.perimeter is None) == (args.d is None):
        raise UsageError("give exactly one of --perimeter or --d")
    if args.d is not None:
        if args.d < 0:
            raise UsageError("--d must be nonnegative")
        perimeter = sausage_measures(args.lam, args.d).perimeter
    else:
        perimeter = args.perimeter
    try:
        problem = ShapeProblem(lam=args.lam, perimeter=perimeter,
                               n_arcs=args.n_arcs)
    except ValueError as e:
        raise UsageError(str(e))
    cands = solve(problem, seed=args.seed, n_starts=args.n_starts)
    d_ref = perimeter_to_d(args.lam, perimeter)
    ref = sausage_measures(args.lam, d_ref)
    ref_objective = 2.0 * math.pi + ref.area
    best = cands[0]
    report = {
        "problem": {
            "lambda": args.lam,
            "perimeter": perimeter,
            "n_arcs": args.n_arcs,
            "seed": args.seed,
            "n_starts": args.n_starts,
        },
        "reference_sausage": {
            "d": d_ref,
            "area": ref.area,
            "perimeter": ref.perimeter,
            "objective": ref_objective,
        },
        "best": best.to_json_dict(),
        "gap": best.objective - ref_objective,
        "start_objectives": [c.objective for c in cands],
        "n_converged": sum(1 for c in cands if c.converged),
    }
    _write_text(args.out, dumps(report) + "\n")
    if args.out:
        print(csv_line([best.objective, ref_objective,
                        best.objective - ref_objective]))
    if not math.isfinite(best.objective):
        return EXIT_CHECK
    return EXIT_OK


# ---------------------------------------------------------------------------
# render

def cmd_render(args) -> int:
    body = _load_body(args.body)
    try:
        spec = RenderSpec(
            model=args.model,
            width_px=args.width,
            height_px=args.height,
            draw_extensions=not args.no_extensions,
            core_geodesic=args.core_geodesic,
            inscribed_balls=args.inscribed_balls,
            rolling_witness=args.rolling_witness,
        )
        svg = render_svg(body, spec)
    except ValueError as e:
        raise UsageError(str(e))
    _write_text(args.out, svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# table

def _parse_grid(raw: str, what: str) -> list[float]:
    vals = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            vals.append(float(part))
        except ValueError:
            raise UsageError(f"bad {what} grid entry: {part!r}")
    if not vals:
        raise UsageError(f"empty {what} grid")
    return vals


def cmd_table(args) -> int:
    rows = []
    if args.kind == "deficit":
        lams = _parse_grid(args.grid_lambda, "lambda")
        ds = _parse_grid(args.grid_d, "d")
        rows.append("lambda,d,area,perimeter,deficit")
        for lam in lams:
            if lam <= 1.0:
                raise UsageError("thickness parameter must exceed 1")
            for d in ds:
                m = sausage_measures(lam, d)
                rep = deficit(m, lam)
                rows.append(csv_line([lam, d, m.area, m.perimeter,
                                      rep.deficit]))
    elif args.kind == "steiner":
        if args.r is None or args.r <= 0:
            raise UsageError("steiner table needs --r > 0")
        rhos = _parse_grid(args.grid_rho, "rho")
        base = ball(args.r).measure
        rows.append("rho,area,perimeter,invariant")
        for rho in rhos:
            m = outer_flow(base, rho)
            rows.append(csv_line([rho, m.area, m.perimeter,
                                  flow_invariant(m)]))
    elif args.kind == "limit":
        if args.lam is None or args.perimeter is None:
            raise UsageError("limit table needs --lambda and --perimeter")
        cs = _parse_grid(args.grid_c, "c")
        euclid = args.perimeter / args.lam - math.pi / args.lam ** 2
        rows.append("c,scaled_bound,euclidean_gap")
        for c in cs:
            if not 0 < c <= args.lam:
                raise UsageError("curvature scale c must be in (0, lambda]")
            v = bound_scaled(args.perimeter, args.lam, c)
            rows.append(csv_line([c, v, v - euclid]))
    else:
        raise UsageError(f"unknown table kind {args.kind!r}")
    _write_text(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="thickness parameter (> 1)")
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-arcs", dest="n_arcs", type=int, default=12)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hypiso",
        description="constant-curvature bodies in the hyperbolic plane")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a body and save its JSON")
    p.add_argument("kind",
                   choices=["sausage", "ball", "hull2", "qbody", "random"])
    _add_common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("offset", help="parallel body at signed distance")
    p.add_argument("body")
    _add_common(p)
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("verify", help="thickness, deficit, rolling, flows")
    p.add_argument("body")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="fixed-perimeter area minimization")
    _add_common(p)
    p.add_argument("--perimeter", type=float, default=None)
    p.add_argument("--n-starts", dest="n_starts", type=int, default=8)
    p.set_defaults(func=cmd_optimize, n_arcs=16)

    p = sub.add_parser("render", help="SVG figure of a body")
    p.add_argument("body")
    _add_common(p)
    p.add_argument("--model", choices=["disk", "uhp"], default="disk")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=640)
    p.add_argument("--no-extensions", action="store_true")
    p.add_argument("--core-geodesic", action="store_true")
    p.add_argument("--inscribed-balls", action="store_true")
    p.add_argument("--rolling-witness", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("table", help="CSV sweeps")
    p.add_argument("kind", choices=["deficit", "steiner", "limit"])
    _add_common(p)
    p.add_argument("--perimeter", type=float, default=10.0)
    p.add_argument("--grid-lambda", default="1.5,2,5")
    p.add_argument("--grid-d", default="0,1,3")
    p.add_argument("--grid-rho",
                   default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    p.add_argument("--grid-c", default="1,0.1,0.01,0.001")
    p.set_defaults(func=cmd_table, r=1.0, lam=2.0)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
