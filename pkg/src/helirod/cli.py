"""Command-line entry point.

Subcommands: ``section`` (cross-section report), ``solve`` (one statics or
progressive solve, files out), ``ftl`` (deployment planning loop, plan and
trajectory files out, optional fixed-schedule replay), ``metrics``
(compare two trajectory files), ``serve`` (interactive teleop service).

Outputs are deterministic byte-for-byte for a fixed configuration. The
only environment knob is HELIROD_LOG (logging level name).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import io as hio
from .errors import GeometryError, HelirodError, PlanningError, SolverError
from .ftl import FtlPlanConfig, plan_ftl, simulate_schedule
from .geometry import PRESETS, load_geometry, preset, section_properties
from .metrics import (
    Trajectory,
    max_euclidean_distance,
    nearest_point_rmse,
    resample_by_arclength,
    rmse_paired,
)
from .statics import LoadCase, solve_progressive, solve_statics

log = logging.getLogger("helirod")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _add_geometry_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset", choices=sorted(PRESETS), help="built-in prototype")
    g.add_argument("--config", help="geometry JSON file")


def _geometry(args):
    if args.preset:
        return preset(args.preset)
    return load_geometry(args.config)


def _load_case(args, tau=0.0):
    return LoadCase(tau=tau, gravity_enabled=(args.gravity == "on"))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="helirod", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("section", help="cross-section properties of a geometry")
    _add_geometry_args(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("solve", help="solve one rod shape")
    _add_geometry_args(p)
    p.add_argument("--tau", type=float, default=0.0, help="tendon tension (N)")
    p.add_argument("--eta", type=float, default=1.0, help="progression factor")
    p.add_argument("--gravity", choices=("on", "off"), default="off")
    p.add_argument("--steps", type=int, default=None, help="RK4 steps for the span")
    p.add_argument("--out", default="helirod-out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("ftl", help="follow-the-leader planning loop")
    _add_geometry_args(p)
    p.add_argument("--tau-des", type=float, required=True, help="design tension (N)")
    p.add_argument("--delta-eta", type=float, default=0.05)
    p.add_argument("--gravity", choices=("on", "off"), default="off")
    p.add_argument("--tau-max", type=float, default=None)
    p.add_argument("--deviation-tolerance", type=float, default=0.05)
    p.add_argument("--fit", action="store_true", help="also write fit coefficients file")
    p.add_argument(
        "--replay-polynomial",
        metavar="c2,c1,c0",
        help="replay a fixed tension schedule and report tracking errors",
    )
    p.add_argument("--out", default="helirod-out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("metrics", help="compare two trajectory files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("serve", help="run the interactive teleop service")
    _add_geometry_args(p)
    p.add_argument("--scene", help="phantom scene JSON (default: packaged scene)")
    p.add_argument("--port", type=int, default=8720)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--gravity", choices=("on", "off"), default="off")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--tau-max", type=float, default=1.4)
    p.add_argument("--static-dir", help="serve a built UI from this directory")
    return ap


def cmd_section(args) -> int:
    props = section_properties(_geometry(args))
    doc = {
        "format": "helirod.section",
        "version": 1,
        "A": props.A,
        "r_na": props.r_na,
        "I_x": props.I_x,
        "I_y": props.I_y,
        "I_z": props.I_z,
        "linear_density": props.linear_density,
        "L": props.L,
        "L_na": props.L_na,
        "r_tendon": props.r_tendon.tolist(),
        "E": props.E,
        "G": props.G,
    }
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    else:
        rows = [(k, v) for k, v in doc.items() if isinstance(v, (int, float))]
        text = "quantity,value\n" + "\n".join(f"{k},{v!r}" for k, v in rows) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    geom = _geometry(args)
    load = _load_case(args, tau=args.tau)
    out = _out_dir(args)
    try:
        if args.eta >= 1.0:
            sol = solve_statics(geom, load, steps=args.steps)
        else:
            sol = solve_progressive(geom, load, args.eta, steps=args.steps)
    except SolverError as exc:
        hio.dump_json(
            {
                "format": "helirod.solution",
                "version": 1,
                "converged": False,
                "error": str(exc),
                "residual_norm": exc.residual_norm,
                "iterations": exc.iterations,
                "diagnostics": exc.diagnostics,
            },
            str(out / "diagnostics.json"),
        )
        log.error("solve failed: %s", exc)
        return EXIT_FAILED
    if args.format == "csv":
        hio.write_solution_csv(sol, str(out / "solution.csv"))
    hio.write_solution_json(sol, str(out / "solution.json"))
    print(
        f"converged={sol.converged} residual={sol.residual_norm:.3e} "
        f"iterations={sol.iterations} tip=({sol.tip[0]:.4f}, {sol.tip[1]:.4f}, {sol.tip[2]:.4f})"
    )
    return EXIT_OK if sol.converged else EXIT_FAILED


def cmd_ftl(args) -> int:
    geom = _geometry(args)
    cfg = FtlPlanConfig(
        tau_des=args.tau_des,
        delta_eta=args.delta_eta,
        tau_max=args.tau_max,
        deviation_tolerance=args.deviation_tolerance,
        gravity_enabled=(args.gravity == "on"),
    )
    out = _out_dir(args)
    plan = plan_ftl(geom, cfg)
    hio.write_plan_json(plan, str(out / "plan.json"))
    if args.format == "csv":
        hio.write_plan_csv(plan, str(out / "plan.csv"))
    hio.write_trajectory_csv(plan.reference, str(out / "reference.csv"))
    if args.fit and plan.poly_coeffs is not None:
        hio.dump_json(
            {
                "format": "helirod.tension_fit",
                "version": 1,
                "coefficients": list(plan.poly_coeffs),
                "rms_residual": plan.fit_residual,
            },
            str(out / "tension_fit.json"),
        )
    status = EXIT_OK if plan.ok else EXIT_FAILED
    if args.replay_polynomial:
        try:
            coeffs = tuple(float(c) for c in args.replay_polynomial.split(","))
        except ValueError:
            log.error("bad --replay-polynomial, expected c2,c1,c0")
            return EXIT_USAGE
        load = LoadCase(gravity_enabled=cfg.gravity_enabled)
        replay = simulate_schedule(geom, coeffs, load, plan.reference, delta_eta=cfg.delta_eta)
        hio.write_trajectory_csv(Trajectory(replay.tip_positions), str(out / "replay_tips.csv"))
        hio.dump_json(
            {
                "format": "helirod.replay",
                "version": 1,
                "coefficients": list(coeffs),
                "eta": replay.eta_grid,
                "tau": replay.tau,
                "tip_rmse": replay.tip_rmse,
                "tip_max_error": replay.tip_max_error,
                "body_rmse": replay.body_rmse,
            },
            str(out / "replay.json"),
        )
        print(f"replay tip RMSE {replay.tip_rmse:.4f} mm (max {replay.tip_max_error:.4f} mm)")
    if plan.failures:
        log.error("plan finished with %d failed steps", len(plan.failures))
    else:
        print(f"plan complete: {len(plan.eta_grid)} steps, fit={plan.poly_coeffs}")
    return status


def cmd_metrics(args) -> int:
    a = hio.read_trajectory_csv(args.a)
    b = hio.read_trajectory_csv(args.b)
    n = max(len(a), len(b))
    ra = resample_by_arclength(a, n) if len(a) != n else a
    rb = resample_by_arclength(b, n) if len(b) != n else b
    doc = {
        "rmse": rmse_paired(ra, rb),
        "med": max_euclidean_distance(ra, rb),
        "nearest_point_rmse": nearest_point_rmse(a.points, b),
        "points_a": len(a),
        "points_b": len(b),
    }
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=1))
    else:
        print("metric,value")
        for k, v in sorted(doc.items()):
            print(f"{k},{v!r}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .teleop.scene import load_scene
    from .teleop.server import serve
    from .teleop.session import TeleopConfig

    geom = _geometry(args)
    scene = load_scene(args.scene)
    schedule = scene.meta.get("tau")
    config = TeleopConfig(
        geometry=geom,
        scene=scene,
        tau_max=args.tau_max,
        steps=args.steps,
        gravity_enabled=(args.gravity == "on"),
        assist_schedule=(0.0, 0.0, float(schedule) if schedule else 0.7),
    )
    serve(config, host=args.host, port=args.port, static_dir=args.static_dir)
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("HELIROD_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    ap = build_parser()
    args = ap.parse_args(argv)
    handlers = {
        "section": cmd_section,
        "solve": cmd_solve,
        "ftl": cmd_ftl,
        "metrics": cmd_metrics,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except GeometryError as exc:
        log.error("invalid geometry: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, PlanningError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except HelirodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
