"""Command-line front end: single engagements and parameter sweeps.

    turret-guidance run <config> [--out DIR] [--no-plots]
    turret-guidance sweep <config> --param NAME --values v1,v2,... [--parallel] [--out DIR]
    turret-guidance --version

Exit codes: 0 success (capture status is data, not an error), 1 config
error, 2 no closure at the initial instant, 3 runaway engagement.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import (ScenarioConfig, SweepSpec, apply_sweep_value,
                     parse_config)
from .errors import InvalidConfigError, NoClosureError, RunawayError
from .plots import write_command_svg, write_error_svg, write_trajectory_svg
from .sim import (CaptureVerdict, GuidanceSettings, TrajectoryLog,
                  initial_engagement_state, run_engagement)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CLOSURE = 2
EXIT_RUNAWAY = 3

SUMMARY_COLUMNS = ("value", "captured", "t_end", "r_end", "pointing_err_end",
                   "total_cost", "peak_u1", "peak_u2", "error")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_trajectory_csv(log: TrajectoryLog, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(log.columns)
        for row in log.rows:
            writer.writerow([_fmt(v) for v in row])


def read_trajectory_csv(path):
    """Re-parse an emitted trajectory CSV into (columns, rows of floats)."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        columns = tuple(next(reader))
        rows = [tuple(float(v) for v in row) for row in reader]
    return columns, rows


def _verdict_line(verdict: CaptureVerdict, log: TrajectoryLog) -> str:
    total_cost = log.rows[-1][log.columns.index("j_running")] if log.rows else 0.0
    peak_u1 = max((abs(r[log.columns.index("u1")]) for r in log.rows),
                  default=0.0)
    peak_u2 = max((abs(r[log.columns.index("u2")]) for r in log.rows),
                  default=0.0)
    return (f"captured={_fmt(verdict.captured)}"
            f" t_end={verdict.t_end:.6g}"
            f" r_end={verdict.r_end:.6g}"
            f" pointing_err_end={verdict.pointing_err_end:.6g}"
            f" normalized_range={verdict.normalized_range:.6g}"
            f" normalized_orientation={verdict.normalized_orientation:.6g}"
            f" total_cost={total_cost:.6g}"
            f" peak_u1={peak_u1:.6g}"
            f" peak_u2={peak_u2:.6g}")


def _execute(config: ScenarioConfig):
    initial = initial_engagement_state(config)
    settings = GuidanceSettings.from_scenario(config)
    return run_engagement(initial, settings, config)


def run_single(config: ScenarioConfig, out_dir, plots: bool = True) -> int:
    """Run one engagement, write its artifacts, print the verdict line."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        log, verdict = _execute(config)
    except NoClosureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CLOSURE
    except RunawayError as exc:
        if exc.log is not None and exc.log.rows:
            write_trajectory_csv(exc.log, out_dir / "trajectory.csv")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNAWAY
    write_trajectory_csv(log, out_dir / "trajectory.csv")
    if plots and log.rows:
        write_trajectory_svg(log, config.r_max, config.fov,
                             out_dir / "trajectory.svg")
        write_command_svg(log, out_dir / "commands.svg")
        write_error_svg(log, config.r_max, config.fov,
                        out_dir / "errors.svg")
    print(_verdict_line(verdict, log))
    return EXIT_OK


def _sweep_one(job):
    """Run one sweep point; returns its summary row (tolerates hard errors)."""
    config, parameter, value, run_dir = job
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    point = apply_sweep_value(config, parameter, value)
    row = {"value": value, "captured": False, "t_end": float("nan"),
           "r_end": float("nan"), "pointing_err_end": float("nan"),
           "total_cost": float("nan"), "peak_u1": float("nan"),
           "peak_u2": float("nan"), "error": ""}
    try:
        log, verdict = _execute(point)
    except NoClosureError:
        row["error"] = "no_closure"
        return row
    except RunawayError as exc:
        if exc.log is not None and exc.log.rows:
            write_trajectory_csv(exc.log, run_dir / "trajectory.csv")
        row["error"] = "runaway"
        return row
    write_trajectory_csv(log, run_dir / "trajectory.csv")
    idx_u1 = log.columns.index("u1")
    idx_u2 = log.columns.index("u2")
    idx_j = log.columns.index("j_running")
    row.update(
        captured=verdict.captured,
        t_end=verdict.t_end,
        r_end=verdict.r_end,
        pointing_err_end=verdict.pointing_err_end,
        total_cost=log.rows[-1][idx_j] if log.rows else 0.0,
        peak_u1=max((abs(r[idx_u1]) for r in log.rows), default=0.0),
        peak_u2=max((abs(r[idx_u2]) for r in log.rows), default=0.0),
    )
    return row


def run_sweep(config: ScenarioConfig, spec: SweepSpec, out_dir) -> int:
    """Run one engagement per sweep value and write the summary table."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (config, spec.parameter, value,
         out_dir / "runs" / f"{spec.parameter}_{i:03d}")
        for i, value in enumerate(spec.values)
    ]
    if spec.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(job) for job in jobs]
    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in SUMMARY_COLUMNS])
    for row in rows:
        status = row["error"] or ("captured" if row["captured"] else "missed")
        print(f"{spec.parameter}={row['value']:g}: {status}")
    print(f"summary: {summary_path}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turret-guidance",
        description="Cooperative pursuer-turret guidance simulator",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a single engagement")
    run_p.add_argument("config", help="scenario config file")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--no-plots", action="store_true",
                       help="write the trajectory CSV only")

    sweep_p = sub.add_parser("sweep", help="run a parameter sweep")
    sweep_p.add_argument("config", help="scenario config file")
    sweep_p.add_argument("--param", required=True,
                         help="parameter to sweep (alpha, v_t, a_t, "
                              "theta_t0, r_max, fov)")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated list of values")
    sweep_p.add_argument("--parallel", action="store_true",
                         help="run sweep points in parallel processes")
    sweep_p.add_argument("--out", default=None, help="output directory")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = parse_config(args.config)
    except InvalidConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    stem = Path(args.config).stem
    if args.command == "run":
        out_dir = args.out if args.out else f"{stem}_out"
        return run_single(config, out_dir, plots=not args.no_plots)

    try:
        values = tuple(float(v) for v in args.values.split(",") if v.strip())
        spec = SweepSpec(parameter=args.param, values=values,
                         parallel=args.parallel)
    except (ValueError, InvalidConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out if args.out else f"{stem}_sweep"
    return run_sweep(config, spec, out_dir)


if __name__ == "__main__":
    sys.exit(main())
