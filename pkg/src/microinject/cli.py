"""Command-line interface.

Subcommands: ``verify`` (randomized property suites), ``simulate``
(closed-loop scenario runs from a JSON config) and ``free-response``
(closed-form vs. integrated torque-free motion).

Exit codes: 0 success, 1 verification/numeric failure, 2 usage or config
error.  Reports and artifact paths go to stdout; diagnostics go to stderr
at the verbosity selected by the MICROINJECT_LOG environment variable
(error, info or debug).
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import List, Optional

from . import report
from .config import ScenarioConfig, load_config
from .dynamics import (
    MassParams,
    NonFiniteState,
    StageState,
    ZERO_FORCE,
    ZERO_TORQUE,
    free_response,
    integrate,
)
from .algebra2d import Vec2
from .sim import run_closed_loop
from .verify import SUITE_NAMES, run_suite

log = logging.getLogger("microinject")

FREE_RESPONSE_MAX_ERROR = 1e-5

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    raw = os.environ.get("MICROINJECT_LOG", "error")
    level = _LOG_LEVELS.get(raw)
    if level is None:
        print(
            f"microinject: ignoring MICROINJECT_LOG={raw!r} "
            "(expected error, info or debug)",
            file=sys.stderr,
        )
        level = logging.ERROR
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(message)s"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microinject",
        description="Stage model, controller variants and verification "
                    "suites for a robotic cell-injection system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify", help="run a randomized property suite and report residuals"
    )
    p_verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p_verify.add_argument("--trials", type=int, default=None,
                          help="ensemble size override (default per suite)")
    p_verify.add_argument("--seed", type=int, default=0)

    p_sim = sub.add_parser(
        "simulate", help="run closed-loop scenarios from a JSON config"
    )
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--svg", action="store_true",
                       help="also write plot_<variant>.svg charts")

    p_free = sub.add_parser(
        "free-response",
        help="emit closed-form vs. RK4 torque-free trajectories as CSV",
    )
    for name in ("--mx", "--my", "--mp", "--x0", "--y0", "--xd0", "--yd0",
                 "--t-end", "--dt"):
        p_free.add_argument(name, type=float, required=True)
    p_free.add_argument("--out", required=True)
    return parser


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.trials is not None and args.trials <= 0:
        print("microinject: --trials must be > 0", file=sys.stderr)
        return 2
    if args.seed < 0:
        print("microinject: --seed must be >= 0", file=sys.stderr)
        return 2
    results = run_suite(args.suite, args.seed, args.trials)
    all_passed = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        line = (
            f"[{status}] {res.name:<42} worst {res.worst:.3e}  "
            f"bound {res.bound:.3e}  trials {res.trials}"
        )
        if res.detail:
            line += f"  ({res.detail})"
        print(line)
        all_passed = all_passed and res.passed
    print(f"suite {args.suite}: {'all properties passed' if all_passed else 'FAILURES detected'}")
    return 0 if all_passed else 1


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config: ScenarioConfig = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"microinject: config error: {exc}", file=sys.stderr)
        return 2
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        print(f"microinject: cannot create output dir: {exc}", file=sys.stderr)
        return 2

    any_diverged = False
    variant_metrics = {}
    for variant in config.variants:
        log.info("running variant %s", variant.value)
        rows, metrics = run_closed_loop(
            variant, config.masses, config.frame, config.impedance,
            config.trajectory, config.membrane, config.fed,
            config.t_end, config.dt,
        )
        trace_path = os.path.join(args.out, f"trace_{variant.value}.csv")
        report.write_trace_csv(trace_path, rows)
        print(trace_path)
        if args.svg:
            svg_path = os.path.join(args.out, f"plot_{variant.value}.svg")
            report.write_trace_svg(svg_path, rows, f"variant {variant.value}")
            print(svg_path)
        variant_metrics[variant.value] = report.metrics_to_dict(metrics)
        if metrics.diverged:
            log.error("variant %s diverged after %d samples",
                      variant.value, metrics.samples)
            any_diverged = True

    metrics_path = os.path.join(args.out, "metrics.json")
    report.write_metrics_json(metrics_path, {
        "dt": config.dt,
        "t_end": config.t_end,
        "seed": config.seed,
        "variants": variant_metrics,
    })
    print(metrics_path)
    return 1 if any_diverged else 0


def _cmd_free_response(args: argparse.Namespace) -> int:
    try:
        masses = MassParams(args.mx, args.my, args.mp)
        if not args.dt > 0.0:
            raise ValueError("dt must be > 0")
        if not args.t_end >= 0.0:
            raise ValueError("t-end must be >= 0")
        for name in ("x0", "y0", "xd0", "yd0"):
            if not math.isfinite(getattr(args, name)):
                raise ValueError(f"{name} must be finite")
    except ValueError as exc:
        print(f"microinject: invalid parameters: {exc}", file=sys.stderr)
        return 2

    s0 = StageState(Vec2(args.x0, args.y0), Vec2(args.xd0, args.yd0))
    try:
        samples = integrate(
            masses, s0, lambda _t: ZERO_TORQUE, lambda _t: ZERO_FORCE,
            args.t_end, args.dt,
        )
    except NonFiniteState as exc:
        print(f"microinject: integration diverged: {exc}", file=sys.stderr)
        return 1
    rows = []
    max_err = 0.0
    for t, state in samples:
        ref = free_response(masses, args.x0, args.y0, args.xd0, args.yd0, t)
        err_x = abs(state.q.a0 - ref.q.a0)
        err_y = abs(state.q.a1 - ref.q.a1)
        max_err = max(max_err, err_x, err_y)
        rows.append((t, ref.q.a0, ref.q.a1, state.q.a0, state.q.a1, err_x, err_y))
    report.write_csv(args.out, report.FREE_RESPONSE_HEADER, rows)
    print(args.out)
    print(f"max_error {report.fmt(max_err)}")
    return 0 if max_err <= FREE_RESPONSE_MAX_ERROR else 1


def main(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    return _cmd_free_response(args)


if __name__ == "__main__":
    sys.exit(main())
