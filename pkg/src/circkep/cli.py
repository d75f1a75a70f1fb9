"""Command-line interface.

Subcommands: simulate, classify, sweep, equilibria, chart, verify.  All
output is plot-ready CSV or JSON on stdout (or --out); exit codes follow the
documented table (0 success, 1 usage error, 2 integration failure,
3 undetermined classification).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance as _acceptance
from .charts import (
    ChartId,
    chart_field,
    chart_from_reduced,
    reduced_from_chart,
    select_chart,
)
from .equilibria import regime_equilibria
from .integrator import IntegrationConfig, Termination, integrate
from .model import DampingParams, ReducedState, reduced_field
from .regime import run_chart_for, simulate_outcome, standard_ic, sweep
from .serialize import (
    chart_trajectory_csv_lines,
    reduced_trajectory_csv_lines,
    write_lines,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRATION = 2
EXIT_UNDETERMINED = 3


class _CliError(Exception):
    pass


def _load_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            for raw in f:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise _CliError(f"bad config line: {raw.strip()!r}")
                key, val = line.split("=", 1)
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise _CliError(f"cannot read config file: {exc}")
    return values


def _resolve(args, key, cast, default):
    """Flag > config file > built-in default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    cfg = getattr(args, "_config_values", {})
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError:
            raise _CliError(f"bad config value for {key}: {cfg[key]!r}")
    return default


def _parse_params(args) -> DampingParams:
    if args.alpha is None or args.beta is None or args.delta is None:
        raise _CliError("--alpha, --beta and --delta are required")
    try:
        return DampingParams(args.alpha, args.beta, args.delta)
    except ValueError as exc:
        raise _CliError(str(exc))


def _parse_ic(text) -> ReducedState:
    parts = text.split(",")
    if len(parts) != 4:
        raise _CliError("--ic needs four comma-separated values: r,p,l,theta")
    try:
        r, p, l, theta = (float(v) for v in parts)
        return ReducedState(r=r, p=p, l=l, theta=theta, t=0.0)
    except ValueError as exc:
        raise _CliError(f"bad --ic: {exc}")


def _parse_grid(text):
    """Comma list '0.25,0.75,...' or linspace 'lo:hi:n'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _CliError("grid ranges are lo:hi:count")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise _CliError(f"bad grid range: {exc}")
        if n < 1:
            raise _CliError("grid count must be at least 1")
        if n == 1:
            return [lo]
        step = (hi - lo) / (n - 1)
        return [lo + step * i for i in range(n)]
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"bad grid list: {exc}")


def _out_stream(args):
    if getattr(args, "out", None):
        return open(args.out, "w", encoding="utf-8", newline="\n")
    return None


def _emit(args, lines):
    f = _out_stream(args)
    if f is None:
        write_lines(sys.stdout, lines)
    else:
        with f:
            write_lines(f, lines)


def _cmd_simulate(args) -> int:
    params = _parse_params(args)
    ic = _parse_ic(args.ic)
    rtol = _resolve(args, "rtol", float, 1e-9)
    atol = _resolve(args, "atol", float, 1e-12)
    tau_end = _resolve(args, "tau_end", float, 1e3)
    frame = args.frame
    cfg = IntegrationConfig(rtol=rtol, atol=atol, stop_time=tau_end)
    if frame == "reduced":
        traj = integrate(reduced_field(params), ic.as_vector(), cfg)
        lines = reduced_trajectory_csv_lines(traj, params)
    else:
        chart = ChartId(args.chart) if args.chart else select_chart(params)
        c0 = chart_from_reduced(chart, params, ic)
        traj = integrate(chart_field(chart, params), c0.as_vector(), cfg)
        lines = chart_trajectory_csv_lines(traj, chart, params)
    _emit(args, lines)
    if traj.termination in (Termination.STOP_TIME, Termination.TERMINAL_EVENT):
        return EXIT_OK
    print(f"integration ended early: {traj.termination.value}", file=sys.stderr)
    return EXIT_INTEGRATION


def _cmd_classify(args) -> int:
    params = _parse_params(args)
    ic = _parse_ic(args.ic) if args.ic else standard_ic()
    rtol = _resolve(args, "rtol", float, 1e-9)
    atol = _resolve(args, "atol", float, 1e-12)
    tau_end = _resolve(args, "tau_end", float, 1e4)
    cfg = IntegrationConfig(rtol=rtol, atol=atol, stop_time=tau_end)
    report = simulate_outcome(params, ic, cfg)
    text = json.dumps(report.to_json_dict(), indent=None if args.json else 2)
    _emit(args, [text])
    return EXIT_OK if report.determinate else EXIT_UNDETERMINED


def _cmd_sweep(args) -> int:
    if args.alphas is None or args.betas is None or args.delta is None:
        raise _CliError("--alphas, --betas and --delta are required")
    alphas = _parse_grid(args.alphas)
    betas = _parse_grid(args.betas)
    rtol = _resolve(args, "rtol", float, 1e-9)
    atol = _resolve(args, "atol", float, 1e-12)
    tau_end = _resolve(args, "tau_end", float, 1e4)
    jobs = args.jobs
    if jobs is None:
        env = os.environ.get("CIRCKEP_JOBS", "").strip()
        jobs = int(env) if env else (os.cpu_count() or 1)
    cfg = IntegrationConfig(rtol=rtol, atol=atol, stop_time=tau_end)
    try:
        diagram = sweep(alphas, betas, args.delta, cfg, jobs=jobs)
    except ValueError as exc:
        raise _CliError(str(exc))
    _emit(args, diagram.to_csv_lines())
    return EXIT_OK


def _cmd_equilibria(args) -> int:
    params = _parse_params(args)
    reports = [r.to_json_dict() for r in regime_equilibria(params)]
    text = json.dumps(reports, indent=None if args.json else 2)
    _emit(args, [text])
    return EXIT_OK


def _cmd_chart(args) -> int:
    params = _parse_params(args)
    chart = ChartId(args.chart) if args.chart else run_chart_for(params)
    result = {"chart": chart.value}
    if args.coords:
        parts = [float(v) for v in args.coords.split(",")]
        if len(parts) != 3:
            raise _CliError("--coords needs three comma-separated values")
        from .charts import ChartState

        c = ChartState(chart, parts[0], parts[1], parts[2])
        s = reduced_from_chart(chart, params, c)
        result["reduced"] = {"r": s.r, "p": s.p, "l": s.l, "theta": s.theta}
    elif args.ic:
        ic = _parse_ic(args.ic)
        c = chart_from_reduced(chart, params, ic)
        back = reduced_from_chart(chart, params, c)
        result["coords"] = dict(zip(("c1", "c2", "c3"), c.coords()))
        result["roundtrip_max_err"] = max(
            abs(back.r - ic.r), abs(back.p - ic.p), abs(back.l - ic.l)
        )
    else:
        raise _CliError("chart needs --ic (reduced -> chart) or --coords (chart -> reduced)")
    _emit(args, [json.dumps(result, indent=2)])
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = _acceptance.run_checks(
        name_filter=args.filter, quick=args.quick, jobs=args.jobs
    )
    width = max(len(r.name) for r in results) if results else 10
    all_pass = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        all_pass &= r.passed
        print(f"{mark}  {r.name:<{width}}  [{r.seconds:6.2f}s]  {r.detail}")
    if not results:
        print("no checks matched the filter", file=sys.stderr)
        return EXIT_USAGE
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if all_pass else 1


def _add_param_flags(p):
    p.add_argument("--alpha", type=float, help="drag velocity exponent offset (>= 0)")
    p.add_argument("--beta", type=float, help="drag radius exponent (>= 0)")
    p.add_argument("--delta", type=float, help="drag strength (> 0)")


def _add_common_run_flags(p):
    p.add_argument("--rtol", type=float, default=None,
                   help="relative tolerance (default 1e-9)")
    p.add_argument("--atol", type=float, default=None,
                   help="absolute tolerance (default 1e-12)")
    p.add_argument("--config", default=None,
                   help="key=value config file (flags take precedence)")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circkep",
        description="Damped-Kepler collision laboratory: simulate, classify "
        "and sweep power-law drag regimes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "simulate",
        help="integrate one initial condition and dump a trajectory CSV",
    )
    _add_param_flags(p)
    p.add_argument("--ic", required=True, help="initial state r,p,l,theta")
    p.add_argument("--frame", choices=("reduced", "chart"), default="reduced",
                   help="integrate in reduced coordinates or the regime chart "
                        "(default: reduced)")
    p.add_argument("--chart", choices=[c.value for c in ChartId], default=None,
                   help="override the chart (default: the regime chart; "
                        "frame=chart only)")
    p.add_argument("--tau-end", type=float, default=None, dest="tau_end",
                   help="end of the active clock (default 1e3)")
    _add_common_run_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "classify",
        help="run one initial condition to its asymptotics and report JSON",
    )
    _add_param_flags(p)
    p.add_argument("--ic", default=None, help="initial state r,p,l,theta "
                   "(default 1,0,0.9,0)")
    p.add_argument("--tau-end", type=float, default=None, dest="tau_end",
                   help="chart-time budget (default 1e4)")
    p.add_argument("--json", action="store_true",
                   help="compact single-line JSON (default: pretty-printed)")
    _add_common_run_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser(
        "sweep",
        help="predicted vs observed regime over an (alpha, beta) grid",
    )
    p.add_argument("--alphas", help="comma list or lo:hi:count")
    p.add_argument("--betas", help="comma list or lo:hi:count")
    p.add_argument("--delta", type=float, help="drag strength (> 0)")
    p.add_argument("--tau-end", type=float, default=None, dest="tau_end",
                   help="chart-time budget per point (default 1e4)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default CIRCKEP_JOBS or all cores)")
    _add_common_run_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser(
        "equilibria",
        help="equilibrium locations, eigenvalues and stability for the regime",
    )
    _add_param_flags(p)
    p.add_argument("--json", action="store_true",
                   help="compact single-line JSON (default: pretty-printed)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--config", default=None, help="key=value config file")
    p.set_defaults(func=_cmd_equilibria)

    p = sub.add_parser(
        "chart",
        help="map a reduced state into chart coordinates (or back)",
    )
    _add_param_flags(p)
    p.add_argument("--ic", default=None, help="reduced state r,p,l,theta")
    p.add_argument("--coords", default=None, help="chart coordinates c1,c2,c3")
    p.add_argument("--chart", choices=[c.value for c in ChartId], default=None,
                   help="chart to use (default: the regime chart)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--config", default=None, help="key=value config file")
    p.set_defaults(func=_cmd_chart)

    p = sub.add_parser(
        "verify",
        help="run the acceptance checks and print a pass/fail table",
    )
    p.add_argument("--filter", default=None,
                   help="glob on check names, e.g. 'critical*'")
    p.add_argument("--quick", action="store_true",
                   help="only the sub-minute subset (default: all checks)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes for sweep-based checks")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map --help (0) through unchanged
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if getattr(args, "config", None):
            args._config_values = _load_config_file(args.config)
        else:
            args._config_values = {}
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
