"""Command-line front end.

Subcommands: demo, trial, rank-dist, dof-sweep, sum-rate.  All output is
deterministic given the full flag set (seed included).  Exit statuses:
0 success, 1 usage error, 2 configuration/feasibility error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .errors import ConfigurationError, NumericalFailureError
from .metrics import (
    dof_sweep,
    fit_slope,
    rank_distribution,
    run_trial,
    sum_rate_curve,
)
from .network import NetworkConfig
from .numerics import Tolerance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEMO_CONFIG = NetworkConfig(M=16, N=8, K=2, d=3)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2
    # for configuration errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--M", type=int, required=True, help="BS antennas")
    p.add_argument("--N", type=int, required=True, help="MS antennas")
    p.add_argument("--K", type=int, required=True, help="users per cell")
    p.add_argument("--d", type=int, required=True, help="streams per user")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--leakage-tol", type=float, default=1e-8)


def build_parser() -> _Parser:
    parser = _Parser(prog="ia3", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("demo", parents=[], help="run the 16/8/2/3 showcase config")
    _add_common_flags(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("trial", help="one end-to-end trial, JSON report")
    _add_config_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("rank-dist", help="Monte Carlo precoder rank histogram")
    _add_config_flags(p)
    _add_common_flags(p)
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_rank_dist)

    p = sub.add_parser("dof-sweep", help="best IA DoF vs orthogonal baseline per M")
    p.add_argument("--M-min", type=int, default=5)
    p.add_argument("--M-max", type=int, default=32)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_dof_sweep)

    p = sub.add_parser("sum-rate", help="sum rate vs SNR with fitted slope")
    _add_config_flags(p)
    _add_common_flags(p)
    p.add_argument("--snr", type=float, nargs="+", required=True,
                   help="SNR points in dB")
    p.set_defaults(func=cmd_sum_rate)

    return parser


def _tolerance(args) -> Tolerance:
    return Tolerance(relative_rank_tol=args.rank_tol,
                     leakage_tol=args.leakage_tol)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_demo(args) -> int:
    try:
        report = run_trial(DEMO_CONFIG, args.seed, _tolerance(args))
    except NumericalFailureError as exc:
        name = "leakage-check" if "leakage" in str(exc) else "numerical-check"
        _emit(args, f"FAILED: {name}: {exc}\n")
        return EXIT_NUMERICAL
    dims = ",".join(str(v) for v in report.per_bs_interference_dim)
    lines = [
        f"eta={report.eta_achieved}, dims=[{dims}], "
        f"decodable={'true' if report.decodable else 'false'}",
        f"max_ici_leakage={max(report.per_bs_ici_leakage):.3e}",
        f"max_iui_leakage={max(report.per_user_iui_leakage):.3e}",
    ]
    failing = None
    if any(v != 9 for v in report.per_bs_interference_dim):
        failing = "interference-dimension-check"
    elif max(report.per_bs_ici_leakage + report.per_user_iui_leakage) > \
            args.leakage_tol:
        failing = "leakage-check"
    elif not report.decodable:
        failing = "decodability-check"
    if failing:
        lines.append(f"FAILED: {failing}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if failing is None else EXIT_NUMERICAL


def cmd_trial(args) -> int:
    config = NetworkConfig(M=args.M, N=args.N, K=args.K, d=args.d)
    report = run_trial(config, args.seed, _tolerance(args))
    _emit(args, report.to_json() + "\n")
    return EXIT_OK


def cmd_rank_dist(args) -> int:
    config = NetworkConfig(M=args.M, N=args.N, K=args.K, d=args.d)
    hist = rank_distribution(config, args.trials, args.seed, _tolerance(args))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["user_i", "user_j", "rank", "count"])
    for (i, j) in sorted(hist):
        for rank in sorted(hist[(i, j)]):
            writer.writerow([i, j, rank, hist[(i, j)][rank]])
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_dof_sweep(args) -> int:
    rows = dof_sweep(args.M_min, args.M_max)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["M", "best_K", "best_N", "best_d", "ia_dof",
                     "orthogonal_dof"])
    below = 0
    for row in rows:
        writer.writerow([row.M, row.best_K, row.best_N, row.best_d,
                         row.ia_dof, row.orthogonal_dof])
        if row.ia_dof < row.orthogonal_dof:
            below += 1
    buf.write(f"# ia_below_orthogonal={below}\n")
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_sum_rate(args) -> int:
    config = NetworkConfig(M=args.M, N=args.N, K=args.K, d=args.d)
    curve = sum_rate_curve(config, args.seed, args.snr, _tolerance(args))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["snr_db", "sum_rate_bits"])
    for snr_db, rate in curve:
        writer.writerow([f"{snr_db:.10g}", f"{rate:.10g}"])
    if len(curve) >= 2:
        buf.write(f"# slope={fit_slope(curve):.10g}\n")
    _emit(args, buf.getvalue())
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
