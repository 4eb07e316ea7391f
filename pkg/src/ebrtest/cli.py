"""Command-line interface: run the test, the power study, or query TW1.

Exit codes encode the statistical decision so shell pipelines can branch
on it:

    0  null hypothesis not rejected
    1  usage error
    2  data or configuration error
    3  null hypothesis rejected
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dgp import DgpSpec
from .ebr import DegenerateInputError, EbrConfig, ebr_test
from .ingest import IngestSpec, ParseError, ingest
from .meta import __version__, design_fingerprint
from .power import (
    DEFAULT_M_VALUES,
    DEFAULT_N_VALUES,
    FIGURE_CASES,
    ExperimentGrid,
    emit_figure_data,
    run_grid,
    write_report_csv,
    write_report_json,
)
from .tracy_widom import TableConstructionError, load_or_build_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REJECT = 3

WORKERS_ENV_VAR = "EBRTEST_WORKERS"

_DEFAULT_PHIS = (0.2, 0.5, 0.8)
_DEFAULT_RHOS = (0.2, 0.5, 0.8)


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fresh_seed() -> int:
    return int.from_bytes(os.urandom(8), "big")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> _Parser:
    parser = _Parser(prog="ebrtest", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_test = sub.add_parser("test", help="run the randomness test on a residual file")
    p_test.add_argument("--input", required=True, help="delimited text file with the residual matrix")
    p_test.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    p_test.add_argument("--seed", type=int, default=None,
                        help="padding seed; generated and printed when omitted")
    p_test.add_argument("--paddings", type=int, default=1,
                        help="odd number of independent padding draws (default 1)")
    p_test.add_argument("--orientation", choices=["units-rows", "periods-rows"],
                        default="units-rows", help="row meaning in the input file")
    p_test.add_argument("--delimiter", default=",", help="cell delimiter (default ',')")
    p_test.add_argument("--header", action="store_true", help="skip the first line")
    p_test.add_argument("--row-labels", action="store_true", help="skip the first column")
    p_test.add_argument("--format", choices=["json", "text"], default="text", help="output format")

    p_power = sub.add_parser(
        "power",
        help="run the Monte Carlo power study",
        epilog=f"Default worker count comes from ${WORKERS_ENV_VAR} when set.",
    )
    p_power.add_argument("--case", required=True,
                         choices=["ar1", "linear-csd", "nonmono", "iid", "all"])
    p_power.add_argument("--reps", type=int, default=1000, help="replications per cell (default 1000)")
    p_power.add_argument("--seed", type=int, default=None,
                         help="master seed; generated and printed when omitted")
    p_power.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    p_power.add_argument("--out", default="ebr-power-results", help="output directory")
    p_power.add_argument("--phi", type=float, nargs="+", default=None,
                         help="ar1 coefficients (default 0.2 0.5 0.8)")
    p_power.add_argument("--rho", type=float, nargs="+", default=None,
                         help="equicorrelation strengths (default 0.2 0.5 0.8)")
    p_power.add_argument("--n", type=int, nargs="+", default=list(DEFAULT_N_VALUES),
                         help="cross-sectional sizes (default 30 50 100)")
    p_power.add_argument("--m", type=int, nargs="+", default=list(DEFAULT_M_VALUES),
                         help="time-period counts (default 15 20 50)")
    p_power.add_argument("--include-size", action="store_true",
                         help="also run the iid rows at the same shapes")
    p_power.add_argument("--workers", type=int, default=None,
                         help=f"parallel worker processes (default ${WORKERS_ENV_VAR} or 1)")
    p_power.add_argument("--svg", action="store_true", help="also render SVG line charts")

    p_tw = sub.add_parser("tw", help="evaluate the Tracy-Widom (beta=1) distribution")
    group = p_tw.add_mutually_exclusive_group(required=True)
    group.add_argument("--cdf", type=float, help="evaluate the CDF at this point")
    group.add_argument("--sf", type=float, help="evaluate the survival function at this point")
    group.add_argument("--quantile", type=float, help="invert the CDF at this probability")

    return parser


def _load_table():
    return load_or_build_table()


def cmd_test(args) -> int:
    if args.paddings < 1 or args.paddings % 2 == 0:
        print("ebrtest test: error: --paddings must be a positive odd integer", file=sys.stderr)
        return EXIT_USAGE
    if not 0.0 < args.alpha < 1.0:
        print("ebrtest test: error: --alpha must be in (0, 1)", file=sys.stderr)
        return EXIT_USAGE
    seed = args.seed if args.seed is not None else _fresh_seed()
    orientation = "units_rows" if args.orientation == "units-rows" else "periods_rows"
    try:
        spec = IngestSpec(
            path=args.input,
            delimiter=args.delimiter,
            has_header=args.header,
            has_row_labels=args.row_labels,
            orientation=orientation,
        )
        E = ingest(spec)
        table = _load_table()
        cfg = EbrConfig(seed=seed, alpha=args.alpha, padding_reps=args.paddings)
        result = ebr_test(E, cfg, table)
    except (ParseError, DegenerateInputError, OSError, TableConstructionError, ValueError) as exc:
        print(f"ebrtest test: error: {exc}", file=sys.stderr)
        return EXIT_DATA

    if args.format == "json":
        print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    else:
        d = "reject" if result.reject else "do not reject"
        print(f"input        : {args.input} ({E.n_units} units x {E.m_periods} periods)")
        print(f"k            : {result.k}")
        print(f"lambda1      : {result.lambda1!r}")
        print(f"s_stat       : {result.s_stat!r}")
        print(f"p_value      : {result.p_value!r}")
        print(f"alpha        : {args.alpha!r}")
        print(f"decision     : {d}")
        print(f"seed         : {seed}")
        print(f"paddings     : {args.paddings}")
        print(f"version      : {__version__} (design {design_fingerprint()})")
    return EXIT_REJECT if result.reject else EXIT_OK


def _power_specs(args) -> list[DgpSpec]:
    case = args.case
    if args.phi is not None and case not in ("ar1", "all"):
        raise UsageError(f"--phi is only valid with --case ar1/all, not {case}")
    if args.rho is not None and case not in ("linear-csd", "all"):
        raise UsageError(f"--rho is only valid with --case linear-csd/all, not {case}")
    phis = tuple(args.phi) if args.phi is not None else _DEFAULT_PHIS
    rhos = tuple(args.rho) if args.rho is not None else _DEFAULT_RHOS
    specs: list[DgpSpec] = []
    if case in ("ar1", "all"):
        specs.extend(DgpSpec("ar1", phi=phi) for phi in phis)
    if case in ("linear-csd", "all"):
        specs.extend(DgpSpec("linear_csd", rho=rho) for rho in rhos)
    if case in ("nonmono", "all"):
        specs.append(DgpSpec("nonmono"))
    if case == "iid":
        specs.append(DgpSpec("iid"))
    elif args.include_size:
        specs.append(DgpSpec("iid"))
    return specs


class UsageError(Exception):
    pass


def cmd_power(args) -> int:
    seed = args.seed if args.seed is not None else _fresh_seed()
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        specs = _power_specs(args)
        grid = ExperimentGrid(
            dgp_specs=tuple(specs),
            master_seed=seed,
            n_values=tuple(args.n),
            m_values=tuple(args.m),
            replications=args.reps,
            alpha=args.alpha,
        )
    except (UsageError, ValueError) as exc:
        print(f"ebrtest power: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        table = _load_table()
    except TableConstructionError as exc:
        print(f"ebrtest power: error: {exc}", file=sys.stderr)
        return EXIT_DATA

    report = run_grid(grid, table, workers=workers)
    out = Path(args.out)
    write_report_csv(report, out / "power_report.csv")
    write_report_json(report, out / "power_report.json")
    emitted = []
    for case in FIGURE_CASES:
        if any(r.kind == case for r in report.rows):
            emitted.extend(emit_figure_data(report, case, out, svg=args.svg))

    print(f"seed: {seed}")
    print(f"wrote: {out / 'power_report.csv'}")
    print(f"wrote: {out / 'power_report.json'}")
    for p in emitted:
        print(f"wrote: {p}")
    print()
    header = f"{'case':<22} {'n':>4} {'m':>4} {'power':>7} {'stderr':>7}"
    print(header)
    print("-" * len(header))
    for r in report.rows:
        label = r.kind if r.param_name is None else f"{r.kind}({r.param_name}={r.param_value:g})"
        print(f"{label:<22} {r.n:>4} {r.m:>4} {r.power:>7.3f} {r.mc_stderr:>7.3f}")
    return EXIT_OK


def cmd_tw(args) -> int:
    try:
        table = _load_table()
    except TableConstructionError as exc:
        print(f"ebrtest tw: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.quantile is not None:
        if not 0.0 < args.quantile < 1.0:
            print("ebrtest tw: error: --quantile must be in (0, 1)", file=sys.stderr)
            return EXIT_USAGE
        value = table.quantile(args.quantile)
    elif args.cdf is not None:
        value = table.cdf(args.cdf)
    else:
        value = table.sf(args.sf)
    print(repr(float(value)))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "test":
        return cmd_test(args)
    if args.command == "power":
        return cmd_power(args)
    return cmd_tw(args)


if __name__ == "__main__":
    sys.exit(main())
