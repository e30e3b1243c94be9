"""Command line interface.

Subcommands: ci, ci-diff, simulate, fit-gld.  Exit codes: 0 success,
2 usage, 3 data validation, 4 estimation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import api
from .errors import EstimationError, HistciError, ValidationError
from .gld import FitConfig
from .grouped import from_csv
from .piecewise import Method
from .simulate import results_csv, run_table

EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_ESTIMATION = 4


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be inside (0, 1), got {text!r}")
    return value


def _method(text: str) -> Method:
    try:
        return Method.parse(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_grouped(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return from_csv(fh)
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}") from None


def _print_interval(result: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(result, indent=2))
        return
    pct = 100.0 * result["level"]
    print(f"method:           {result['method']}")
    print(f"p:                {result['p']}")
    print(f"point estimate:   {result['point']}")
    print(f"density estimate: {result['f_hat']}")
    print(f"{pct:g}% interval:     [{result['lower']}, {result['upper']}]")
    print(f"width:            {result['width']}")
    print(f"n:                {result['n']}")


def _cmd_ci(args) -> int:
    gd = _read_grouped(args.input)
    result = api.estimate_result(
        gd,
        args.method,
        args.p,
        args.level,
        n_override=args.n_override,
        unbounded_tail=args.unbounded_tail,
    )
    _print_interval(result, args.json)
    return 0


def _cmd_ci_diff(args) -> int:
    paths = args.input
    if len(paths) != 2:
        raise ValidationError("ci-diff needs exactly two --input files")
    methods = args.method
    if len(methods) == 1:
        methods = methods * 2
    if len(methods) != 2:
        raise ValidationError("give --method once (both groups) or twice (per group)")
    overrides = args.n_override or []
    if len(overrides) not in (0, 2):
        raise ValidationError("give --n-override twice (one per group) or not at all")
    gd_x, gd_y = _read_grouped(paths[0]), _read_grouped(paths[1])
    result = api.diff_result(
        gd_x,
        gd_y,
        methods[0],
        methods[1],
        args.p,
        args.level,
        n_override_x=overrides[0] if overrides else None,
        n_override_y=overrides[1] if overrides else None,
        unbounded_tail=args.unbounded_tail,
    )
    if args.json:
        print(json.dumps(result, indent=2))
        return 0
    pct = 100.0 * result["level"]
    print(f"methods:          {result['x']['method']} vs {result['y']['method']}")
    print(f"p:                {result['p']}")
    print(f"difference:       {result['point']}")
    print(f"{pct:g}% interval:     [{result['lower']}, {result['upper']}]")
    print(f"width:            {result['width']}")
    return 0


def _cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{args.config}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{args.config}: invalid JSON: {exc}") from None
    cells = api.expand_config_cells(config)
    workers = int(config.get("workers", 1))

    def progress(i, total, row):
        status = "failed" if row.result is None else f"coverage={row.result.coverage:.3f}"
        print(
            f"[{i}/{total}] {row.cell.dist.family} n={row.cell.n} p={row.cell.p} "
            f"method={row.cell.method.value} bins={row.cell.policy.describe()} {status}",
            file=sys.stderr,
        )

    rows = run_table(cells, workers=workers, progress=progress)
    text = results_csv(rows)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return 0


def _cmd_fit_gld(args) -> int:
    gd = _read_grouped(args.input)
    result = api.fit_result(gd, FitConfig())
    if args.json:
        print(json.dumps(result, indent=2))
        return 0
    params = result["params"]
    print(f"lambda:     {params['lambda']}")
    print(f"eta:        {params['eta']}")
    print(f"alpha:      {params['alpha']}")
    print(f"beta:       {params['beta']}")
    print(f"residual:   {result['residual']}")
    print(f"iterations: {result['iterations']}")
    print(f"converged:  {result['converged']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histci",
        description="Quantile point and interval estimates from grouped (binned) data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ci = sub.add_parser("ci", help="confidence interval for one quantile")
    ci.add_argument("--input", required=True, help="CSV with columns lower,upper,freq[,mean]")
    ci.add_argument("--method", required=True, type=_method,
                    help="histogram | linear | polygon | gld")
    ci.add_argument("--p", required=True, type=_probability, help="quantile level in (0,1)")
    ci.add_argument("--level", type=_probability, default=0.95, help="confidence level")
    ci.add_argument("--unbounded-tail", action="store_true",
                    help="treat the final bin as an exponential tail (linear method)")
    ci.add_argument("--n-override", type=float, default=None,
                    help="true sample size when frequencies are relative")
    ci.add_argument("--json", action="store_true", help="machine-readable output")
    ci.set_defaults(func=_cmd_ci)

    diff = sub.add_parser("ci-diff", help="interval for a difference of quantiles")
    diff.add_argument("--input", action="append", required=True,
                      help="CSV file; give twice, one per group")
    diff.add_argument("--method", action="append", required=True, type=_method,
                      help="method; give once for both groups or twice")
    diff.add_argument("--p", required=True, type=_probability)
    diff.add_argument("--level", type=_probability, default=0.95)
    diff.add_argument("--unbounded-tail", action="store_true")
    diff.add_argument("--n-override", action="append", type=float,
                      help="true sample size per group; give twice")
    diff.add_argument("--json", action="store_true")
    diff.set_defaults(func=_cmd_ci_diff)

    sim = sub.add_parser("simulate", help="run a coverage simulation table")
    sim.add_argument("--config", required=True, help="JSON experiment configuration")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.set_defaults(func=_cmd_simulate)

    fit = sub.add_parser("fit-gld", help="percentile-matching GLD fit")
    fit.add_argument("--input", required=True)
    fit.add_argument("--json", action="store_true")
    fit.set_defaults(func=_cmd_fit_gld)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except HistciError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
