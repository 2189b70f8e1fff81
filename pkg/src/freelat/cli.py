"""Command-line entry point.

Data goes to stdout (JSON by default, CSV on request); messages go to
stderr.  Exit codes: 0 success, 2 validation error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import ResourceLimitError, ValidationError
from .harness import (
    SurveyConfig,
    congruence_density,
    dyadic_bounds,
    emit_report,
    euler_product,
    report_rows,
    run_survey,
)
from .lattice import GramLattice, slope_profile
from .pairs import PAIR_CSV_HEADER, in_s, make_pair, pair_csv_row, second_height
from .projective import (
    freeness,
    pair_freeness,
    parse_point,
    tangent_lattice,
)


def _emit(payload):
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _load_gram(text):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    else:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            if os.path.exists(text):
                with open(text, "r", encoding="utf-8") as handle:
                    obj = json.load(handle)
            else:
                raise ValidationError(f"--gram is neither JSON nor a file: {text!r}")
    return GramLattice.from_json(obj)


def _cmd_slopes(args):
    lattice = _load_gram(args.gram)
    _emit(slope_profile(lattice).to_json())
    return 0


def _cmd_freeness(args):
    point = parse_point(args.point)
    result = tangent_lattice(point)
    profile = slope_profile(result.lattice)
    _emit(
        {
            "point": str(point),
            "freeness": freeness(point),
            "log_height": result.log_height,
            "degenerate": result.log_height == 0.0,
            "slopes": [float(s) for s in profile.slopes],
            "semistable": profile.is_semistable,
        }
    )
    return 0


def _cmd_pair(args):
    p1 = parse_point(args.p1)
    p2 = parse_point(args.p2)
    pair = make_pair(p1, p2)
    if args.format == "csv":
        if args.C is None or args.delta is None:
            raise ValidationError("--format csv needs --C and --delta")
        sys.stdout.write(PAIR_CSV_HEADER + "\n")
        sys.stdout.write(pair_csv_row(pair, args.C, args.delta) + "\n")
        return 0
    pf = pair_freeness(p1, p2) if pair.log_h1 + pair.log_h2 > 0 else None
    member = None
    if args.C is not None and args.delta is not None:
        member = in_s(pair, args.C, args.delta)
    _emit(
        {
            "x1": str(pair.x1),
            "x2": str(pair.x2),
            "W": pair.w,
            "dist_sq": [pair.dist_sq.numerator, pair.dist_sq.denominator],
            "c": pair.c,
            "second_height": second_height(pair),
            "logH1": pair.log_h1,
            "logH2": pair.log_h2,
            "pair_freeness": None if pf is None else pf.direct,
            "pair_freeness_formula": None if pf is None else pf.formula,
            "in_S": member,
            "C": args.C,
            "delta": args.delta,
        }
    )
    return 0


def _cmd_survey(args):
    conf = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            conf = json.load(handle)
    n = args.n if args.n is not None else conf.get("n")
    c_bound = args.C if args.C is not None else conf.get("C")
    delta = args.delta if args.delta is not None else conf.get("delta")
    if n is None or c_bound is None or delta is None:
        raise ValidationError("survey needs --n, --C and --delta (flags or config)")
    if args.bmax is not None:
        bounds = dyadic_bounds(args.bmin, args.bmax)
    elif "bounds" in conf:
        bounds = conf["bounds"]
    else:
        raise ValidationError("survey needs --bmax or a config with bounds")
    config = SurveyConfig.make(
        n=n,
        c_bound=str(c_bound),
        delta=str(delta),
        bounds=bounds,
        thread_hint=conf.get("threadHint", 0),
    )
    records = run_survey(config, threads=args.threads)
    rows = report_rows(records, config)
    if args.out:
        emit_report(records, config, args.format, args.out)
    if args.format == "csv":
        from .harness import REPORT_COLUMNS, _cell

        sys.stdout.write(",".join(REPORT_COLUMNS) + "\n")
        for row in rows:
            sys.stdout.write(",".join(_cell(row[c]) for c in REPORT_COLUMNS) + "\n")
    else:
        _emit(rows)
    return 0


def _cmd_density(args):
    est = congruence_density(args.n, args.p, args.bound)
    _emit(
        {
            "n": args.n,
            "prime": est.prime,
            "sample_bound": args.bound,
            "fraction": est.fraction,
            "expected": est.expected,
            "pair_count": est.pair_count,
            "congruent_count": est.congruent_count,
        }
    )
    return 0


def _cmd_euler(args):
    result = euler_product(args.n, args.cutoff)
    _emit(
        {
            "n": result.n,
            "cutoff": result.cutoff,
            "value": result.value,
            "tail_bound": result.tail_bound,
        }
    )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="freelat",
        description="Exact lattice slopes, freeness of rational points, and "
        "congruent-pair counting surveys.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slopes", help="slope profile of a Gram matrix")
    p.add_argument("--gram", required=True,
                   help='JSON {"rank": m, "gram": [[num, den], ...]} or a file path')
    p.set_defaults(func=_cmd_slopes)

    p = sub.add_parser("freeness", help="freeness of a point of P^n")
    p.add_argument("--point", required=True, help="coordinates x0:x1:...:xn")
    p.set_defaults(func=_cmd_freeness)

    p = sub.add_parser("pair", help="congruence/distance invariants of a point pair")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--C", default=None)
    p.add_argument("--delta", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_pair)

    p = sub.add_parser("survey", help="dyadic pair-counting survey")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--C", default=None)
    p.add_argument("--delta", default=None)
    p.add_argument("--bmax", type=int, default=None)
    p.add_argument("--bmin", type=int, default=1024)
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: hardware parallelism)")
    p.add_argument("--config", default=None, help="JSON file with survey fields")
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("density", help="empirical congruent-pair density mod p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("euler", help="partial Euler product with tail bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.set_defaults(func=_cmd_euler)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
