"""Command-line harness: run identity suites or evaluate a single expression.

Exit status is 0 when every check passes, 1 when any check fails and 2 for
configuration or expression errors.
"""

from __future__ import annotations

import argparse
import sys

from .expr import ExpressionError, evaluate_text
from .suite import FAMILY_GROUPS, ConfigError, SuiteConfig, all_families, report_line, run_suite, summary_table

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _name_list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser():
    p = argparse.ArgumentParser(prog="yangflag", description="Exact verification of Yangian minor and flag identities.")
    p.add_argument("--n", type=int, default=3, help="size of the Yangian (default 3)")
    p.add_argument("--order", type=int, default=4, help="truncation order N in u^-1 (default 4)")
    p.add_argument("--gamma", type=_int_list, default=None, help="composition of n, e.g. 2,1 (default 1,...,1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eval-k", type=_int_list, default=(1, 2, 3), help="matrix block sizes for skew-field points")
    p.add_argument("--families", type=_name_list, default=None,
                   help="comma-separated families or groups (" + ", ".join(FAMILY_GROUPS) + ")")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--strict-windows", action="store_true",
                   help="fail checks whose verified window is narrower than the requested order")
    p.add_argument("--points", type=int, default=20, help="evaluation points per skew-field check")
    p.add_argument("--report", default="yangflag-report.jsonl",
                   help="JSON Lines output path; '-' writes it to stdout and the table to stderr")
    p.add_argument("--timings", action="store_true", help="include elapsed times (breaks byte-identical reports)")
    p.add_argument("--allow-large", action="store_true", help="lift the n <= 4, order <= 6 limits")
    p.add_argument("--expr", help="evaluate an expression such as 'inv(t[1;1](u)) * t[1;2](u)' and exit")
    p.add_argument("--list-families", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_families:
        for group, names in FAMILY_GROUPS.items():
            print(f"{group}: {', '.join(names)}")
        return EXIT_PASS
    if args.expr is not None:
        try:
            value = evaluate_text(args.expr, args.n, args.order)
        except ExpressionError as exc:
            print(f"yangflag: {exc}", file=sys.stderr)
            print(f"  {args.expr}\n  {' ' * exc.pos}^", file=sys.stderr)
            return EXIT_CONFIG
        print(value)
        return EXIT_PASS
    try:
        cfg = SuiteConfig(n=args.n, order=args.order, gamma=args.gamma, seed=args.seed, eval_k=args.eval_k,
                          families=args.families, jobs=args.jobs, strict_windows=args.strict_windows,
                          points=args.points, allow_large=args.allow_large)
    except ConfigError as exc:
        print(f"yangflag: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    to_stdout = args.report == "-"
    out = sys.stdout if to_stdout else open(args.report, "w", encoding="utf-8")
    try:
        reports = []
        for rep in run_suite(cfg):
            out.write(report_line(rep, cfg.seed, args.timings) + "\n")
            reports.append(rep)
    finally:
        if not to_stdout:
            out.close()
    table = summary_table(reports, args.timings)
    print(table, file=sys.stderr if to_stdout else sys.stdout)
    failed = any(r.status == "fail" for r in reports)
    if not to_stdout:
        print(f"report: {args.report} ({len(reports)} lines)")
    return EXIT_FAIL if failed else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
