"""Command-line entry point: ``abslab <subcommand> ...``.

Exit status is 0 when every requested check passes, 1 on a verification
failure, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import sys

from . import __version__
from .enumeration import EnumSpec, enumerate_trees, count_trees
from .extremal import (
    BudgetError,
    GammaStarSpec,
    PLUS4_OFFSET,
    brute_force_min,
    brute_force_min_gamma_p,
    construct_gamma_star,
    gamma_np_lower_bound,
    gamma_star_edge_counts,
    is_gamma_star_member,
    max_order,
    plus4_np_bound,
    dumps17,
)
from .indices import IndexKind, index_value
from .tree import TreeFormatError, canonical_code, edge_type_counts, format_tree, pendent_count, read_tree
from .verify import run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _stamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return dt.datetime.now(dt.timezone.utc).replace(microsecond=0).isoformat()


def _with_stamp(payload: dict, args) -> dict:
    stamp = _stamp(args)
    return payload if stamp is None else {"generated_at": stamp, **payload}


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _check_order(n: int, args) -> None:
    cap = max_order(args.budget)
    if n > cap:
        raise UsageError(f"--n {n} exceeds the order budget {cap} (raise with --budget or ABSLAB_BUDGET, max 20)")


# -- subcommands ---------------------------------------------------------------------


def cmd_index(args, out) -> int:
    tree = read_tree(args.file)
    out.write(f"{index_value(tree, IndexKind(args.kind)):.17g}\n")
    return EXIT_OK


def cmd_enum(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    _check_order(args.n, args)
    spec = EnumSpec(args.n, args.pendent, args.max_degree)
    if args.count_only:
        out.write(f"{count_trees(spec)}\n")
        return EXIT_OK
    first = True
    for tree in enumerate_trees(spec):
        if not first:
            out.write("\n")
        out.write(format_tree(tree))
        first = False
    return EXIT_OK


def cmd_search(args, out) -> int:
    if args.n is None:
        cert = brute_force_min_gamma_p(args.pendent, workers=args.workers, max_p=args.max_p)
    else:
        cert = brute_force_min(args.n, args.pendent, workers=args.workers, budget=args.budget)
    if args.format == "csv":
        out.write(_csv([cert.csv_row()]))
    elif args.format == "text":
        out.write(f"family {cert.family} params {json.dumps(cert.parameters)}\n")
        out.write(f"candidates {cert.candidates}\nminimum {cert.minimum:.17g}\nminimizers {len(cert.minimizers)}\n")
        if cert.bound_value is not None:
            out.write(f"bound {cert.bound_value:.17g} matches {cert.bound_matches}\n")
        failed = sorted(
            {name for row in cert.property_report["minimizers"] for name, c in row["checks"].items() if not c["passed"]}
        )
        if not cert.property_report.get("in_bound_range", True):
            out.write("audits not applicable (n < 3p - 2)\n")
        else:
            out.write(f"audits {'passed' if not failed else 'failed: ' + ', '.join(failed)}\n")
    else:
        out.write(dumps17(_with_stamp(cert.to_dict(), args)) + "\n")
    report = cert.property_report
    audits_ok = report["all_passed"] or not report.get("in_bound_range", True)
    ok = cert.bound_matches is not False and audits_ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_construct(args, out) -> int:
    spec = GammaStarSpec.from_order(args.n, args.pendent)
    _check_order(spec.n, args)
    trees = list(construct_gamma_star(spec))
    if args.format == "json":
        payload = [{"code": canonical_code(t).hex(), "edges": [list(e) for e in t.edges]} for t in trees]
        out.write(dumps17({"n": spec.n, "p": spec.p, "t": spec.t, "members": payload}) + "\n")
    else:
        out.write("\n".join(format_tree(t) for t in trees))
    return EXIT_OK


def cmd_member(args, out) -> int:
    tree = read_tree(args.file)
    reasons = []
    if tree.order != args.n:
        reasons.append(f"order {tree.order} != {args.n}")
    if pendent_count(tree) != args.pendent:
        reasons.append(f"pendent count {pendent_count(tree)} != {args.pendent}")
    if not reasons and not is_gamma_star_member(tree):
        if args.n < 3 * args.pendent - 2 or args.pendent < 3:
            reasons.append("parameters outside p >= 3, n >= 3p - 2")
        else:
            want = gamma_star_edge_counts(args.n, args.pendent)
            got = edge_type_counts(tree)
            reasons.append(f"max degree {tree.max_degree}, edge types {_fmt_counts(got)} (family needs {_fmt_counts(want)})")
    if reasons:
        out.write("not a member: " + "; ".join(reasons) + "\n")
        return EXIT_FAIL
    out.write("member\n")
    return EXIT_OK


def _fmt_counts(c: dict) -> str:
    return "{" + ", ".join(f"({i},{j}):{k}" for (i, j), k in sorted(c.items())) + "}"


def cmd_bounds(args, out) -> int:
    edge = gamma_np_lower_bound(args.n, args.pendent)
    plus4 = plus4_np_bound(args.n, args.pendent)
    row = {
        "n": args.n,
        "p": args.pendent,
        "t": args.n - 3 * args.pendent + 2,
        "edge_count_bound": edge,
        "printed_formula_value": plus4,
        "difference": plus4 - edge,
        "expected_difference": PLUS4_OFFSET,
    }
    if args.format == "csv":
        out.write(_csv([{k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in row.items()}]))
    elif args.format == "text":
        out.write(f"edge-count bound  {edge:.17g}\n+4/sqrt6 form     {plus4:.17g}\ndifference        {plus4 - edge:.17g}\n")
    else:
        out.write(dumps17(_with_stamp(row, args)) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    report = run_suites(args.suite, seed=args.seed, workers=args.workers)
    if args.format == "text":
        stamp = _stamp(args)
        if stamp:
            out.write(f"# generated {stamp}\n")
        for section, checks in report["sections"].items():
            out.write(f"[{section}]\n")
            for c in checks:
                margin = "" if c["margin"] is None else f"  margin={c['margin']:.6g}"
                out.write(f"  {c['status'].upper():<13} {c['name']}{margin}\n")
        s = report["summary"]
        out.write(f"summary: {s['pass']} pass, {s['fail']} fail, {s['expected_fail']} expected_fail, {s['info']} info\n")
    else:
        out.write(dumps17(_with_stamp(report, args)) + "\n")
    return EXIT_OK if report["ok"] else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abslab", description="ABS index of trees: search, construction and verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=None, default=None):
        p.add_argument("--budget", type=int, default=None, help="maximum tree order (default 18, or $ABSLAB_BUDGET)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--no-timestamp", action="store_true", help="omit the generation timestamp")
        if formats:
            p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("index", help="index value of a tree file")
    p.add_argument("--kind", choices=[k.value for k in IndexKind], default="abs")
    p.add_argument("file")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("enum", help="enumerate non-isomorphic trees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pendent", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--count-only", action="store_true")
    common(p)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("search", help="exhaustive ABS minimum (omit --n for the any-order class)")
    p.add_argument("--n", type=int)
    p.add_argument("--pendent", type=int, required=True)
    p.add_argument("--max-p", type=int, default=8)
    common(p, ["json", "csv", "text"], "json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", help="members of the max-degree-3 extremal family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pendent", type=int, required=True)
    common(p, ["text", "json"], "text")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("member", help="test a tree file for family membership")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pendent", type=int, required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("bounds", help="edge-count bound next to the +4/sqrt6 closed form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pendent", type=int, required=True)
    common(p, ["json", "csv", "text"], "json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=["lemmas", "transforms", "bounds", "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    common(p, ["json", "text"], "text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except TreeFormatError as exc:
        print(f"abslab: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"abslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, BudgetError, ValueError) as exc:
        print(f"abslab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
