"""Command-line front end.

Exit status: 0 on success, 1 when a check fails or a result is
inconsistent, 2 on usage, parse or schema errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fanodb
from .enumerator import (
    Bounds,
    IdentityFailure,
    case_specs,
    classify_case,
    classify_no_interior_points,
    classify_two_components,
    load_rules,
)
from .equivariant import (
    anticanonical_degree,
    contribution_ledger,
    lefschetz_sum,
    localization_consistency,
    localization_total,
)
from .geometry import ConfigError, load_config
from .invariants import betti_numbers, hodge_numbers
from .report import (
    Report,
    Check,
    case_report,
    ledger_report,
    no_interior_report,
    records_report,
    render,
    two_component_report,
    values_report,
)
from .symbolic import RationalFunction

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one-line diagnostic instead of the usage dump
        raise UsageError(message)


def _bounds(text: Optional[str]) -> Bounds:
    if not text:
        return Bounds()
    try:
        return Bounds.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _database() -> fanodb.FanoDatabase:
    try:
        return fanodb.default_database()
    except (OSError, fanodb.DatabaseError) as exc:
        raise UsageError(f"cannot load database: {exc}") from None


def _load(path: str):
    try:
        return load_config(path)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> Report:
    config = _load(args.config)
    total = lefschetz_sum(config)
    one = RationalFunction(1)
    lef_detail = f"sum = {total}"
    if total != one:
        lef_detail += f"; residual {total} - 1 = {total - one}"
    p0, p1 = localization_total(config, 0), localization_total(config, 1)
    h = hodge_numbers(config)
    checks = [
        Check("lefschetz sum = 1", total == one, lef_detail),
        Check("localization p=0, p=1 vanish", localization_consistency(config), f"p=0: {p0}; p=1: {p1}"),
        Check("hodge h11 = h11_alt", h.consistent, f"h11 = {h.h11}, h11_alt = {h.h11_alt}"),
    ]
    issues = config.structural_issues()
    if config.reduced_space is not None:
        checks.append(Check("structure", not issues, "; ".join(issues) or "adjunction, normal degree, Euler squares"))
    values = [("-K^3", _k3_text(config)), ("h11", h.h11), ("h12", h.h12)]
    return ledger_report(f"Verification of {Path(args.config).name}", contribution_ledger(config), checks, values)


def _k3_text(config) -> str:
    try:
        return str(anticanonical_degree(config))
    except ArithmeticError as exc:
        return f"undefined ({exc})"


def cmd_invariants(args) -> Report:
    config = _load(args.config)
    h = hodge_numbers(config)
    betti = betti_numbers(config)
    k3 = _k3_text(config)
    db = _database()
    problems = []
    matches = []
    if not h.consistent:
        problems.append(f"inconsistent: h11 = {h.h11} but the second formula gives {h.h11_alt}")
    elif not k3.lstrip("-").isdigit():
        problems.append("inconsistent: -K^3 is not an integer")
    else:
        k = int(k3)
        fact = db.violates_ranges(h.h11, k, h.h12)
        matches = [r.id for r in db.lookup(h.h11, k, h.h12)]
        if fact is not None:
            problems.append(f"inconsistent: outside the stored range for Picard rank {h.h11} ({fact.source})")
        elif not matches:
            problems.append(f"inconsistent: no known Fano threefold with (rho, -K^3, h12) = ({h.h11}, {k}, {h.h12})")
    values = [
        ("h11", h.h11),
        ("h11_alt", h.h11_alt),
        ("h12", h.h12),
        ("-K^3", k3),
        ("picard_rank", h.h11 if h.consistent else "undefined"),
        ("b2", betti["b2"]),
        ("b3", betti["b3"]),
        ("torsion_free", str(h.torsion_free).lower()),
        ("db_matches", ", ".join(matches)),
    ]
    return values_report(f"Invariants of {Path(args.config).name}", values, ok=not problems, notes=problems)


def cmd_enumerate(args) -> Report:
    bounds = _bounds(args.bounds)
    try:
        specs = case_specs(args.case, bounds)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rules = load_rules()
    db = _database()
    results = [classify_case(s, db, rules, args.verify_all) for s in specs]
    return case_report(results, rules, bounds)


def cmd_classify(args) -> Report:
    bounds = _bounds(args.bounds)
    db = _database()
    if args.two_components:
        return two_component_report(classify_two_components(bounds, db))
    return no_interior_report(classify_no_interior_points(bounds, db, verify_all=args.verify_all))


def cmd_db(args) -> Report:
    if args.db_command == "lookup":
        db = _database()
        recs = db.lookup(args.rho, args.k3, args.h12)
        notes = [] if recs else [f"no known Fano threefold with (rho, -K^3, h12) = ({args.rho}, {args.k3}, {args.h12})"]
        return records_report("Database lookup", recs, ok=bool(recs), notes=notes)
    try:
        imported = fanodb.load(args.csv)
        merged = _database().merged(imported)
    except (OSError, fanodb.DatabaseError) as exc:
        raise UsageError(str(exc)) from None
    notes = [f"imported {len(imported)} records; merged database has {len(merged)}"]
    if args.output:
        Path(args.output).write_text(fanodb.records_to_csv(merged.records), encoding="utf-8")
        notes.append(f"written to {args.output}; set FANODB_PATH to use it")
    return records_report("Database import", imported.records, notes=notes)


def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("md", "csv"), default="md", help="report format")

    p = _Parser(prog="fanoloc", description="Fixed-point calculus for semifree C* actions on Fano threefolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[fmt], help="check the identities for a configuration file")
    v.add_argument("config")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", parents=[fmt], help="Hodge numbers, -K^3 and Betti numbers")
    i.add_argument("config")
    i.set_defaults(func=cmd_invariants)

    e = sub.add_parser("enumerate", parents=[fmt], help="enumerate one case without interior points")
    e.add_argument("--case", type=int, required=True)
    e.add_argument("--bounds", help="overrides, e.g. class_bound=20,alpha_bound=100")
    e.add_argument("--verify-all", action="store_true", help="re-check one configuration per unmatched cell")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", parents=[fmt], help="reproduce a classification table")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--two-components", action="store_true")
    mode.add_argument("--no-interior", action="store_true")
    c.add_argument("--bounds")
    c.add_argument("--verify-all", action="store_true")
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("db", help="query or extend the Fano database")
    dsub = d.add_subparsers(dest="db_command", required=True, parser_class=_Parser)
    lk = dsub.add_parser("lookup", parents=[fmt])
    lk.add_argument("--rho", type=int, required=True)
    lk.add_argument("--k3", type=int, required=True)
    lk.add_argument("--h12", type=int, required=True)
    lk.set_defaults(func=cmd_db)
    im = dsub.add_parser("import", parents=[fmt])
    im.add_argument("csv")
    im.add_argument("--output", help="write the merged database here")
    im.set_defaults(func=cmd_db)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        report = args.func(args)
    except UsageError as exc:
        print(f"fanoloc: error: {exc}", file=err)
        return EXIT_USAGE
    except IdentityFailure as exc:
        print(f"fanoloc: identity re-check failed: {exc}", file=err)
        return EXIT_FAIL
    text = render(report, args.format)
    out.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())
