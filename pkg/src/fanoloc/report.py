"""Report model shared by the markdown and CSV emitters.

A report is a list of sections, each a table over a subset of one fixed
column set.  Both emitters walk the same rows in the same order, so the two
formats carry identical content.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .enumerator import (
    Bounds,
    CaseResult,
    Candidate,
    Discrepancy,
    ExclusionRule,
    NoInteriorReport,
    TwoComponentReport,
    TwoComponentRow,
)
from .equivariant import ContributionLedger

COLUMNS: dict[str, str] = {
    "case": "case",
    "a": "a",
    "curve_classes": "curve classes",
    "genera": "genera",
    "alphas": "α⁺/α⁻",
    "e_minus": "e₋",
    "e_plus": "e₊",
    "minus_k3": "−K³",
    "h11": "h¹¹",
    "h12": "h¹²",
    "db_matches": "DB matches",
    "exclusion_id": "exclusion id",
    "shape": "shape",
    "verdict": "verdict",
    "solutions": "solutions",
    "reason": "reason",
    "count": "count",
    "cells": "cells",
    "multisets": "multisets",
    "kind": "kind",
    "subject": "subject",
    "component": "component",
    "lefschetz": "Lefschetz term",
    "deg_neg3": "λ⁻³",
    "deg_neg2": "λ⁻²",
    "deg_0": "λ⁰",
    "check": "check",
    "result": "result",
    "notes": "notes",
}

CANDIDATE_COLUMNS = (
    "case",
    "a",
    "curve_classes",
    "genera",
    "alphas",
    "e_minus",
    "e_plus",
    "minus_k3",
    "h11",
    "h12",
    "db_matches",
    "exclusion_id",
    "notes",
)


@dataclass(frozen=True)
class Section:
    key: str
    title: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]

    def __post_init__(self) -> None:
        bad = [c for c in self.columns if c not in COLUMNS]
        if bad:
            raise ValueError(f"unknown report columns {bad}")


@dataclass(frozen=True)
class Report:
    title: str
    preamble: tuple[str, ...] = ()
    sections: tuple[Section, ...] = ()
    ok: bool = True  # drives the exit status

    def section(self, key: str) -> Section:
        for s in self.sections:
            if s.key == key:
                return s
        raise KeyError(key)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


def render_md(report: Report) -> str:
    out = [f"# {report.title}", ""]
    for line in report.preamble:
        out.append(line)
    if report.preamble:
        out.append("")
    for sec in report.sections:
        out.append(f"## {sec.title}")
        out.append("")
        if not sec.rows:
            out.append("_none_")
            out.append("")
            continue
        out.append("| " + " | ".join(COLUMNS[c] for c in sec.columns) + " |")
        out.append("|" + "|".join("---" for _ in sec.columns) + "|")
        for row in sec.rows:
            cells = (_cell(row.get(c)).replace("|", "\\|") for c in sec.columns)
            out.append("| " + " | ".join(cells) + " |")
        out.append("")
    return "\n".join(out)


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", *COLUMNS])
    for sec in report.sections:
        for row in sec.rows:
            w.writerow([sec.key] + [_cell(row.get(c)) if c in sec.columns else "" for c in COLUMNS])
    return buf.getvalue()


def render(report: Report, fmt: str) -> str:
    if fmt == "md":
        return render_md(report)
    if fmt == "csv":
        return render_csv(report)
    raise ValueError(f"unknown format {fmt!r}; expected md or csv")


# candidate rows


def _cls(coords: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in coords) + ")"


def candidate_row(c: Candidate) -> dict:
    curves = c.configuration.interior_curves
    notes = list(c.notes)
    if c.alpha_splits > 1:
        notes.append(f"{c.alpha_splits} alpha splits, balanced one shown")
    return {
        "case": c.case_id,
        "a": c.a,
        "curve_classes": "+".join(_cls(k.coords) for k in c.curve_classes),
        "genera": "+".join(str(k.genus) for k in curves),
        "alphas": "+".join(f"{k.alpha_plus}/{k.alpha_minus}" for k in curves),
        "e_minus": _cls(c.e_min.coords),
        "e_plus": _cls(c.e_max.coords),
        "minus_k3": c.k3,
        "h11": c.h11,
        "h12": c.h12,
        "db_matches": ", ".join(c.db_matches),
        "exclusion_id": c.excluded_by or "",
        "notes": "; ".join(notes),
    }


def _bounds_line(b: Bounds) -> str:
    return (
        f"bounds: a <= {b.a_max}, class coords <= {b.class_bound}, "
        f"|alpha| <= {b.alpha_bound}, |Euler coords| <= {b.euler_bound}"
    )


def _case_sections(results: Sequence[CaseResult], rules: Sequence[ExclusionRule]) -> list[Section]:
    survivors = [candidate_row(c) for r in results for c in r.survivors]
    excluded = [candidate_row(c) for r in results for c in r.excluded]
    unmatched = [
        {
            "case": u.case_id,
            "a": u.a,
            "minus_k3": u.k3,
            "h11": u.h11,
            "h12": u.h12,
            "reason": u.reason,
            "cells": u.cells,
            "multisets": u.multisets,
            "notes": u.detail,
        }
        for r in results
        for u in r.unmatched
    ]
    used: dict[str, int] = {}
    for r in results:
        for c in r.candidates:
            if c.excluded_by:
                used[c.excluded_by] = used.get(c.excluded_by, 0) + 1
            for n in c.notes:
                if " drops " in n:
                    rid = n.split(" drops ")[0]
                    used.setdefault(rid, 0)
    cases = {r.spec.case for r in results}
    rule_rows = []
    for rule in rules:
        scope = dict(rule.where).get("case")
        if scope is not None and scope not in cases:
            continue
        rule_rows.append(
            {
                "exclusion_id": rule.id,
                "count": used.get(rule.id, 0),
                "reason": rule.citation,
                "notes": ("discrepancy: " + rule.discrepancy) if rule.discrepancy else "",
            }
        )
    notes = [{"case": r.spec.id, "notes": n} for r in results for n in r.notes]
    return [
        Section("survivor", "Survivors", CANDIDATE_COLUMNS, tuple(survivors)),
        Section("excluded", "Excluded by curated rules", CANDIDATE_COLUMNS, tuple(excluded)),
        Section(
            "database",
            "Excluded by the database filter",
            ("case", "a", "minus_k3", "h11", "h12", "reason", "cells", "multisets", "notes"),
            tuple(unmatched),
        ),
        Section("rule", "Curated rules", ("exclusion_id", "count", "reason", "notes"), tuple(rule_rows)),
        Section("case_note", "Case notes", ("case", "notes"), tuple(notes)),
    ]


def _discrepancy_section(items: Iterable) -> Section:
    rows = tuple({"kind": d.kind, "subject": d.subject, "notes": d.text} for d in items)
    return Section("discrepancy", "Discrepancies", ("kind", "subject", "notes"), rows)


def no_interior_report(rep: NoInteriorReport) -> Report:
    groups = tuple(
        {
            "minus_k3": g.k3,
            "h11": g.h11,
            "h12": g.h12,
            "a": g.a,
            "case": ",".join(g.cases),
            "db_matches": ", ".join(g.db_matches),
            "count": g.candidates,
        }
        for g in rep.groups
    )
    sections = [
        Section("group", "Surviving groups", ("minus_k3", "h11", "h12", "a", "case", "db_matches", "count"), groups),
        *_case_sections(rep.results, rep.rules),
        _discrepancy_section(rep.discrepancies),
    ]
    return Report(
        "Classification without interior isolated fixed points",
        (_bounds_line(rep.bounds),),
        tuple(sections),
    )


def case_report(results: Sequence[CaseResult], rules: Sequence[ExclusionRule], bounds: Bounds) -> Report:
    ids = ", ".join(r.spec.id for r in results)
    disc = []
    seen = set()
    for r in results:
        fired = {c.excluded_by for c in r.candidates} | {
            n.split(" drops ")[0] for c in r.candidates for n in c.notes if " drops " in n
        }
        for rule in rules:
            if rule.discrepancy and rule.id in fired and rule.id not in seen:
                seen.add(rule.id)
                disc.append(Discrepancy("rule", rule.id, rule.discrepancy))
    sections = _case_sections(results, rules) + [_discrepancy_section(disc)]
    return Report(f"Enumeration of case {ids}", (_bounds_line(bounds),), tuple(sections))


def _solution_summary(row: TwoComponentRow) -> str:
    groups: dict[tuple, list[str]] = {}
    for s in row.solutions:
        groups.setdefault((s.space, s.k3, s.db_matches), []).append(s.params)
    parts = []
    for (space, k3, ids), params in groups.items():
        head = f"{space} " if space else ""
        if len(params) <= 2:
            body = " / ".join(params)
        else:
            body = f"{len(params)} choices from {params[0]} to {params[-1]}"
        parts.append(f"{head}{body} -> -K^3={k3} [{', '.join(ids) or 'no record'}]".strip())
    return "; ".join(parts)


def two_component_report(rep: TwoComponentReport) -> Report:
    rows = tuple(
        {
            "shape": r.shape,
            "h11": r.h11,
            "h12": r.h12,
            "minus_k3": ", ".join(str(k) for k in r.k3),
            "db_matches": ", ".join(r.db_matches),
            "verdict": r.verdict,
            "solutions": _solution_summary(r),
            "reason": r.reason,
        }
        for r in rep.rows
    )
    sections = (
        Section(
            "shape",
            "Two fixed components",
            ("shape", "h11", "h12", "minus_k3", "db_matches", "verdict", "solutions", "reason"),
            rows,
        ),
        _discrepancy_section(rep.discrepancies),
    )
    return Report("Classification with exactly two fixed components", (_bounds_line(rep.bounds),), sections)


# verification ledger


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _value_section(values: Sequence[tuple[str, object]]) -> Section:
    rows = tuple({"subject": k, "result": _cell(v)} for k, v in values)
    return Section("value", "Values", ("subject", "result"), rows)


def ledger_report(
    title: str, ledger: ContributionLedger, checks: Sequence[Check], values: Sequence[tuple[str, object]] = ()
) -> Report:
    rows = [
        {
            "component": r.component,
            "lefschetz": str(r.lefschetz),
            "deg_neg3": str(r.localization.deg_neg3),
            "deg_neg2": str(r.localization.deg_neg2),
            "deg_0": str(r.localization.deg_0),
        }
        for r in ledger.rows
    ]
    tot = ledger.localization_total
    rows.append(
        {
            "component": "total",
            "lefschetz": str(ledger.lefschetz_total),
            "deg_neg3": str(tot.deg_neg3),
            "deg_neg2": str(tot.deg_neg2),
            "deg_0": str(tot.deg_0),
        }
    )
    check_rows = tuple(
        {"check": c.name, "result": "PASS" if c.passed else "FAIL", "notes": c.detail} for c in checks
    )
    ok = all(c.passed for c in checks)
    return Report(
        title,
        ("result: " + ("PASS" if ok else "FAIL"),),
        (
            Section("ledger", "Contribution ledger", ("component", "lefschetz", "deg_neg3", "deg_neg2", "deg_0"), tuple(rows)),
            Section("check", "Checks", ("check", "result", "notes"), check_rows),
            _value_section(values),
        ),
        ok=ok,
    )


def values_report(title: str, values: Sequence[tuple[str, object]], ok: bool = True, notes: Sequence[str] = ()) -> Report:
    return Report(title, tuple(notes), (_value_section(values),), ok=ok)


def records_report(title: str, records, ok: bool = True, notes: Sequence[str] = ()) -> Report:
    rows = tuple(
        {
            "h11": r.picard_rank,
            "minus_k3": r.minus_k_cubed,
            "h12": r.h12,
            "subject": r.id,
            "notes": r.description,
            "reason": r.source,
        }
        for r in records
    )
    return Report(
        title, tuple(notes), (Section("record", "Records", ("h11", "minus_k3", "h12", "subject", "notes", "reason"), rows),), ok=ok
    )
