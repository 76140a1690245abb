"""Small, file-backed table of Fano threefold invariants.

Records are keyed by (picard_rank, minus_k_cubed, h12).  A second file holds
range facts: coarse statements such as "every rank-4 example has h12 <= 1",
used to explain why a numerical candidate has no match at all.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

__all__ = [
    "FanoRecord",
    "RangeFact",
    "FanoDatabase",
    "DatabaseError",
    "HEADER",
    "RANGE_HEADER",
    "load",
    "load_ranges",
    "default_database",
    "lookup",
    "range_facts",
]

HEADER = ("picard_rank", "minus_k_cubed", "h12", "id", "description", "source")
RANGE_HEADER = ("picard_rank", "when_h12", "k3_allowed", "h12_allowed", "source")


class DatabaseError(ValueError):
    pass


@dataclass(frozen=True)
class FanoRecord:
    picard_rank: int
    minus_k_cubed: int
    h12: int
    id: str
    description: str
    source: str

    def __post_init__(self) -> None:
        if self.picard_rank < 1:
            raise ValueError(f"picard_rank must be >= 1, got {self.picard_rank}")
        if self.minus_k_cubed <= 0 or self.minus_k_cubed % 2:
            raise ValueError(f"minus_k_cubed must be a positive even integer, got {self.minus_k_cubed}")
        if self.h12 < 0:
            raise ValueError(f"h12 must be nonnegative, got {self.h12}")
        if not self.id:
            raise ValueError("record id must be nonempty")

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.picard_rank, self.minus_k_cubed, self.h12)


def _parse_set(text: str, what: str) -> Optional[frozenset[int]]:
    """'' -> None (unrestricted); 'a..b' -> range; 'a|b|c' -> explicit set."""
    text = text.strip()
    if not text:
        return None
    if ".." in text:
        lo, hi = text.split("..", 1)
        return frozenset(range(int(lo), int(hi) + 1))
    try:
        return frozenset(int(x) for x in text.split("|"))
    except ValueError:
        raise DatabaseError(f"bad {what} value {text!r}") from None


@dataclass(frozen=True)
class RangeFact:
    """If rho matches (and h12 equals ``when_h12`` when set), then k3 and h12 lie in the allowed sets."""

    picard_rank: int
    when_h12: Optional[int]
    k3_allowed: Optional[frozenset[int]]
    h12_allowed: Optional[frozenset[int]]
    source: str

    def applies(self, h12: int) -> bool:
        return self.when_h12 is None or self.when_h12 == h12

    def admits(self, k3: int, h12: int) -> bool:
        if not self.applies(h12):
            return True
        if self.k3_allowed is not None and k3 not in self.k3_allowed:
            return False
        if self.h12_allowed is not None and h12 not in self.h12_allowed:
            return False
        return True


class FanoDatabase:
    def __init__(self, records: Iterable[FanoRecord] = (), ranges: Iterable[RangeFact] = ()) -> None:
        self.records: tuple[FanoRecord, ...] = tuple(records)
        self.ranges: tuple[RangeFact, ...] = tuple(ranges)
        seen: set[tuple] = set()
        for r in self.records:
            full = r.key + (r.id,)
            if full in seen:
                raise DatabaseError(f"duplicate record {full}")
            seen.add(full)
        self._index: dict[tuple[int, int, int], list[FanoRecord]] = {}
        for r in self.records:
            self._index.setdefault(r.key, []).append(r)
        self._by_id = {r.id: r for r in self.records}

    def __len__(self) -> int:
        return len(self.records)

    def lookup(self, rho: int, k3: int, h12: int) -> list[FanoRecord]:
        return list(self._index.get((rho, k3, h12), ()))

    def get(self, record_id: str) -> Optional[FanoRecord]:
        return self._by_id.get(record_id)

    def range_facts(self, rho: int) -> list[RangeFact]:
        return [f for f in self.ranges if f.picard_rank == rho]

    def violates_ranges(self, rho: int, k3: int, h12: int) -> Optional[RangeFact]:
        """First range fact that rules out the triple, or None."""
        for f in self.range_facts(rho):
            if not f.admits(k3, h12):
                return f
        return None

    def merged(self, other: FanoDatabase) -> FanoDatabase:
        return FanoDatabase(self.records + other.records, self.ranges + other.ranges)


def _read_rows(text: str, header: tuple[str, ...], origin: str) -> list[tuple[int, dict]]:
    if not text.strip():
        return []
    reader = csv.reader(io.StringIO(text))
    rows: list[tuple[int, dict]] = []
    first = True
    for row in reader:
        line = reader.line_num
        if not row or all(not x.strip() for x in row):
            continue
        if first:
            first = False
            if tuple(x.strip() for x in row) != header:
                raise DatabaseError(f"{origin}:{line}: expected header {','.join(header)}")
            continue
        if len(row) != len(header):
            raise DatabaseError(f"{origin}:{line}: expected {len(header)} fields, got {len(row)}: {row!r}")
        rows.append((line, dict(zip(header, row))))
    return rows


def parse_records(text: str, origin: str = "<string>") -> list[FanoRecord]:
    records = []
    seen: dict[tuple, int] = {}
    for line, d in _read_rows(text, HEADER, origin):
        try:
            rec = FanoRecord(
                picard_rank=int(d["picard_rank"]),
                minus_k_cubed=int(d["minus_k_cubed"]),
                h12=int(d["h12"]),
                id=d["id"].strip(),
                description=d["description"].strip(),
                source=d["source"].strip(),
            )
        except ValueError as exc:
            raise DatabaseError(f"{origin}:{line}: {exc}") from None
        full = rec.key + (rec.id,)
        if full in seen:
            raise DatabaseError(f"{origin}:{line}: duplicate record {full} (first on line {seen[full]})")
        seen[full] = line
        records.append(rec)
    return records


def parse_ranges(text: str, origin: str = "<string>") -> list[RangeFact]:
    facts = []
    for line, d in _read_rows(text, RANGE_HEADER, origin):
        try:
            when = d["when_h12"].strip()
            facts.append(
                RangeFact(
                    picard_rank=int(d["picard_rank"]),
                    when_h12=int(when) if when else None,
                    k3_allowed=_parse_set(d["k3_allowed"], "k3_allowed"),
                    h12_allowed=_parse_set(d["h12_allowed"], "h12_allowed"),
                    source=d["source"].strip(),
                )
            )
        except (ValueError, DatabaseError) as exc:
            raise DatabaseError(f"{origin}:{line}: {exc}") from None
    return facts


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DatabaseError(f"cannot read {path}: {exc.strerror or exc}") from None


def _ranges_path_for(path: Path) -> Path:
    return path.with_name(path.stem + "_ranges" + path.suffix)


def load(path: Union[str, Path], ranges: Union[str, Path, None] = None) -> FanoDatabase:
    """Load records from ``path``; range facts from ``ranges`` or a sibling ``<stem>_ranges.csv`` if present."""
    path = Path(path)
    records = parse_records(_read_text(path), str(path))
    rpath = Path(ranges) if ranges is not None else _ranges_path_for(path)
    facts = parse_ranges(_read_text(rpath), str(rpath)) if (ranges is not None or rpath.exists()) else []
    return FanoDatabase(records, facts)


def load_ranges(path: Union[str, Path]) -> list[RangeFact]:
    return parse_ranges(_read_text(path), str(path))


def _bundled(name: str) -> str:
    return resources.files("fanoloc").joinpath("data", name).read_text(encoding="utf-8")


def default_database() -> FanoDatabase:
    """Bundled seed table, or the file named by FANODB_PATH."""
    override = os.environ.get("FANODB_PATH")
    if override:
        return load(override)
    return FanoDatabase(
        parse_records(_bundled("fanodb.csv"), "fanodb.csv"),
        parse_ranges(_bundled("fanodb_ranges.csv"), "fanodb_ranges.csv"),
    )


def lookup(rho: int, k3: int, h12: int, db: Optional[FanoDatabase] = None) -> list[FanoRecord]:
    return (db or default_database()).lookup(rho, k3, h12)


def range_facts(rho: int, db: Optional[FanoDatabase] = None) -> list[RangeFact]:
    return (db or default_database()).range_facts(rho)


def records_to_csv(records: Iterable[FanoRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow([r.picard_rank, r.minus_k_cubed, r.h12, r.id, r.description, r.source])
    return buf.getvalue()
