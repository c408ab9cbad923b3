"""Load, validate, and filter raw publication and citation records.

Input formats
-------------
Publications arrive as line-delimited JSON, one record per line::

    {"pub_id": "p1", "year": 2009, "doc_type": "Article", "fields": ["F0"],
     "authors": [{"author_id": "a1",
                  "affiliations": [{"org_id": "o1", "city_id": "c1",
                                    "country": "NL", "lat": 52.2, "lon": 4.5}]}]}

Citations arrive as CSV with header ``citing_pub_id,cited_pub_id,citing_year``.

Structurally broken lines (bad JSON, missing keys, wrong types) abort the load
with the offending line number. Records that parse but violate a domain rule
(filtered document type, year outside the window, author without a usable
affiliation, ...) are rejected and counted per reason, never stored.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from teammine.errors import IngestError


class DocType(Enum):
    ARTICLE = "Article"
    REVIEW = "Review"
    LETTER = "Letter"
    PROCEEDINGS_PAPER = "Proceedings Paper"


_DOC_TYPE_ALIASES = {
    "Article": DocType.ARTICLE,
    "Review": DocType.REVIEW,
    "Letter": DocType.LETTER,
    "Proceedings Paper": DocType.PROCEEDINGS_PAPER,
    "Proceeding Paper": DocType.PROCEEDINGS_PAPER,
    "ProceedingsPaper": DocType.PROCEEDINGS_PAPER,
}


@dataclass(frozen=True, slots=True)
class Affiliation:
    org_id: str | None = None
    city_id: str | None = None
    country: str | None = None
    lat: float | None = None
    lon: float | None = None

    def has_geo(self) -> bool:
        return self.lat is not None and self.lon is not None


@dataclass(frozen=True, slots=True)
class AuthorEntry:
    author_id: str
    affiliations: tuple[Affiliation, ...]


@dataclass(frozen=True, slots=True)
class PublicationRecord:
    pub_id: str
    year: int
    doc_type: DocType
    fields: tuple[str, ...]
    authors: tuple[AuthorEntry, ...]

    def author_ids(self) -> tuple[str, ...]:
        return tuple(a.author_id for a in self.authors)


@dataclass(frozen=True, slots=True)
class CitationEvent:
    citing_pub_id: str
    cited_pub_id: str
    citing_year: int


@dataclass
class IngestConfig:
    year_min: int = 2008
    year_max: int = 2020


@dataclass
class PublicationTable:
    """Validated records in input order, plus the reject report for the load."""

    records: list[PublicationRecord] = field(default_factory=list)
    rejects: list[tuple[int, str]] = field(default_factory=list)  # (line, reason)
    input_lines: int = 0

    def __post_init__(self):
        self._by_id = {r.pub_id: r for r in self.records}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __contains__(self, pub_id: str) -> bool:
        return pub_id in self._by_id

    def get(self, pub_id: str) -> PublicationRecord | None:
        return self._by_id.get(pub_id)

    def reject_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for _, reason in self.rejects:
            counts[reason] = counts.get(reason, 0) + 1
        return counts


@dataclass
class CitationTable:
    events: list[CitationEvent] = field(default_factory=list)
    drop_counts: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def _require(cond: bool, message: str, line: int):
    if not cond:
        raise IngestError(message, line=line)


def _parse_affiliation(raw: object, line: int) -> Affiliation:
    _require(isinstance(raw, dict), "affiliation is not an object", line)
    assert isinstance(raw, dict)
    for key in ("org_id", "city_id", "country"):
        val = raw.get(key)
        _require(val is None or isinstance(val, str), f"{key} must be a string", line)
    for key in ("lat", "lon"):
        val = raw.get(key)
        _require(
            val is None or isinstance(val, (int, float)) and not isinstance(val, bool),
            f"{key} must be a number",
            line,
        )
    return Affiliation(
        org_id=raw.get("org_id"),
        city_id=raw.get("city_id"),
        country=raw.get("country"),
        lat=None if raw.get("lat") is None else float(raw["lat"]),
        lon=None if raw.get("lon") is None else float(raw["lon"]),
    )


def _parse_record(raw: object, line: int) -> tuple[str, int, str, tuple[str, ...], tuple[AuthorEntry, ...]]:
    _require(isinstance(raw, dict), "record is not an object", line)
    assert isinstance(raw, dict)
    for key in ("pub_id", "year", "doc_type", "fields", "authors"):
        _require(key in raw, f"missing key {key!r}", line)
    _require(isinstance(raw["pub_id"], str) and raw["pub_id"] != "", "pub_id must be a non-empty string", line)
    _require(isinstance(raw["year"], int) and not isinstance(raw["year"], bool), "year must be an integer", line)
    _require(isinstance(raw["doc_type"], str), "doc_type must be a string", line)
    _require(
        isinstance(raw["fields"], list) and all(isinstance(f, str) for f in raw["fields"]),
        "fields must be a list of strings",
        line,
    )
    _require(isinstance(raw["authors"], list), "authors must be a list", line)
    authors = []
    for entry in raw["authors"]:
        _require(isinstance(entry, dict), "author entry is not an object", line)
        _require(isinstance(entry.get("author_id"), str) and entry["author_id"] != "",
                 "author_id must be a non-empty string", line)
        affs = entry.get("affiliations")
        _require(isinstance(affs, list), "affiliations must be a list", line)
        authors.append(AuthorEntry(
            author_id=sys.intern(entry["author_id"]),
            affiliations=tuple(_parse_affiliation(a, line) for a in affs),
        ))
    fields = tuple(sorted(set(raw["fields"])))
    return raw["pub_id"], raw["year"], raw["doc_type"], fields, tuple(authors)


def _domain_reject_reason(year: int, doc_type_raw: str, fields: tuple[str, ...],
                          authors: tuple[AuthorEntry, ...], config: IngestConfig) -> str | None:
    """First violated domain rule, or None when the record is acceptable."""
    if doc_type_raw not in _DOC_TYPE_ALIASES:
        return "doc_type"
    if not (config.year_min <= year <= config.year_max):
        return "year_window"
    if not fields:
        return "fields"
    if not authors:
        return "no_authors"
    ids = [a.author_id for a in authors]
    if len(set(ids)) != len(ids):
        return "duplicate_author"
    for author in authors:
        if not author.affiliations:
            return "affiliation"
        for aff in author.affiliations:
            # exactly one of lat/lon present is treated as no geolocation at all
            if (aff.lat is None) != (aff.lon is None):
                return "coordinates"
            if aff.has_geo() and not (-90.0 <= aff.lat <= 90.0 and -180.0 <= aff.lon <= 180.0):
                return "coordinates"
            if aff.org_id is None and not aff.has_geo():
                return "affiliation"
    return None


def load_publications(path: str | Path, config: IngestConfig) -> PublicationTable:
    """Read a publications file, keeping only records that pass every rule.

    Raises IngestError (with the line number) for structurally malformed lines
    and for duplicate pub_ids; domain violations become reject rows instead.
    """
    records: list[PublicationRecord] = []
    rejects: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    lines = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            lines += 1
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"invalid JSON ({exc.msg})", line=line_no) from exc
            pub_id, year, doc_type_raw, fields, authors = _parse_record(raw, line_no)
            if pub_id in seen_ids:
                raise IngestError(f"duplicate pub_id {pub_id!r}", line=line_no)
            seen_ids.add(pub_id)
            reason = _domain_reject_reason(year, doc_type_raw, fields, authors, config)
            if reason is not None:
                rejects.append((line_no, reason))
                continue
            records.append(PublicationRecord(
                pub_id=pub_id,
                year=year,
                doc_type=_DOC_TYPE_ALIASES[doc_type_raw],
                fields=fields,
                authors=authors,
            ))
    return PublicationTable(records=records, rejects=rejects, input_lines=lines)


def load_citations(path: str | Path, pubs: PublicationTable) -> CitationTable:
    """Read citation events, dropping rows that cannot be used downstream.

    Kept events always reference a known cited publication. The citing side may
    live outside the corpus; its year is then required on the row.
    """
    events: list[CitationEvent] = []
    drops: dict[str, int] = {}

    def drop(reason: str):
        drops[reason] = drops.get(reason, 0) + 1

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["citing_pub_id", "cited_pub_id", "citing_year"]:
            raise IngestError("citation file must start with header "
                              "'citing_pub_id,cited_pub_id,citing_year'", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise IngestError(f"expected 3 columns, got {len(row)}", line=line_no)
            citing_id, cited_id, year_raw = row
            cited = pubs.get(cited_id)
            if cited is None:
                drop("unknown_cited")
                continue
            if year_raw == "":
                citing = pubs.get(citing_id)
                if citing is None:
                    drop("missing_year")
                    continue
                citing_year = citing.year
            else:
                try:
                    citing_year = int(year_raw)
                except ValueError as exc:
                    raise IngestError(f"citing_year {year_raw!r} is not an integer",
                                      line=line_no) from exc
            if citing_year < cited.year:
                drop("year_before_cited")
                continue
            events.append(CitationEvent(citing_id, cited_id, citing_year))
    return CitationTable(events=events, drop_counts=drops)


# --- canonical artifacts ----------------------------------------------------

def _affiliation_dict(aff: Affiliation) -> dict:
    out: dict = {}
    if aff.org_id is not None:
        out["org_id"] = aff.org_id
    if aff.city_id is not None:
        out["city_id"] = aff.city_id
    if aff.country is not None:
        out["country"] = aff.country
    if aff.lat is not None:
        out["lat"] = aff.lat
        out["lon"] = aff.lon
    return out


def publication_to_dict(rec: PublicationRecord) -> dict:
    return {
        "pub_id": rec.pub_id,
        "year": rec.year,
        "doc_type": rec.doc_type.value,
        "fields": list(rec.fields),
        "authors": [
            {"author_id": a.author_id,
             "affiliations": [_affiliation_dict(aff) for aff in a.affiliations]}
            for a in rec.authors
        ],
    }


def write_publications_jsonl(pubs: Iterable[PublicationRecord], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for rec in pubs:
            fh.write(json.dumps(publication_to_dict(rec), sort_keys=True,
                                separators=(",", ":")))
            fh.write("\n")


def write_citations_csv(citations: Iterable[CitationEvent], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["citing_pub_id", "cited_pub_id", "citing_year"])
        for ev in citations:
            writer.writerow([ev.citing_pub_id, ev.cited_pub_id, ev.citing_year])


def write_rejects_csv(rejects: Iterable[tuple[int, str]], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["line", "reason"])
        for line, reason in rejects:
            writer.writerow([line, reason])


# --- document type prevalence ------------------------------------------------

@dataclass
class CorpusStats:
    """Per document type: counts and percentages in the whole corpus and in the
    top cited subsets. Percentages per column sum to 100 unless the column's
    population is empty."""

    rows: list[tuple[str, int, float, int, float, int, float]]
    empty: bool

    HEADER = ("doc_type", "count_all", "pct_all", "count_top10", "pct_top10",
              "count_top1", "pct_top1")


def corpus_stats(pubs: PublicationTable, tags) -> CorpusStats:
    """Document type prevalence over all / top-10% / top-1% publications."""
    order = [DocType.ARTICLE, DocType.REVIEW, DocType.LETTER, DocType.PROCEEDINGS_PAPER]
    counts = {dt: [0, 0, 0] for dt in order}
    for rec in pubs:
        tag = tags.get(rec.pub_id)
        counts[rec.doc_type][0] += 1
        if tag is not None and tag.top10:
            counts[rec.doc_type][1] += 1
        if tag is not None and tag.top1:
            counts[rec.doc_type][2] += 1
    totals = [sum(counts[dt][i] for dt in order) for i in range(3)]

    def pct(part: int, whole: int) -> float:
        return float(Fraction(100 * part, whole)) if whole else 0.0

    rows = []
    for dt in order:
        c_all, c10, c1 = counts[dt]
        rows.append((dt.value, c_all, pct(c_all, totals[0]),
                     c10, pct(c10, totals[1]), c1, pct(c1, totals[2])))
    return CorpusStats(rows=rows, empty=totals[0] == 0)


def write_corpus_stats_csv(stats: CorpusStats, path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(CorpusStats.HEADER) + ["empty_corpus"])
        for row in stats.rows:
            writer.writerow([row[0], row[1], repr(row[2]), row[3], repr(row[4]),
                             row[5], repr(row[6]), int(stats.empty)])
