"""Three-year citation counts and top-percentile tagging per (field, year) cell.

A publication's citation window is calendar based: with publication year Y the
default window is [Y, Y+2] (three calendar years including Y). The alternative
reading [Y+1, Y+3] is one configuration switch away.

Percentile thresholds are computed independently per (field, publication year)
cell so that high-citation fields do not dominate. Within a cell of N
publications ranked by citation count descending, the threshold for fraction q
is the count of the ceil(q*N)-th ranked publication, floored at 1 so that
all-zero cells produce no "highly cited" publications. Every publication tied
at the threshold qualifies. Publications listing several fields qualify
through any one of them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from teammine.ingest import CitationTable, PublicationTable

TOP1 = Fraction(1, 100)
TOP10 = Fraction(1, 10)

WINDOW_INCLUSIVE = "calendar_inclusive"  # [Y, Y+2]
WINDOW_AFTER = "calendar_after"          # [Y+1, Y+3]


@dataclass(frozen=True, slots=True)
class SuccessTag:
    pub_id: str
    citations_3y: int
    top10: bool
    top1: bool


@dataclass(frozen=True, slots=True)
class PercentileThreshold:
    field_id: str
    year: int
    q: Fraction
    threshold: int
    population: int


class SuccessTagTable:
    def __init__(self, tags: list[SuccessTag]):
        self.tags = tags
        self._by_id = {t.pub_id: t for t in tags}

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self):
        return iter(self.tags)

    def get(self, pub_id: str) -> SuccessTag | None:
        return self._by_id.get(pub_id)


def three_year_citations(pubs: PublicationTable, citations: CitationTable,
                         mode: str = WINDOW_INCLUSIVE) -> dict[str, int]:
    """Citation count per pub_id inside its three-calendar-year window."""
    if mode not in (WINDOW_INCLUSIVE, WINDOW_AFTER):
        raise ValueError(f"unknown citation window mode {mode!r}")
    offset = 0 if mode == WINDOW_INCLUSIVE else 1
    counts = {rec.pub_id: 0 for rec in pubs}
    years = {rec.pub_id: rec.year for rec in pubs}
    for ev in citations:
        base = years.get(ev.cited_pub_id)
        if base is None:
            continue
        if base + offset <= ev.citing_year <= base + offset + 2:
            counts[ev.cited_pub_id] += 1
    return counts


def percentile_thresholds(pubs: PublicationTable, counts: dict[str, int],
                          q: Fraction) -> dict[tuple[str, int], PercentileThreshold]:
    """Minimum qualifying citation count per (field, year) cell."""
    cells: dict[tuple[str, int], list[int]] = {}
    for rec in pubs:
        c = counts[rec.pub_id]
        for field_id in rec.fields:
            cells.setdefault((field_id, rec.year), []).append(c)
    out: dict[tuple[str, int], PercentileThreshold] = {}
    for key in sorted(cells):
        cell = sorted(cells[key], reverse=True)
        n = len(cell)
        k = -((-q.numerator * n) // q.denominator)  # ceil(q * n), exact
        threshold = max(cell[k - 1], 1)
        out[key] = PercentileThreshold(field_id=key[0], year=key[1], q=q,
                                       threshold=threshold, population=n)
    return out


def tag_success(pubs: PublicationTable, counts: dict[str, int],
                thresholds_top10: dict[tuple[str, int], PercentileThreshold],
                thresholds_top1: dict[tuple[str, int], PercentileThreshold]) -> SuccessTagTable:
    """Tag each publication; a multi-field publication qualifies via any field."""
    tags = []
    for rec in pubs:
        c = counts[rec.pub_id]
        top10 = top1 = False
        for field_id in rec.fields:
            key = (field_id, rec.year)
            assert key in thresholds_top10 and key in thresholds_top1, \
                f"no threshold for cell {key}"
            top10 = top10 or c >= thresholds_top10[key].threshold
            top1 = top1 or c >= thresholds_top1[key].threshold
        tags.append(SuccessTag(pub_id=rec.pub_id, citations_3y=c, top10=top10, top1=top1))
    return SuccessTagTable(tags)


def compute_tags(pubs: PublicationTable, citations: CitationTable,
                 mode: str = WINDOW_INCLUSIVE) -> tuple[SuccessTagTable, list[PercentileThreshold]]:
    """Full tagging pass: counts, both percentile thresholds, tags."""
    counts = three_year_citations(pubs, citations, mode=mode)
    th10 = percentile_thresholds(pubs, counts, TOP10)
    th1 = percentile_thresholds(pubs, counts, TOP1)
    tags = tag_success(pubs, counts, th10, th1)
    all_thresholds = [th10[k] for k in sorted(th10)] + [th1[k] for k in sorted(th1)]
    return tags, all_thresholds


def write_success_tags_csv(tags: SuccessTagTable, path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pub_id", "citations_3y", "top10", "top1"])
        for tag in tags:
            writer.writerow([tag.pub_id, tag.citations_3y, int(tag.top10), int(tag.top1)])


def read_success_tags_csv(path: str | Path) -> SuccessTagTable:
    tags = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            tags.append(SuccessTag(pub_id=row[0], citations_3y=int(row[1]),
                                   top10=bool(int(row[2])), top1=bool(int(row[3]))))
    return SuccessTagTable(tags)


def write_thresholds_csv(thresholds: list[PercentileThreshold], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["field", "year", "q", "threshold", "population"])
        for th in thresholds:
            writer.writerow([th.field_id, th.year, f"{float(th.q):.2f}",
                             th.threshold, th.population])
