"""Temporal co-authorship network: per author pair, the years of joint work.

A publication with a authors contributes its year once to each of the
a*(a-1)/2 unordered pairs; single-author publications contribute nothing.
Pairs are stored canonically with the lexicographically smaller id first.
"""

from __future__ import annotations

import csv
from pathlib import Path

Pair = tuple[str, str]


def canonical_pair(a: str, b: str) -> Pair:
    return (a, b) if a < b else (b, a)


def build_pair_timelines(pubs, author_cap: int | None = None) -> dict[Pair, list[int]]:
    """Year multiset per co-authoring pair, sorted ascending.

    author_cap, when set, excludes publications with more than that many
    authors from pair generation (hyper-authorship escape hatch); the
    publications themselves stay in the corpus for association and statistics.
    """
    timelines: dict[Pair, list[int]] = {}
    for rec in pubs:
        ids = rec.author_ids()
        if len(ids) < 2:
            continue
        if author_cap is not None and len(ids) > author_cap:
            continue
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                timelines.setdefault(canonical_pair(ids[i], ids[j]), []).append(rec.year)
    for years in timelines.values():
        years.sort()
    return timelines


def write_pair_timelines_csv(timelines: dict[Pair, list[int]], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["author_a", "author_b", "years"])
        for (a, b) in sorted(timelines):
            writer.writerow([a, b, ";".join(str(y) for y in timelines[(a, b)])])


def read_pair_timelines_csv(path: str | Path) -> dict[Pair, list[int]]:
    timelines: dict[Pair, list[int]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            timelines[(row[0], row[1])] = [int(y) for y in row[2].split(";")]
    return timelines
