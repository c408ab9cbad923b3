"""Persistence transform: pair timelines into persistent collaboration periods.

A pair collaborates persistently when it co-authors at least ``min_pubs``
publications within some ``window_len``-calendar-year window. For every such
window the interval from the first to the last co-publication year inside the
window is marked; the pair's persistent periods are the union of all marked
intervals, merged when they overlap or touch (end + 1 == next start).

A period can therefore be shorter than the window (bounded by actual
co-authorship years) or longer (chained windows), and one pair can hold
several disconnected periods.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from teammine.intervals import Interval, merge_union
from teammine.pairs import Pair


@dataclass(frozen=True)
class PersistenceParams:
    window_len: int = 5
    min_pubs: int = 3

    def __post_init__(self):
        if self.window_len < 1 or self.min_pubs < 1:
            raise ValueError("window_len and min_pubs must be >= 1")


def persistent_periods(years: list[int], params: PersistenceParams = PersistenceParams()) -> list[Interval]:
    """Disjoint persistent periods for one pair's sorted year multiset.

    Only windows starting at a co-publication year need to be inspected: any
    qualifying window marks an interval contained in the one marked by the
    window that starts at its first in-window publication year.
    """
    n = len(years)
    marked: list[Interval] = []
    j = 0
    for i in range(n):
        if i > 0 and years[i] == years[i - 1]:
            continue
        limit = years[i] + params.window_len - 1
        if j < i:
            j = i
        while j < n and years[j] <= limit:
            j += 1
        if j - i >= params.min_pubs:
            marked.append((years[i], years[j - 1]))
    return merge_union(marked)


def build_persistent_network(timelines: dict[Pair, list[int]],
                             params: PersistenceParams = PersistenceParams()) -> dict[Pair, list[Interval]]:
    """Persistent collaboration network: pairs that have at least one period."""
    network: dict[Pair, list[Interval]] = {}
    for pair, years in timelines.items():
        periods = persistent_periods(years, params)
        if periods:
            network[pair] = periods
    return network


def write_persistent_edges_csv(network: dict[Pair, list[Interval]], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["author_a", "author_b", "periods"])
        for (a, b) in sorted(network):
            periods = ";".join(f"{s}-{e}" for s, e in network[(a, b)])
            writer.writerow([a, b, periods])


def read_persistent_edges_csv(path: str | Path) -> dict[Pair, list[Interval]]:
    network: dict[Pair, list[Interval]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            periods = []
            for chunk in row[2].split(";"):
                s, e = chunk.split("-")
                periods.append((int(s), int(e)))
            network[(row[0], row[1])] = periods
    return network
