"""Temporal maximal clique enumeration over the persistent collaboration network.

An edge (a, b) exists in year t when t lies inside one of the pair's
persistent periods. A temporal clique is a member set plus an inclusive year
span such that every member pair is connected in every year of the span. It is
maximal when neither endpoint of the span can be moved outward nor any author
added for the same span.

The enumerator expands member sets from single edges: a state is a member set
together with one maximal connectivity run of that set, and adding author v
splits the run into the maximal sub-runs throughout which v is connected to
every current member. A state is emitted when no outside author covers its
whole run. A visited set keeps the expansion from re-walking states reachable
in several orders. Completeness and maximality are pinned by equivalence with
the brute-force oracle below.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from teammine.errors import SizeGuardError
from teammine.intervals import Interval, intersect
from teammine.pairs import Pair


@dataclass(frozen=True)
class CliqueParams:
    delta: int = 1
    gamma: int = 1
    min_size: int = 2

    def __post_init__(self):
        if self.delta != 1 or self.gamma != 1:
            raise ValueError("this artifact fixes delta = 1 and gamma = 1")
        if self.min_size < 2:
            raise ValueError("min_size must be >= 2")


@dataclass(frozen=True, slots=True, order=True)
class TemporalClique:
    members: tuple[str, ...]  # sorted author ids
    start: int
    end: int


Adjacency = dict[str, dict[str, list[Interval]]]


def _build_adjacency(network: dict[Pair, list[Interval]]) -> Adjacency:
    adj: Adjacency = {}
    for (a, b), periods in network.items():
        adj.setdefault(a, {})[b] = periods
        adj.setdefault(b, {})[a] = periods
    return adj


def _components(adj: Adjacency) -> list[list[str]]:
    seen: set[str] = set()
    comps: list[list[str]] = []
    for root in sorted(adj):
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        queue = [root]
        while queue:
            node = queue.pop()
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    comp.append(nxt)
                    queue.append(nxt)
        comps.append(sorted(comp))
    return comps


def _mine_component(adj: Adjacency, members: list[str], min_size: int) -> set[TemporalClique]:
    out: set[TemporalClique] = set()
    seen: set[tuple[frozenset[str], Interval]] = set()
    stack: list[tuple[frozenset[str], Interval]] = []
    for a in members:
        for b, periods in adj[a].items():
            if a < b:
                for period in periods:
                    stack.append((frozenset((a, b)), period))
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        group, span = state
        neighbors: set[str] = set()
        for m in group:
            neighbors.update(adj[m])
        neighbors -= group
        extends_full = False
        for v in sorted(neighbors):
            cover = [span]
            for m in group:
                periods = adj[v].get(m)
                if not periods:
                    cover = []
                    break
                cover = intersect(cover, periods)
                if not cover:
                    break
            for sub in cover:
                if sub == span:
                    extends_full = True
                stack.append((group | {v}, sub))
        if not extends_full and len(group) >= min_size:
            out.add(TemporalClique(tuple(sorted(group)), span[0], span[1]))
    return out


def enumerate_maximal_cliques(network: dict[Pair, list[Interval]],
                              params: CliqueParams = CliqueParams(),
                              workers: int = 1) -> list[TemporalClique]:
    """All temporal maximal cliques, sorted by member tuple then span.

    Work is partitioned by connected component; the canonical final sort makes
    the output independent of worker count and scheduling.
    """
    adj = _build_adjacency(network)
    comps = _components(adj)
    if workers > 1 and len(comps) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(comps) // (workers * 4))
            results = pool.map(lambda c: _mine_component(adj, c, params.min_size),
                               comps, chunksize=chunk)
            cliques = [cl for part in results for cl in part]
    else:
        cliques = [cl for comp in comps for cl in _mine_component(adj, comp, params.min_size)]
    return sorted(cliques)


def brute_force_cliques(network: dict[Pair, list[Interval]],
                        params: CliqueParams = CliqueParams(),
                        max_authors: int = 14,
                        max_span: int = 10) -> list[TemporalClique]:
    """Ground-truth oracle: try every (member subset, span) combination.

    Connectivity is checked through per-pair year bitmasks; a combination
    survives when no entry with superset members and superset span also
    satisfies full connectivity. Guarded to small instances by design.
    """
    authors = sorted({a for pair in network for a in pair})
    n = len(authors)
    if n == 0:
        return []
    if n > max_authors:
        raise SizeGuardError(f"{n} authors exceeds oracle guard of {max_authors}")
    y_min = min(s for periods in network.values() for s, _ in periods)
    y_max = max(e for periods in network.values() for _, e in periods)
    span_len = y_max - y_min + 1
    if span_len > max_span:
        raise SizeGuardError(f"span of {span_len} years exceeds oracle guard of {max_span}")

    index = {a: i for i, a in enumerate(authors)}
    pair_bits = [[0] * n for _ in range(n)]
    for (a, b), periods in network.items():
        bits = 0
        for s, e in periods:
            for y in range(s, e + 1):
                bits |= 1 << (y - y_min)
        pair_bits[index[a]][index[b]] = bits
        pair_bits[index[b]][index[a]] = bits

    full = (1 << span_len) - 1
    # conn[v][subset] = years in which v is connected to every member of subset
    conn = [[full] * (1 << n) for _ in range(n)]
    for v in range(n):
        row = conn[v]
        for subset in range(1, 1 << n):
            low = (subset & -subset).bit_length() - 1
            row[subset] = row[subset & (subset - 1)] & pair_bits[v][low]

    # every (member subset, span) combination that is fully connected, minus
    # those dominated by a longer span of the same member set
    by_span: dict[tuple[int, int], list[int]] = {}
    entries: list[tuple[int, int, int]] = []
    for subset in range(1, 1 << n):
        if subset.bit_count() < 2:
            continue
        mask = _subset_mask(subset, conn, full)
        if mask == 0:
            continue
        for x in range(span_len):
            if not mask >> x & 1:
                continue
            for y in range(x, span_len):
                if not mask >> y & 1:
                    break
                if x > 0 and mask >> (x - 1) & 1:
                    continue
                if y + 1 < span_len and mask >> (y + 1) & 1:
                    continue
                entries.append((subset, x, y))
                by_span.setdefault((x, y), []).append(subset)

    # remove entries dominated by superset members over a superset span
    out = []
    for subset, x, y in entries:
        dominated = False
        for x2 in range(0, x + 1):
            for y2 in range(y, span_len):
                for other in by_span.get((x2, y2), ()):
                    if other != subset and subset & other == subset:
                        dominated = True
                        break
                if dominated:
                    break
            if dominated:
                break
        if dominated or subset.bit_count() < params.min_size:
            continue
        members = tuple(authors[i] for i in range(n) if subset >> i & 1)
        out.append(TemporalClique(members, y_min + x, y_min + y))
    return sorted(out)


def _subset_mask(subset: int, conn, full: int) -> int:
    """Years in which the subset is fully connected, by peeling one member."""
    mask = full
    while subset.bit_count() >= 2:
        low = (subset & -subset).bit_length() - 1
        subset &= subset - 1
        mask &= conn[low][subset]
    return mask


def write_cliques_csv(cliques: list[TemporalClique], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["members", "start", "end"])
        for clique in cliques:
            writer.writerow([";".join(clique.members), clique.start, clique.end])


def read_cliques_csv(path: str | Path) -> list[TemporalClique]:
    cliques = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            cliques.append(TemporalClique(tuple(row[0].split(";")), int(row[1]), int(row[2])))
    return cliques
