"""Synthetic corpora with planted teams, overlaps, and citation outcomes.

The generator writes the same publication/citation formats the ingest stage
reads, plus a ground-truth file listing every planted team, the overlap
relations implied by the planted geometry, and the success tag each
publication must receive.

Construction guarantees (checked up front, violations raise):

* every planted pair co-publishes in every year of each team interval, often
  enough that the persistence rule reproduces the interval exactly;
* when several teams share a pair, their intervals either nest (one contains
  the others it touches) or sit at least a full persistence window apart, so
  periods never bridge between intervals;
* the interval intersection over a team's pairs equals the team's intervals,
  and no outside author is connected to all members across a whole interval,
  so each planted team is a temporal maximal clique with exactly its spans;
* background pairs stay below the persistence minimum, so with a disjoint
  background author pool the planted teams are the only teams.

Success planting controls citation counts per (field, year) cell: intended
successes receive distinct counts descending from the top, everything else
zero, and single-author filler publications pad each cell so the intended set
is exactly what the percentile rule tags. All randomness flows from one seed
through a Mersenne Twister (``random.Random``), so corpora are byte-for-byte
reproducible.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from teammine.errors import InfeasibleConfigError
from teammine.intervals import Interval, covers, intersect, merge_union
from teammine.pairs import canonical_pair
from teammine.persistence import PersistenceParams

_COUNTRIES = ("US", "CN", "NL", "DE", "GB", "FR", "JP", "BR", "IN", "AU")


@dataclass(frozen=True)
class PlantedTeam:
    members: tuple[str, ...]
    intervals: tuple[Interval, ...]
    pubs_per_year: int = 1
    success_ages: tuple[int, ...] = ()  # ages (1-based on the duration span) given a success


@dataclass
class SynthConfig:
    seed: int = 0
    year_min: int = 1
    year_max: int = 13
    teams: tuple[PlantedTeam, ...] = ()
    n_background_authors: int = 0
    background_pubs: int = 0
    background_multi_frac: float = 0.5
    background_max_authors: int = 3
    background_doc_weights: tuple[tuple[str, float], ...] = (("Article", 1.0),)
    noise_pair_max_pubs: int = 2
    success_hazard: float | None = None  # per-age success draw for teams without a plan
    success_q: str = "0.10"              # percentile the planted successes target
    fields: tuple[str, ...] = ("F0",)
    reject_fraction: float = 0.0         # fraction of input lines planted as rejects
    author_profiles: dict[str, dict] = field(default_factory=dict)
    persistence: PersistenceParams = field(default_factory=PersistenceParams)
    pad_cells: bool = True


@dataclass
class GroundTruth:
    year_min: int
    year_max: int
    seed: int
    teams: list[dict]
    overlaps: list[dict]
    tags: dict[str, tuple[bool, bool]]  # pub_id -> (top10, top1); absent = untagged
    n_publications: int = 0
    n_authors: int = 0

    def to_json(self, path: str | Path):
        payload = {
            "year_min": self.year_min,
            "year_max": self.year_max,
            "seed": self.seed,
            "teams": self.teams,
            "overlaps": self.overlaps,
            "tags": {k: [int(v[0]), int(v[1])] for k, v in sorted(self.tags.items())},
            "n_publications": self.n_publications,
            "n_authors": self.n_authors,
        }
        with open(path, "w", encoding="utf-8", newline="") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
            fh.write("\n")

    @classmethod
    def from_json(cls, path: str | Path) -> "GroundTruth":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls(
            year_min=payload["year_min"],
            year_max=payload["year_max"],
            seed=payload["seed"],
            teams=payload["teams"],
            overlaps=payload["overlaps"],
            tags={k: (bool(v[0]), bool(v[1])) for k, v in payload["tags"].items()},
            n_publications=payload["n_publications"],
            n_authors=payload["n_authors"],
        )


# --- configuration validation ---------------------------------------------------

def _pair_interval_map(teams: tuple[PlantedTeam, ...]) -> dict[tuple[str, str], list[Interval]]:
    pair_intervals: dict[tuple[str, str], list[Interval]] = {}
    for team in teams:
        for i in range(len(team.members)):
            for j in range(i + 1, len(team.members)):
                pair = canonical_pair(team.members[i], team.members[j])
                pair_intervals.setdefault(pair, []).extend(team.intervals)
    return pair_intervals


def validate_config(config: SynthConfig) -> dict[tuple[str, str], list[Interval]]:
    """Check the construction guarantees; returns the merged pair periods."""
    params = config.persistence

    def fail(rule: str, detail: str):
        raise InfeasibleConfigError(f"{rule}: {detail}")

    for idx, team in enumerate(config.teams):
        if len(team.members) < 2:
            fail("team_size", f"team {idx} needs at least two members")
        if len(set(team.members)) != len(team.members):
            fail("team_size", f"team {idx} repeats a member")
        if not team.intervals:
            fail("team_intervals", f"team {idx} has no intervals")
        merged = merge_union(list(team.intervals))
        if merged != sorted(team.intervals):
            fail("team_intervals", f"team {idx} intervals overlap or touch")
        for start, end in team.intervals:
            if start < config.year_min or end > config.year_max:
                fail("team_intervals", f"team {idx} interval [{start},{end}] "
                                       f"outside the year window")
            length = end - start + 1
            if team.pubs_per_year * min(params.window_len, length) < params.min_pubs:
                fail("pubs_per_year", f"team {idx} interval [{start},{end}] cannot "
                                      f"satisfy persistence with "
                                      f"{team.pubs_per_year} publications per year")
        duration = team.intervals[-1][1] - team.intervals[0][0] + 1
        for age in team.success_ages:
            year = team.intervals[0][0] + age - 1
            if not 1 <= age <= duration or not any(s <= year <= e for s, e in team.intervals):
                fail("success_ages", f"team {idx} success age {age} falls outside "
                                     f"its intervals")

    pair_intervals = _pair_interval_map(config.teams)
    pair_periods: dict[tuple[str, str], list[Interval]] = {}
    for pair, intervals in pair_intervals.items():
        merged = merge_union(intervals)
        for (s1, e1), (s2, e2) in zip(merged, merged[1:]):
            if s2 - e1 < params.window_len:
                fail("pair_gap", f"pair {pair} intervals [{s1},{e1}] and [{s2},{e2}] "
                                 f"are close enough to bridge")
        for period in merged:
            if period not in intervals:
                fail("pair_nesting", f"pair {pair} merged period {period} matches no "
                                     f"single planted interval")
        pair_periods[pair] = merged

    adjacency: dict[str, dict[str, list[Interval]]] = {}
    for (a, b), periods in pair_periods.items():
        adjacency.setdefault(a, {})[b] = periods
        adjacency.setdefault(b, {})[a] = periods

    for idx, team in enumerate(config.teams):
        support = None
        for i in range(len(team.members)):
            for j in range(i + 1, len(team.members)):
                periods = pair_periods[canonical_pair(team.members[i], team.members[j])]
                support = list(periods) if support is None else intersect(support, periods)
        if support != sorted(team.intervals):
            fail("team_support", f"team {idx} pair periods imply spans {support}, "
                                 f"not the planted {sorted(team.intervals)}")
        members = set(team.members)
        outsiders: set[str] = set()
        for member in team.members:
            outsiders.update(adjacency.get(member, ()))
        for v in sorted(outsiders - members):
            cover: list[Interval] | None = None
            for member in team.members:
                periods = adjacency.get(v, {}).get(member)
                if not periods:
                    cover = []
                    break
                cover = list(periods) if cover is None else intersect(cover, periods)
                if not cover:
                    break
            if cover:
                for interval in team.intervals:
                    if covers(cover, interval):
                        fail("team_maximality", f"author {v} is connected to all of "
                                                f"team {idx} across {interval}")

    from teammine.ingest import _DOC_TYPE_ALIASES
    for name, _ in config.background_doc_weights:
        if name not in _DOC_TYPE_ALIASES:
            fail("doc_type", f"unknown background document type {name!r}")
    if config.background_pubs and config.n_background_authors < config.background_max_authors:
        fail("background_pool", "background author pool smaller than the largest "
                                "background publication")
    if config.noise_pair_max_pubs >= params.min_pubs:
        fail("noise_cap", "noise pairs allowed enough publications to become persistent")
    if not 0.0 <= config.reject_fraction < 1.0:
        fail("reject_fraction", "must lie in [0, 1)")
    if config.success_q not in ("0.01", "0.10"):
        fail("success_q", "must be '0.01' or '0.10'")
    return pair_periods


# --- ground-truth derivation ------------------------------------------------------

def derive_truth_overlaps(teams: list[tuple[frozenset[str], list[Interval]]]) -> list[dict]:
    """Overlap relations implied by a team list, by direct rule arithmetic."""
    relations = []
    for fi, (members_f, intervals_f) in enumerate(teams):
        x_f = intervals_f[0][0]
        for oi, (members_o, intervals_o) in enumerate(teams):
            if fi == oi:
                continue
            shared = len(members_f & members_o)
            if 2 * shared < max(len(members_f), len(members_o)):
                continue
            x_o = intervals_o[0][0]
            timing = ("preceding" if x_o < x_f
                      else "simultaneous" if x_o == x_f else "succeeding")
            if members_o < members_f:
                kind = "core"
            elif members_f < members_o:
                kind = "extension"
            else:
                overlap = members_f & members_o
                shared_core = any(
                    ci not in (fi, oi)
                    and members_c <= overlap
                    and 2 * len(members_c) >= len(members_f)
                    and intervals_c[0][0] < x_f
                    for ci, (members_c, intervals_c) in enumerate(teams)
                )
                kind = "offshoot_shared_core" if shared_core else "offshoot_no_shared_core"
            impulse = {
                ("core", "preceding"): "persistence",
                ("core", "simultaneous"): "none",
                ("extension", "simultaneous"): "synchronous",
                ("extension", "succeeding"): "freshness",
                ("offshoot_shared_core", "preceding"): "none",
                ("offshoot_shared_core", "simultaneous"): "synchronous",
                ("offshoot_shared_core", "succeeding"): "freshness",
                ("offshoot_no_shared_core", "preceding"): "persistence",
                ("offshoot_no_shared_core", "simultaneous"): "synchronous",
                ("offshoot_no_shared_core", "succeeding"): "freshness",
            }[(kind, timing)]
            relations.append({
                "focal": sorted(members_f),
                "other": sorted(members_o),
                "kind": kind,
                "timing": timing,
                "impulse": impulse,
            })
    return relations


def _cell_truth_tags(cell: list[tuple[str, int]], q: Fraction) -> set[str]:
    """Tagged pub ids for one (field, year) cell, by the ranking rule."""
    n = len(cell)
    counts = sorted((c for _, c in cell), reverse=True)
    k = -((-q.numerator * n) // q.denominator)
    threshold = max(counts[k - 1], 1)
    return {pub_id for pub_id, c in cell if c >= threshold}


# --- corpus generation -------------------------------------------------------------

@dataclass
class _Pub:
    pub_id: str
    year: int
    field_id: str
    authors: tuple[str, ...]
    doc_type: str = "Article"


class _AuthorBook:
    """Deterministic affiliation per author, assigned at first sight."""

    def __init__(self, profiles: dict[str, dict]):
        self.profiles = dict(profiles)
        self._order: dict[str, int] = {}

    def affiliation(self, author_id: str) -> dict:
        if author_id in self.profiles:
            return self.profiles[author_id]
        if author_id not in self._order:
            self._order[author_id] = len(self._order)
        i = self._order[author_id]
        profile = {
            "org_id": f"o{i}",
            "city_id": f"c{i}",
            "country": _COUNTRIES[i % len(_COUNTRIES)],
            "lat": float(((i * 37) % 140) - 70) + 0.25,
            "lon": float(((i * 73) % 340) - 170) + 0.25,
        }
        self.profiles[author_id] = profile
        return profile


def generate_corpus(config: SynthConfig, out_dir: str | Path) -> GroundTruth:
    """Write publications.jsonl, citations.csv, and truth.json under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    validate_config(config)
    rng = random.Random(config.seed)
    book = _AuthorBook(config.author_profiles)
    pubs: list[_Pub] = []
    intended: set[str] = set()  # pub ids planted as successes for success_q
    team_rows: list[dict] = []

    # planted teams publish with all members in every interval year
    for idx, team in enumerate(config.teams):
        field_id = config.fields[idx % len(config.fields)]
        duration_start = team.intervals[0][0]
        success_years: set[int] = set()
        if team.success_ages:
            success_years = {duration_start + age - 1 for age in team.success_ages}
        elif config.success_hazard is not None:
            for start, end in team.intervals:
                for year in range(start, end + 1):
                    if rng.random() < config.success_hazard:
                        success_years.add(year)
        for start, end in team.intervals:
            for year in range(start, end + 1):
                for k in range(team.pubs_per_year):
                    pub_id = f"t{idx}_y{year}_{k}"
                    pubs.append(_Pub(pub_id, year, field_id, team.members))
                    if k == 0 and year in success_years:
                        intended.add(pub_id)
        team_rows.append({
            "members": sorted(team.members),
            "intervals": [list(iv) for iv in team.intervals],
            "success_years": sorted(success_years),
        })

    # background noise, capped so no background pair can turn persistent
    doc_names = [name for name, _ in config.background_doc_weights]
    doc_weights = [w for _, w in config.background_doc_weights]
    pool = [f"bg{i}" for i in range(config.n_background_authors)]
    pair_budget: dict[tuple[str, str], int] = {}
    for bi in range(config.background_pubs):
        year = rng.randrange(config.year_min, config.year_max + 1)
        doc_type = rng.choices(doc_names, weights=doc_weights)[0]
        size = 1
        if pool and rng.random() < config.background_multi_frac:
            size = rng.randint(2, config.background_max_authors)
        authors: tuple[str, ...] = ()
        if size == 1:
            authors = (pool[rng.randrange(len(pool))],) if pool else (f"solo{bi}",)
        else:
            for _ in range(20):  # rejection-sample author sets under the pair cap
                chosen = tuple(sorted(rng.sample(pool, size)))
                pairs = [canonical_pair(a, b)
                         for i, a in enumerate(chosen) for b in chosen[i + 1:]]
                if all(pair_budget.get(p, 0) < config.noise_pair_max_pubs for p in pairs):
                    for p in pairs:
                        pair_budget[p] = pair_budget.get(p, 0) + 1
                    authors = chosen
                    break
            else:
                authors = (pool[rng.randrange(len(pool))],)
        pubs.append(_Pub(f"b{bi}", year, config.fields[bi % len(config.fields)],
                         authors, doc_type))

    # pad cells so the intended successes are exactly what the percentile tags
    q_target = Fraction(config.success_q)
    if config.pad_cells and intended:
        cells: dict[tuple[str, int], int] = {}
        success_per_cell: dict[tuple[str, int], int] = {}
        for pub in pubs:
            key = (pub.field_id, pub.year)
            cells[key] = cells.get(key, 0) + 1
            if pub.pub_id in intended:
                success_per_cell[key] = success_per_cell.get(key, 0) + 1
        filler = 0
        for key in sorted(success_per_cell):
            s = success_per_cell[key]
            need = (s - 1) * q_target.denominator // q_target.numerator + 1
            for _ in range(max(0, need - cells[key])):
                pub_id = f"f{filler}"
                filler += 1
                pubs.append(_Pub(pub_id, key[1], key[0], (f"fill{filler % 97}",)))

    # citation counts: distinct descending for intended successes, zero elsewhere
    by_cell: dict[tuple[str, int], list[str]] = {}
    for pub in pubs:
        by_cell.setdefault((pub.field_id, pub.year), []).append(pub.pub_id)
    counts: dict[str, int] = {}
    for key in sorted(by_cell):
        rank = 0
        cell_intended = [p for p in by_cell[key] if p in intended]
        for pub_id in sorted(cell_intended):
            counts[pub_id] = 10 + len(cell_intended) - rank
            rank += 1

    truth_tags: dict[str, tuple[bool, bool]] = {}
    for key in sorted(by_cell):
        cell = [(p, counts.get(p, 0)) for p in by_cell[key]]
        if not any(c for _, c in cell):
            continue
        top10 = _cell_truth_tags(cell, Fraction(1, 10))
        top1 = _cell_truth_tags(cell, Fraction(1, 100))
        for pub_id, c in cell:
            if pub_id in top10 or pub_id in top1:
                truth_tags[pub_id] = (pub_id in top10, pub_id in top1)

    # serialize, with planted reject lines mixed in
    lines = [_pub_line(pub, book) for pub in pubs]
    if config.reject_fraction > 0.0:
        n_reject = round(len(lines) * config.reject_fraction / (1.0 - config.reject_fraction))
        for ri in range(n_reject):
            lines.append(_reject_line(ri, config))
    rng.shuffle(lines)
    with open(out_dir / "publications.jsonl", "w", encoding="utf-8", newline="") as fh:
        fh.writelines(lines)

    with open(out_dir / "citations.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("citing_pub_id,cited_pub_id,citing_year\n")
        n_cite = 0
        for pub in pubs:
            c = counts.get(pub.pub_id, 0)
            for j in range(c):
                fh.write(f"x{n_cite},{pub.pub_id},{pub.year + j % 3}\n")
                n_cite += 1

    authors_seen = {a for pub in pubs for a in pub.authors}
    truth = GroundTruth(
        year_min=config.year_min,
        year_max=config.year_max,
        seed=config.seed,
        teams=team_rows,
        overlaps=derive_truth_overlaps(
            [(frozenset(t.members), sorted(t.intervals)) for t in config.teams]),
        tags=truth_tags,
        n_publications=len(pubs),
        n_authors=len(authors_seen),
    )
    truth.to_json(out_dir / "truth.json")
    return truth


def _pub_line(pub: _Pub, book: _AuthorBook) -> str:
    record = {
        "pub_id": pub.pub_id,
        "year": pub.year,
        "doc_type": pub.doc_type,
        "fields": [pub.field_id],
        "authors": [{"author_id": a, "affiliations": [book.affiliation(a)]}
                    for a in pub.authors],
    }
    return json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"


# --- verification against ground truth ------------------------------------------

@dataclass
class VerifyReport:
    n_planted: int = 0
    exact_matches: int = 0
    superset_matches: int = 0
    team_recall: float | None = None
    team_precision: float | None = None
    n_mined: int = 0
    n_truth_overlaps: int = 0
    overlap_matches: int = 0
    overlap_match_rate: float | None = None
    n_pubs_checked: int = 0
    tag_matches: int = 0
    tag_match_rate: float | None = None
    empty: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_against_truth(teams, relations, tags, truth: GroundTruth) -> VerifyReport:
    """Recall/precision of planted teams plus overlap and tag match rates.

    A planted team matches exactly when a mined team has the same member set
    and the same intervals; it matches as a superset when a mined team's
    members contain it and every planted interval lies inside a mined one.
    """
    report = VerifyReport()
    report.n_planted = len(truth.teams)
    report.n_mined = len(teams)
    by_members = {team.members: team for team in teams}
    member_index: dict[str, list] = {}
    for team in teams:
        for member in team.members:
            member_index.setdefault(member, []).append(team)

    for planted in truth.teams:
        members = tuple(sorted(planted["members"]))
        intervals = [tuple(iv) for iv in planted["intervals"]]
        mined = by_members.get(members)
        if mined is not None and list(mined.intervals) == intervals:
            report.exact_matches += 1
            continue
        for candidate in member_index.get(members[0], ()):
            if not set(members) <= set(candidate.members):
                continue
            if all(covers(list(candidate.intervals), iv) for iv in intervals):
                report.superset_matches += 1
                break
    if report.n_planted:
        report.team_recall = (report.exact_matches + report.superset_matches) / report.n_planted
    if report.n_mined:
        report.team_precision = report.exact_matches / report.n_mined

    id_to_members = {team.team_id: team.members for team in teams}
    mined_relations = {
        (id_to_members[rel.focal_team_id], id_to_members[rel.other_team_id],
         rel.kind.value, rel.timing.value, rel.impulse.value)
        for rel in relations
    }
    truth_relations = {
        (tuple(sorted(rel["focal"])), tuple(sorted(rel["other"])),
         rel["kind"], rel["timing"], rel["impulse"])
        for rel in truth.overlaps
    }
    report.n_truth_overlaps = len(truth_relations)
    report.overlap_matches = len(truth_relations & mined_relations)
    if report.n_truth_overlaps:
        report.overlap_match_rate = report.overlap_matches / report.n_truth_overlaps

    report.n_pubs_checked = len(tags)
    for tag in tags:
        expected = truth.tags.get(tag.pub_id, (False, False))
        if (tag.top10, tag.top1) == tuple(expected):
            report.tag_matches += 1
    if report.n_pubs_checked:
        report.tag_match_rate = report.tag_matches / report.n_pubs_checked

    report.empty = report.n_planted == 0 and report.n_mined == 0 and report.n_pubs_checked == 0
    return report


# --- worked example corpus -----------------------------------------------------

FIG_S1_PAIR_YEARS = {
    ("A", "B"): [2, 4, 6],
    ("B", "C"): [1, 2, 3, 5, 6, 7],
    ("A", "C"): [2, 3, 5],
    ("C", "D"): [1, 4, 6],
    ("E", "F"): [7, 7, 8],
}

FIG_S1_TEAMS = [
    {"members": ["A", "B"], "intervals": [[2, 6]], "success_years": []},
    {"members": ["A", "B", "C"], "intervals": [[2, 5]], "success_years": []},
    {"members": ["B", "C"], "intervals": [[1, 7]], "success_years": []},
    {"members": ["E", "F"], "intervals": [[7, 8]], "success_years": []},
]


def fig_s1_corpus(out_dir: str | Path) -> GroundTruth:
    """Six-author worked-example corpus: two-author publications whose pair
    timelines produce persistent periods [2,6] for (A,B), none for (C,D), an
    over-five-year period [1,7] for (B,C), and the three-member team over
    [2,5] once mined."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    book = _AuthorBook({})
    pubs = []
    i = 0
    for (a, b), years in FIG_S1_PAIR_YEARS.items():
        for year in years:
            pubs.append(_Pub(f"s{i}", year, "F0", (a, b)))
            i += 1
    with open(out_dir / "publications.jsonl", "w", encoding="utf-8", newline="") as fh:
        fh.writelines(_pub_line(pub, book) for pub in pubs)
    with open(out_dir / "citations.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("citing_pub_id,cited_pub_id,citing_year\n")
    truth = GroundTruth(
        year_min=1, year_max=8, seed=0,
        teams=FIG_S1_TEAMS,
        overlaps=derive_truth_overlaps(
            [(frozenset(t["members"]), [tuple(iv) for iv in t["intervals"]])
             for t in FIG_S1_TEAMS]),
        tags={},
        n_publications=len(pubs),
        n_authors=6,
    )
    truth.to_json(out_dir / "truth.json")
    return truth


def _reject_line(ri: int, config: SynthConfig) -> str:
    if ri % 2 == 0:
        record = {
            "pub_id": f"r{ri}", "year": config.year_min, "doc_type": "Editorial",
            "fields": [config.fields[0]],
            "authors": [{"author_id": f"rej{ri}",
                         "affiliations": [{"org_id": "oR"}]}],
        }
    else:
        record = {
            "pub_id": f"r{ri}", "year": config.year_min, "doc_type": "Article",
            "fields": [config.fields[0]],
            "authors": [{"author_id": f"rej{ri}", "affiliations": [{}]}],
        }
    return json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"
