"""Assemble teams from cliques, associate publications, compute composition.

Cliques with the same member set merge into one team whose duration spans all
of its (possibly disconnected) intervals. A publication belongs to a team when
its year falls inside one of the team's intervals (never in a gap) and at
least half of the team's members, but no fewer than two, appear among its
authors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from teammine.cliques import TemporalClique
from teammine.geo import great_circle_km
from teammine.intervals import Interval, contains_year
from teammine.ingest import PublicationTable


@dataclass(frozen=True, slots=True)
class CompositionMetrics:
    orgs_per_member: float
    cities_per_member: float
    countries_per_member: float
    mean_city_distance_km: float  # mean pairwise city distance / member count


@dataclass
class Team:
    team_id: int
    members: tuple[str, ...]
    intervals: tuple[Interval, ...]
    duration_start: int
    duration_end: int
    pubs: tuple[str, ...] = ()
    metrics: CompositionMetrics | None = None

    @property
    def duration(self) -> int:
        return self.duration_end - self.duration_start + 1

    def min_overlap(self) -> int:
        """Smallest author overlap that associates a publication."""
        return max(2, -(-len(self.members) // 2))


@dataclass
class TeamTable:
    teams: list[Team] = field(default_factory=list)

    def __post_init__(self):
        self._by_id = {t.team_id: t for t in self.teams}

    def __len__(self):
        return len(self.teams)

    def __iter__(self):
        return iter(self.teams)

    def get(self, team_id: int) -> Team | None:
        return self._by_id.get(team_id)


def assemble_teams(cliques: list[TemporalClique]) -> TeamTable:
    """Group cliques by exact member set; ids follow the canonical sort."""
    grouped: dict[tuple[str, ...], list[Interval]] = {}
    for clique in cliques:
        grouped.setdefault(clique.members, []).append((clique.start, clique.end))
    teams = []
    for team_id, members in enumerate(sorted(grouped)):
        intervals = tuple(sorted(grouped[members]))
        teams.append(Team(
            team_id=team_id,
            members=members,
            intervals=intervals,
            duration_start=intervals[0][0],
            duration_end=intervals[-1][1],
        ))
    return TeamTable(teams)


def build_author_pub_index(pubs: PublicationTable) -> dict[str, list[str]]:
    index: dict[str, list[str]] = {}
    for rec in pubs:
        for author_id in rec.author_ids():
            index.setdefault(author_id, []).append(rec.pub_id)
    return index


def associate_publications(team: Team, pubs: PublicationTable,
                           index: dict[str, list[str]] | None = None) -> list[str]:
    """Publication ids associated with the team, sorted by (year, pub_id)."""
    if index is None:
        index = build_author_pub_index(pubs)
    overlap: dict[str, int] = {}
    for member in team.members:
        for pub_id in index.get(member, ()):
            overlap[pub_id] = overlap.get(pub_id, 0) + 1
    need = team.min_overlap()
    chosen = []
    for pub_id, count in overlap.items():
        if count < need:
            continue
        rec = pubs.get(pub_id)
        if contains_year(list(team.intervals), rec.year):
            chosen.append((rec.year, pub_id))
    chosen.sort()
    return [pub_id for _, pub_id in chosen]


def associate_all(teams: TeamTable, pubs: PublicationTable):
    """Fill team.pubs for every team using one shared author index."""
    index = build_author_pub_index(pubs)
    for team in teams:
        team.pubs = tuple(associate_publications(team, pubs, index))


def city_coordinates(pubs: PublicationTable) -> dict[str, tuple[float, float]]:
    """Canonical representative point per city: smallest (lat, lon) observed."""
    coords: dict[str, tuple[float, float]] = {}
    for rec in pubs:
        for author in rec.authors:
            for aff in author.affiliations:
                if aff.city_id is None or not aff.has_geo():
                    continue
                point = (aff.lat, aff.lon)
                if aff.city_id not in coords or point < coords[aff.city_id]:
                    coords[aff.city_id] = point
    return coords


def composition_metrics(team: Team, pubs: PublicationTable,
                        city_coords: dict[str, tuple[float, float]]) -> CompositionMetrics:
    """Distinct orgs / cities / countries of team members on team publications,
    normalized by team size; plus the mean pairwise city distance per member.

    Affiliations of co-authors outside the team are ignored.
    """
    members = set(team.members)
    orgs: set[str] = set()
    cities: set[str] = set()
    countries: set[str] = set()
    for pub_id in team.pubs:
        rec = pubs.get(pub_id)
        for author in rec.authors:
            if author.author_id not in members:
                continue
            for aff in author.affiliations:
                if aff.org_id is not None:
                    orgs.add(aff.org_id)
                if aff.city_id is not None:
                    cities.add(aff.city_id)
                if aff.country is not None:
                    countries.add(aff.country)
    size = len(team.members)
    located = sorted(c for c in cities if c in city_coords)
    mean_distance = 0.0
    if len(located) >= 2:
        total = 0.0
        pairs = 0
        for i in range(len(located)):
            lat1, lon1 = city_coords[located[i]]
            for j in range(i + 1, len(located)):
                lat2, lon2 = city_coords[located[j]]
                total += great_circle_km(lat1, lon1, lat2, lon2)
                pairs += 1
        mean_distance = total / pairs / size
    return CompositionMetrics(
        orgs_per_member=len(orgs) / size,
        cities_per_member=len(cities) / size,
        countries_per_member=len(countries) / size,
        mean_city_distance_km=mean_distance,
    )


def compute_all_metrics(teams: TeamTable, pubs: PublicationTable):
    coords = city_coordinates(pubs)
    for team in teams:
        team.metrics = composition_metrics(team, pubs, coords)


# --- artifacts ----------------------------------------------------------------

def _format_intervals(intervals: tuple[Interval, ...]) -> str:
    return ";".join(f"{s}-{e}" for s, e in intervals)


def _parse_intervals(raw: str) -> tuple[Interval, ...]:
    out = []
    for chunk in raw.split(";"):
        s, e = chunk.split("-")
        out.append((int(s), int(e)))
    return tuple(out)


def write_teams_csv(teams: TeamTable, tags, path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["team_id", "members", "intervals", "duration_start",
                         "duration_end", "n_pubs", "n_top10", "n_top1",
                         "orgs_pm", "cities_pm", "countries_pm", "dist_pm"])
        for team in teams:
            n10 = n1 = 0
            for pub_id in team.pubs:
                tag = tags.get(pub_id)
                if tag is not None and tag.top10:
                    n10 += 1
                if tag is not None and tag.top1:
                    n1 += 1
            m = team.metrics
            writer.writerow([
                team.team_id, ";".join(team.members), _format_intervals(team.intervals),
                team.duration_start, team.duration_end, len(team.pubs), n10, n1,
                repr(m.orgs_per_member), repr(m.cities_per_member),
                repr(m.countries_per_member), repr(m.mean_city_distance_km),
            ])


def write_team_pubs_csv(teams: TeamTable, path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["team_id", "pub_id"])
        for team in teams:
            for pub_id in team.pubs:
                writer.writerow([team.team_id, pub_id])


def read_teams_csv(teams_path: str | Path, team_pubs_path: str | Path | None = None) -> TeamTable:
    pubs_by_team: dict[int, list[str]] = {}
    if team_pubs_path is not None:
        with open(team_pubs_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            next(reader)
            for row in reader:
                pubs_by_team.setdefault(int(row[0]), []).append(row[1])
    teams = []
    with open(teams_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            team_id = int(row[0])
            teams.append(Team(
                team_id=team_id,
                members=tuple(row[1].split(";")),
                intervals=_parse_intervals(row[2]),
                duration_start=int(row[3]),
                duration_end=int(row[4]),
                pubs=tuple(pubs_by_team.get(team_id, ())),
                metrics=CompositionMetrics(
                    orgs_per_member=float(row[8]),
                    cities_per_member=float(row[9]),
                    countries_per_member=float(row[10]),
                    mean_city_distance_km=float(row[11]),
                ),
            ))
    return TeamTable(teams)
