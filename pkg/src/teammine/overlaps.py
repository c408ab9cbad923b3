"""Team overlap taxonomy: kind x relative timing -> impulse for the focal team.

Two teams form a candidate pair when their member overlap reaches half of the
larger member set. The member-set relation decides the kind: a proper subset
of the focal team is a core, a proper superset an extension, anything else an
offshoot (split by whether a preceding core of the focal team sits inside the
shared members). Relative timing compares duration starts.

Impulses per cell:

    kind \\ timing          preceding     simultaneous   succeeding
    core                    persistence   (none)         impossible
    extension               impossible    synchronous    freshness
    offshoot, shared core   (none)        synchronous    freshness
    offshoot, no shared     persistence   synchronous    freshness

A simultaneous core's first-year output is almost surely shared with the focal
team, and a preceding offshoot with a shared core would double-count the
core's persistence impulse; both are recorded with impulse "none". Clique
structure forces a core's span to contain the focal span (and an extension's
to sit inside it); pairs violating that raise, and the batch classifier counts
them as anomalies instead of classifying them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from teammine.errors import InternalInconsistencyError
from teammine.teams import Team, TeamTable


class OverlapKind(Enum):
    CORE = "core"
    EXTENSION = "extension"
    OFFSHOOT_SHARED_CORE = "offshoot_shared_core"
    OFFSHOOT_NO_SHARED_CORE = "offshoot_no_shared_core"


class Timing(Enum):
    PRECEDING = "preceding"
    SIMULTANEOUS = "simultaneous"
    SUCCEEDING = "succeeding"


class Impulse(Enum):
    PERSISTENCE = "persistence"
    SYNCHRONOUS = "synchronous"
    FRESHNESS = "freshness"
    NONE = "none"


_IMPULSE_TABLE = {
    (OverlapKind.CORE, Timing.PRECEDING): Impulse.PERSISTENCE,
    (OverlapKind.CORE, Timing.SIMULTANEOUS): Impulse.NONE,
    (OverlapKind.EXTENSION, Timing.SIMULTANEOUS): Impulse.SYNCHRONOUS,
    (OverlapKind.EXTENSION, Timing.SUCCEEDING): Impulse.FRESHNESS,
    (OverlapKind.OFFSHOOT_SHARED_CORE, Timing.PRECEDING): Impulse.NONE,
    (OverlapKind.OFFSHOOT_SHARED_CORE, Timing.SIMULTANEOUS): Impulse.SYNCHRONOUS,
    (OverlapKind.OFFSHOOT_SHARED_CORE, Timing.SUCCEEDING): Impulse.FRESHNESS,
    (OverlapKind.OFFSHOOT_NO_SHARED_CORE, Timing.PRECEDING): Impulse.PERSISTENCE,
    (OverlapKind.OFFSHOOT_NO_SHARED_CORE, Timing.SIMULTANEOUS): Impulse.SYNCHRONOUS,
    (OverlapKind.OFFSHOOT_NO_SHARED_CORE, Timing.SUCCEEDING): Impulse.FRESHNESS,
}


@dataclass(frozen=True, slots=True)
class OverlapRelation:
    focal_team_id: int
    other_team_id: int
    kind: OverlapKind
    timing: Timing
    impulse: Impulse


def build_member_index(teams: TeamTable) -> dict[str, list[int]]:
    index: dict[str, list[int]] = {}
    for team in teams:
        for member in team.members:
            index.setdefault(member, []).append(team.team_id)
    return index


def overlap_candidates_for(focal: Team, teams: TeamTable,
                           index: dict[str, list[int]]) -> list[int]:
    """Other team ids whose member overlap reaches half of the larger set."""
    shared: dict[int, int] = {}
    for member in focal.members:
        for team_id in index.get(member, ()):
            if team_id != focal.team_id:
                shared[team_id] = shared.get(team_id, 0) + 1
    out = []
    for team_id in sorted(shared):
        other = teams.get(team_id)
        if 2 * shared[team_id] >= max(len(other.members), len(focal.members)):
            out.append(team_id)
    return out


def find_overlap_candidates(teams: TeamTable) -> list[tuple[int, int]]:
    """All ordered (focal, other) candidate pairs, via the member index."""
    index = build_member_index(teams)
    pairs = []
    for focal in teams:
        for other_id in overlap_candidates_for(focal, teams, index):
            pairs.append((focal.team_id, other_id))
    return pairs


def _timing(focal: Team, other: Team) -> Timing:
    if other.duration_start < focal.duration_start:
        return Timing.PRECEDING
    if other.duration_start == focal.duration_start:
        return Timing.SIMULTANEOUS
    return Timing.SUCCEEDING


def shared_core_test(focal: Team, offshoot: Team, teams: TeamTable,
                     index: dict[str, list[int]] | None = None) -> bool:
    """True when a preceding core of the focal team lies inside the overlap."""
    if index is None:
        index = build_member_index(teams)
    overlap = set(focal.members) & set(offshoot.members)
    checked: set[int] = set()
    for member in sorted(overlap):
        for team_id in index.get(member, ()):
            if team_id in checked or team_id == focal.team_id:
                continue
            checked.add(team_id)
            core = teams.get(team_id)
            if not set(core.members) <= overlap:
                continue
            if 2 * len(core.members) < len(focal.members):
                continue  # too small to count as an overlapping core
            if core.duration_start < focal.duration_start:
                return True
    return False


def _inconsistent(code: str, message: str):
    exc = InternalInconsistencyError(message)
    exc.code = code
    raise exc


def classify_overlap(focal: Team, other: Team, teams: TeamTable,
                     index: dict[str, list[int]] | None = None) -> OverlapRelation:
    """Classify one candidate pair; raises when clique-structure lemmas fail."""
    members_f = set(focal.members)
    members_o = set(other.members)
    timing = _timing(focal, other)
    if members_o < members_f:
        kind = OverlapKind.CORE
        spans_ok = (other.duration_start <= focal.duration_start
                    and other.duration_end >= focal.duration_end
                    and (other.duration_start < focal.duration_start
                         or other.duration_end > focal.duration_end))
        if not spans_ok:
            _inconsistent("core_span", f"core team {other.team_id} does not span "
                                       f"focal team {focal.team_id}")
    elif members_f < members_o:
        kind = OverlapKind.EXTENSION
        spans_ok = (focal.duration_start <= other.duration_start
                    and other.duration_end <= focal.duration_end
                    and (focal.duration_start < other.duration_start
                         or other.duration_end < focal.duration_end))
        if not spans_ok:
            _inconsistent("extension_span", f"extension team {other.team_id} not "
                                            f"inside focal team {focal.team_id}")
    else:
        if members_f == members_o:
            _inconsistent("duplicate_member_set",
                          f"teams {focal.team_id} and {other.team_id} share one member set")
        if shared_core_test(focal, other, teams, index):
            kind = OverlapKind.OFFSHOOT_SHARED_CORE
        else:
            kind = OverlapKind.OFFSHOOT_NO_SHARED_CORE
    impulse = _IMPULSE_TABLE.get((kind, timing))
    if impulse is None:
        _inconsistent("infeasible_cell",
                      f"infeasible cell {kind.value}+{timing.value} for teams "
                      f"{focal.team_id}/{other.team_id}")
    return OverlapRelation(focal.team_id, other.team_id, kind, timing, impulse)


def classify_all(teams: TeamTable) -> tuple[list[OverlapRelation], dict[str, int]]:
    """Relations for every candidate pair, plus anomaly counts.

    Pairs that violate a structural lemma are excluded from the relation list
    and tallied by lemma; noise-free corpora must produce zero anomalies.
    """
    index = build_member_index(teams)
    relations: list[OverlapRelation] = []
    anomalies: dict[str, int] = {}
    for focal in teams:
        for other_id in overlap_candidates_for(focal, teams, index):
            try:
                relations.append(classify_overlap(focal, teams.get(other_id), teams, index))
            except InternalInconsistencyError as exc:
                code = getattr(exc, "code", "other")
                anomalies[code] = anomalies.get(code, 0) + 1
    return relations, anomalies


# --- impulse summaries --------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TeamSuccessProfile:
    has_top10: bool
    has_top1: bool
    first_top10_year: int | None
    first_top1_year: int | None
    n_top10: int
    n_top1: int


def team_success_profile(team: Team, pubs, tags) -> TeamSuccessProfile:
    first10 = first1 = None
    n10 = n1 = 0
    for pub_id in team.pubs:  # sorted by (year, pub_id)
        tag = tags.get(pub_id)
        if tag is None:
            continue
        year = pubs.get(pub_id).year
        if tag.top10:
            n10 += 1
            if first10 is None:
                first10 = year
        if tag.top1:
            n1 += 1
            if first1 is None:
                first1 = year
    return TeamSuccessProfile(n10 > 0, n1 > 0, first10, first1, n10, n1)


@dataclass
class ImpulseSummary:
    team_id: int
    persistence: int = 0
    synchronous: int = 0
    freshness: int = 0
    persistence_top10: int = 0
    persistence_top1: int = 0
    synchronous_top10: int = 0
    synchronous_top1: int = 0
    freshness_top10: int = 0
    freshness_top1: int = 0
    persistence_early_top10: int = 0
    persistence_early_top1: int = 0
    impulses_per_year: float = 0.0

    @property
    def total(self) -> int:
        return self.persistence + self.synchronous + self.freshness


def impulse_summary(focal: Team, relations: list[OverlapRelation],
                    profiles: dict[int, TeamSuccessProfile]) -> ImpulseSummary:
    """Impulse counters for one focal team over its classified relations."""
    summary = ImpulseSummary(team_id=focal.team_id)
    for rel in relations:
        if rel.focal_team_id != focal.team_id or rel.impulse is Impulse.NONE:
            continue
        source = profiles[rel.other_team_id]
        if rel.impulse is Impulse.PERSISTENCE:
            summary.persistence += 1
            summary.persistence_top10 += source.has_top10
            summary.persistence_top1 += source.has_top1
            if source.first_top10_year is not None and source.first_top10_year < focal.duration_start:
                summary.persistence_early_top10 += 1
            if source.first_top1_year is not None and source.first_top1_year < focal.duration_start:
                summary.persistence_early_top1 += 1
        elif rel.impulse is Impulse.SYNCHRONOUS:
            summary.synchronous += 1
            summary.synchronous_top10 += source.has_top10
            summary.synchronous_top1 += source.has_top1
        else:
            summary.freshness += 1
            summary.freshness_top10 += source.has_top10
            summary.freshness_top1 += source.has_top1
    summary.impulses_per_year = summary.total / focal.duration
    return summary


def summarize_all(teams: TeamTable, relations: list[OverlapRelation],
                  pubs, tags) -> dict[int, ImpulseSummary]:
    """One summary per team, closed teams included (all-zero counters)."""
    profiles = {team.team_id: team_success_profile(team, pubs, tags) for team in teams}
    by_focal: dict[int, list[OverlapRelation]] = {}
    for rel in relations:
        by_focal.setdefault(rel.focal_team_id, []).append(rel)
    return {
        team.team_id: impulse_summary(team, by_focal.get(team.team_id, []), profiles)
        for team in teams
    }


# --- artifacts ----------------------------------------------------------------

def write_overlaps_csv(relations: list[OverlapRelation], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["focal_id", "other_id", "kind", "timing", "impulse"])
        for rel in relations:
            writer.writerow([rel.focal_team_id, rel.other_team_id,
                             rel.kind.value, rel.timing.value, rel.impulse.value])


def read_overlaps_csv(path: str | Path) -> list[OverlapRelation]:
    relations = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            relations.append(OverlapRelation(int(row[0]), int(row[1]),
                                             OverlapKind(row[2]), Timing(row[3]),
                                             Impulse(row[4])))
    return relations


IMPULSE_COLUMNS = ["team_id", "persistence", "synchronous", "freshness",
                   "persistence_top10", "persistence_top1",
                   "synchronous_top10", "synchronous_top1",
                   "freshness_top10", "freshness_top1",
                   "persistence_early_top10", "persistence_early_top1",
                   "impulses_per_year"]


def write_impulses_csv(summaries: dict[int, ImpulseSummary], path: str | Path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(IMPULSE_COLUMNS)
        for team_id in sorted(summaries):
            s = summaries[team_id]
            writer.writerow([s.team_id, s.persistence, s.synchronous, s.freshness,
                             s.persistence_top10, s.persistence_top1,
                             s.synchronous_top10, s.synchronous_top1,
                             s.freshness_top10, s.freshness_top1,
                             s.persistence_early_top10, s.persistence_early_top1,
                             repr(s.impulses_per_year)])


def read_impulses_csv(path: str | Path) -> dict[int, ImpulseSummary]:
    summaries = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            summary = ImpulseSummary(team_id=int(row[0]))
            for col, value in zip(IMPULSE_COLUMNS[1:12], row[1:12]):
                setattr(summary, col, int(value))
            summary.impulses_per_year = float(row[12])
            summaries[summary.team_id] = summary
    return summaries
