"""Aggregate tables behind the study figures, one machine-readable CSV each.

Every row carries its population N next to the value, and values derived from
counts keep the integer count alongside so that value * N always reconstructs
a whole number. Team age is 1-based: a team's first duration year is age 1,
and duration is measured on the duration span (end - start + 1) even when the
underlying intervals are disconnected.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from teammine.ingest import PublicationTable
from teammine.overlaps import ImpulseSummary
from teammine.success import SuccessTagTable
from teammine.teams import Team


@dataclass(frozen=True, slots=True)
class SeriesRow:
    keys: tuple
    value: float | None
    n: int
    count: int | None = None
    flag: str = ""


@dataclass
class SeriesTable:
    figure_id: str
    key_names: tuple[str, ...]
    rows: list[SeriesRow] = field(default_factory=list)

    def add_fraction(self, keys: tuple, count: int, n: int, percent: bool = False,
                     flag: str = ""):
        if n == 0:
            self.rows.append(SeriesRow(keys, None, 0, None, flag or "no_population"))
            return
        scale = 100 if percent else 1
        self.rows.append(SeriesRow(keys, scale * count / n, n, count, flag))

    def to_csv(self, path: str | Path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([*self.key_names, "value", "n", "flag"])
            for row in self.rows:
                value = "" if row.value is None else repr(row.value)
                writer.writerow([*row.keys, value, row.n, row.flag])


def filter_margin(teams: list[Team], year_min: int, year_max: int, margin: int) -> list[Team]:
    """Drop teams whose duration span touches the first or last margin years."""
    if margin <= 0:
        return list(teams)
    return [t for t in teams
            if t.duration_start > year_min + margin - 1
            and t.duration_end < year_max - margin + 1]


def _is_top(tag, which: str) -> bool:
    if tag is None:
        return False
    return tag.top1 if which == "top1" else tag.top10


def _first_success_age(team: Team, pubs: PublicationTable, tags: SuccessTagTable,
                       which: str) -> int | None:
    for pub_id in team.pubs:  # sorted by (year, pub_id)
        if _is_top(tags.get(pub_id), which):
            return pubs.get(pub_id).year - team.duration_start + 1
    return None


def _success_count(team: Team, tags: SuccessTagTable, which: str) -> int:
    return sum(1 for pub_id in team.pubs if _is_top(tags.get(pub_id), which))


# --- prevalence ----------------------------------------------------------------

def team_prevalence_by_year(pubs: PublicationTable, teams: list[Team],
                            tags: SuccessTagTable, year_min: int, year_max: int) -> SeriesTable:
    """Share of multi-author publications carried by at least one team, per
    year, for the whole corpus and its top cited subsets."""
    team_pubs: set[str] = set()
    for team in teams:
        team_pubs.update(team.pubs)
    num: dict[tuple[str, int], int] = {}
    denom: dict[tuple[str, int], int] = {}
    for rec in pubs:
        if len(rec.authors) < 2:
            continue
        tag = tags.get(rec.pub_id)
        in_team = rec.pub_id in team_pubs
        for name in ("all", "top10", "top1"):
            if name != "all" and not _is_top(tag, name):
                continue
            key = (name, rec.year)
            denom[key] = denom.get(key, 0) + 1
            if in_team:
                num[key] = num.get(key, 0) + 1
    table = SeriesTable("fig1a", ("population", "year"))
    for name in ("all", "top10", "top1"):
        for year in range(year_min, year_max + 1):
            key = (name, year)
            table.add_fraction(key, num.get(key, 0), denom.get(key, 0), percent=True)
    return table


def team_prevalence_by_country(pubs: PublicationTable, teams: list[Team]) -> SeriesTable:
    """Team-publication share per country; a publication counts toward every
    country present in any author affiliation."""
    team_pubs: set[str] = set()
    for team in teams:
        team_pubs.update(team.pubs)
    num: dict[str, int] = {}
    denom: dict[str, int] = {}
    for rec in pubs:
        if len(rec.authors) < 2:
            continue
        countries = {aff.country for a in rec.authors for aff in a.affiliations
                     if aff.country is not None}
        for country in countries:
            denom[country] = denom.get(country, 0) + 1
            if rec.pub_id in team_pubs:
                num[country] = num.get(country, 0) + 1
    table = SeriesTable("fig1b", ("country",))
    for country in sorted(denom):
        table.add_fraction((country,), num.get(country, 0), denom[country], percent=True)
    return table


# --- freshness -----------------------------------------------------------------

def success_prob_by_age(teams: list[Team], pubs: PublicationTable,
                        tags: SuccessTagTable, which: str,
                        duration_bin_width: int | None = None) -> SeriesTable:
    """P(publication is highly cited) by team duration cohort and team age."""
    cells: dict[tuple[int, int], list[int]] = {}
    for team in teams:
        cohort = team.duration
        if duration_bin_width is not None:
            cohort = (cohort - 1) // duration_bin_width * duration_bin_width + 1
        for pub_id in team.pubs:
            age = pubs.get(pub_id).year - team.duration_start + 1
            cell = cells.setdefault((cohort, age), [0, 0])
            cell[0] += 1
            cell[1] += _is_top(tags.get(pub_id), which)
    table = SeriesTable("fig2a", ("duration", "age"))
    for cohort, age in sorted(cells):
        n, count = cells[(cohort, age)]
        table.add_fraction((cohort, age), count, n)
    return table


def first_success_distribution(teams: list[Team], pubs: PublicationTable,
                               tags: SuccessTagTable, which: str) -> SeriesTable:
    """Among successful teams of each duration: % with first success per age."""
    cohorts: dict[int, dict[int, int]] = {}
    totals: dict[int, int] = {}
    for team in teams:
        age = _first_success_age(team, pubs, tags, which)
        if age is None:
            continue
        cohorts.setdefault(team.duration, {})
        cohorts[team.duration][age] = cohorts[team.duration].get(age, 0) + 1
        totals[team.duration] = totals.get(team.duration, 0) + 1
    table = SeriesTable("fig2b", ("duration", "age"))
    for duration in sorted(cohorts):
        for age in range(1, duration + 1):
            table.add_fraction((duration, age), cohorts[duration].get(age, 0),
                               totals[duration], percent=True)
    return table


def newly_successful_rate(teams: list[Team], pubs: PublicationTable,
                          tags: SuccessTagTable, which: str) -> SeriesTable:
    """Per age: % of not yet successful teams whose first success lands there.

    The population at age a holds teams of duration >= a without success
    before a; ages whose population is empty yield a flagged row.
    """
    max_duration = max((t.duration for t in teams), default=0)
    first_ages = [(_first_success_age(t, pubs, tags, which), t.duration) for t in teams]
    table = SeriesTable("figs2add", ("q", "age"))
    label = "0.01" if which == "top1" else "0.10"
    for age in range(1, max_duration + 1):
        at_risk = sum(1 for first, duration in first_ages
                      if duration >= age and (first is None or first >= age))
        newly = sum(1 for first, duration in first_ages if first == age)
        table.add_fraction((label, age), newly, at_risk, percent=True)
    return table


# --- composition -----------------------------------------------------------------

def _quarter_bin(value: float) -> float:
    return math.floor(value * 4) / 4


def success_by_composition(teams: list[Team], tags: SuccessTagTable,
                           which: str) -> SeriesTable:
    """P(publication is highly cited) by binned composition metrics.

    Counts per member round down to 0.25 increments; mean city distance rounds
    down to 10 km increments.
    """
    bins: dict[tuple[str, float], list[int]] = {}
    for team in teams:
        if not team.pubs or team.metrics is None:
            continue
        n_top = sum(1 for pub_id in team.pubs if _is_top(tags.get(pub_id), which))
        metric_bins = (
            ("orgs_pm", _quarter_bin(team.metrics.orgs_per_member)),
            ("cities_pm", _quarter_bin(team.metrics.cities_per_member)),
            ("countries_pm", _quarter_bin(team.metrics.countries_per_member)),
            ("dist_km", float(int(team.metrics.mean_city_distance_km // 10) * 10)),
        )
        for metric, bin_value in metric_bins:
            cell = bins.setdefault((metric, bin_value), [0, 0])
            cell[0] += len(team.pubs)
            cell[1] += n_top
    table = SeriesTable("fig3", ("metric", "bin"))
    for metric, bin_value in sorted(bins):
        n, count = bins[(metric, bin_value)]
        table.add_fraction((metric, bin_value), count, n)
    return table


# --- openness -----------------------------------------------------------------

_IMPULSE_FIELDS = {
    ("persistence", "any"): "persistence",
    ("persistence", "top10"): "persistence_top10",
    ("persistence", "top1"): "persistence_top1",
    ("synchronous", "any"): "synchronous",
    ("synchronous", "top10"): "synchronous_top10",
    ("synchronous", "top1"): "synchronous_top1",
    ("freshness", "any"): "freshness",
    ("freshness", "top10"): "freshness_top10",
    ("freshness", "top1"): "freshness_top1",
}


def success_by_impulse_count(teams: list[Team], summaries: dict[int, ImpulseSummary],
                             pubs: PublicationTable, tags: SuccessTagTable,
                             which: str) -> tuple[SeriesTable, SeriesTable]:
    """Success odds by impulse count: per team (first table) and per
    publication (second table), with a closed-team baseline row."""
    team_cells: dict[tuple[str, str, int], list[int]] = {}
    pub_cells: dict[tuple[str, str, int], list[int]] = {}

    def tally(key, team, successful, n_top):
        tc = team_cells.setdefault(key, [0, 0])
        tc[0] += 1
        tc[1] += successful
        pc = pub_cells.setdefault(key, [0, 0])
        pc[0] += len(team.pubs)
        pc[1] += n_top

    for team in teams:
        summary = summaries[team.team_id]
        n_top = _success_count(team, tags, which)
        successful = n_top > 0
        if summary.total == 0:
            tally(("closed", "any", 0), team, successful, n_top)
            continue
        for (impulse, stratum), attr in _IMPULSE_FIELDS.items():
            count = getattr(summary, attr)
            if count >= 1:
                tally((impulse, stratum, count), team, successful, n_top)
    table_a = SeriesTable("fig5a", ("impulse", "stratum", "count"))
    table_b = SeriesTable("fig5b", ("impulse", "stratum", "count"))
    for key in sorted(team_cells):
        n, count = team_cells[key]
        table_a.add_fraction(key, count, n)
        n, count = pub_cells[key]
        table_b.add_fraction(key, count, n)
    return table_a, table_b


def success_by_impulse_rate(teams: list[Team], summaries: dict[int, ImpulseSummary],
                            tags: SuccessTagTable, which: str) -> SeriesTable:
    """P(at least one / at least two highly cited publications) by the average
    number of new impulses per year, closed teams kept as their own group."""
    cells: dict[tuple[str, float], list[int]] = {}
    for team in teams:
        summary = summaries[team.team_id]
        if summary.total == 0:
            key = ("closed", 0.0)
        else:
            key = ("open", _quarter_bin(summary.impulses_per_year))
        cell = cells.setdefault(key, [0, 0, 0])
        n_top = _success_count(team, tags, which)
        cell[0] += 1
        cell[1] += n_top >= 1
        cell[2] += n_top >= 2
    table = SeriesTable("fig5c", ("group", "bin", "measure"))
    for group, bin_value in sorted(cells):
        n, ge1, ge2 = cells[(group, bin_value)]
        table.add_fraction((group, bin_value, "ge1"), ge1, n)
        table.add_fraction((group, bin_value, "ge2"), ge2, n)
    return table


def first_success_shift(teams: list[Team], summaries: dict[int, ImpulseSummary],
                        pubs: PublicationTable, tags: SuccessTagTable,
                        which: str) -> SeriesTable:
    """Mean decrease in first-success age versus closed teams, per duration
    cohort, for teams holding persistence / freshness / early-success
    persistence impulses. Synchronous impulses carry no timing information and
    are deliberately absent."""
    early_attr = "persistence_early_top1" if which == "top1" else "persistence_early_top10"
    cohort_ages: dict[int, dict[str, list[int]]] = {}
    for team in teams:
        age = _first_success_age(team, pubs, tags, which)
        if age is None:
            continue
        summary = summaries[team.team_id]
        conditions = []
        if summary.total == 0:
            conditions.append("closed")
        if summary.persistence >= 1:
            conditions.append("persistence")
        if summary.freshness >= 1:
            conditions.append("freshness")
        if getattr(summary, early_attr) >= 1:
            conditions.append("early_persistence")
        buckets = cohort_ages.setdefault(team.duration, {})
        for condition in conditions:
            buckets.setdefault(condition, []).append(age)
    table = SeriesTable("fig5d", ("duration", "condition"))
    for duration in sorted(cohort_ages):
        buckets = cohort_ages[duration]
        closed = buckets.get("closed", [])
        closed_mean = Fraction(sum(closed), len(closed)) if closed else None
        for condition in ("closed", "persistence", "freshness", "early_persistence"):
            ages = buckets.get(condition, [])
            if closed_mean is None:
                table.rows.append(SeriesRow((duration, condition), None, len(ages),
                                            None, "no_closed_baseline"))
            elif not ages:
                table.rows.append(SeriesRow((duration, condition), None, 0,
                                            None, "no_population"))
            else:
                decrease = closed_mean - Fraction(sum(ages), len(ages))
                table.rows.append(SeriesRow((duration, condition), float(decrease),
                                            len(ages)))
    return table


# --- one-call bundle ------------------------------------------------------------

def compute_all_figures(pubs: PublicationTable, tags: SuccessTagTable,
                        teams: list[Team], summaries: dict[int, ImpulseSummary],
                        year_min: int, year_max: int) -> dict[str, SeriesTable]:
    """Every figure table, keyed by output file stem."""
    out: dict[str, SeriesTable] = {}
    out["fig1a"] = team_prevalence_by_year(pubs, teams, tags, year_min, year_max)
    out["fig1b"] = team_prevalence_by_country(pubs, teams)
    for which, suffix in (("top1", ""), ("top10", "_top10")):
        out["fig2a" + suffix] = success_prob_by_age(teams, pubs, tags, which)
        out["fig2b" + suffix] = first_success_distribution(teams, pubs, tags, which)
        out["fig3" + suffix] = success_by_composition(teams, tags, which)
        fig5a, fig5b = success_by_impulse_count(teams, summaries, pubs, tags, which)
        out["fig5a" + suffix] = fig5a
        out["fig5b" + suffix] = fig5b
        out["fig5c" + suffix] = success_by_impulse_rate(teams, summaries, tags, which)
        out["fig5d" + suffix] = first_success_shift(teams, summaries, pubs, tags, which)
    add = newly_successful_rate(teams, pubs, tags, "top10")
    add.rows.extend(newly_successful_rate(teams, pubs, tags, "top1").rows)
    out["figs2add"] = add
    return out
