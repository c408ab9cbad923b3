"""Shared builders for test corpora and tables."""

from __future__ import annotations

from pathlib import Path

from teammine.ingest import (Affiliation, AuthorEntry, DocType, PublicationRecord,
                             PublicationTable)
from teammine.pipeline import Pipeline, PipelineConfig
from teammine.success import SuccessTag, SuccessTagTable
from teammine.teams import Team

DEFAULT_AFF = {"org": "org0", "city": "city0", "country": "NL",
               "lat": 52.0, "lon": 4.5}


def affiliation(org="org0", city="city0", country="NL", lat=52.0, lon=4.5) -> Affiliation:
    return Affiliation(org_id=org, city_id=city, country=country, lat=lat, lon=lon)


def author(author_id: str, affs=None) -> AuthorEntry:
    if affs is None:
        affs = (affiliation(org=f"org_{author_id}", city=f"city_{author_id}"),)
    return AuthorEntry(author_id=author_id, affiliations=tuple(affs))


def pub(pub_id: str, year: int, author_ids, doc_type=DocType.ARTICLE,
        fields=("F0",), authors=None) -> PublicationRecord:
    if authors is None:
        authors = tuple(author(a) for a in author_ids)
    return PublicationRecord(pub_id=pub_id, year=year, doc_type=doc_type,
                             fields=tuple(sorted(fields)), authors=tuple(authors))


def table(records) -> PublicationTable:
    return PublicationTable(records=list(records))


def tag_table(entries: dict[str, tuple[int, bool, bool]]) -> SuccessTagTable:
    return SuccessTagTable([SuccessTag(pub_id, c, t10, t1)
                            for pub_id, (c, t10, t1) in entries.items()])


def team(team_id: int, members, intervals, pubs=(), metrics=None) -> Team:
    intervals = tuple(tuple(iv) for iv in intervals)
    return Team(team_id=team_id, members=tuple(sorted(members)), intervals=intervals,
                duration_start=intervals[0][0], duration_end=intervals[-1][1],
                pubs=tuple(pubs), metrics=metrics)


def pub_json(pub_id: str, year: int, author_ids, doc_type="Article", fields=("F0",),
             affs=None) -> dict:
    if affs is None:
        affs = [{"org_id": DEFAULT_AFF["org"], "city_id": DEFAULT_AFF["city"],
                 "country": DEFAULT_AFF["country"], "lat": DEFAULT_AFF["lat"],
                 "lon": DEFAULT_AFF["lon"]}]
    return {"pub_id": pub_id, "year": year, "doc_type": doc_type,
            "fields": list(fields),
            "authors": [{"author_id": a, "affiliations": list(affs)}
                        for a in author_ids]}


def write_jsonl(path: Path, records: list[dict]):
    import json
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def write_citations(path: Path, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("citing_pub_id,cited_pub_id,citing_year\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")


def run_pipeline(corpus_dir: Path, out_dir: Path, year_min: int, year_max: int,
                 **overrides) -> Pipeline:
    config = PipelineConfig(
        pubs_path=str(Path(corpus_dir) / "publications.jsonl"),
        citations_path=str(Path(corpus_dir) / "citations.csv"),
        out_dir=str(out_dir),
        year_min=year_min,
        year_max=year_max,
        margin_years=0,
    )
    for key, value in overrides.items():
        setattr(config, key, value)
    pipeline = Pipeline(config)
    pipeline.run("all")
    return pipeline
