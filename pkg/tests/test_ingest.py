import json

import pytest

from teammine.errors import IngestError
from teammine.ingest import (DocType, IngestConfig, corpus_stats, load_citations,
                             load_publications, write_publications_jsonl)
from teammine.synthgen import SynthConfig, generate_corpus

from helpers import pub_json, tag_table, write_citations, write_jsonl

CONFIG = IngestConfig(year_min=2008, year_max=2020)


def test_hundred_valid_articles(tmp_path):
    records = [pub_json(f"p{i}", 2010, ["a1", "a2"]) for i in range(100)]
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, records)
    pubs = load_publications(path, CONFIG)
    assert len(pubs) == 100
    assert pubs.rejects == []
    assert pubs.input_lines == 100


def test_editorial_rejected(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"], doc_type="Editorial")])
    pubs = load_publications(path, CONFIG)
    assert len(pubs) == 0
    assert pubs.rejects == [(1, "doc_type")]


def test_reject_reasons(tmp_path):
    records = [
        pub_json("p1", 1999, ["a1"]),                       # year_window
        pub_json("p2", 2010, []),                           # no_authors
        pub_json("p3", 2010, ["a1", "a1"]),                 # duplicate_author
        pub_json("p4", 2010, ["a1"], fields=()),            # fields
        pub_json("p5", 2010, ["a1"], affs=[{}]),            # affiliation
        pub_json("p6", 2010, ["a1"], affs=[{"lat": 95.0, "lon": 0.0}]),  # coordinates
        pub_json("p7", 2010, ["a1"], affs=[{"lat": 5.0}]),  # half a coordinate
        pub_json("p8", 2010, ["a1"]),
    ]
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, records)
    pubs = load_publications(path, CONFIG)
    assert len(pubs) == 1
    reasons = [reason for _, reason in pubs.rejects]
    assert reasons == ["year_window", "no_authors", "duplicate_author", "fields",
                       "affiliation", "coordinates", "coordinates"]
    assert len(pubs) + len(pubs.rejects) == pubs.input_lines


def test_affiliation_org_only_is_fine(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"], affs=[{"org_id": "o1"}])])
    pubs = load_publications(path, CONFIG)
    assert len(pubs) == 1
    aff = pubs.get("p1").authors[0].affiliations[0]
    assert aff.city_id is None and not aff.has_geo()


def test_geo_only_is_fine(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"], affs=[{"lat": 1.0, "lon": 2.0}])])
    assert len(load_publications(path, CONFIG)) == 1


def test_duplicate_pub_id_fatal(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"]), pub_json("p1", 2011, ["a2"])])
    with pytest.raises(IngestError, match="line 2.*duplicate"):
        load_publications(path, CONFIG)


def test_malformed_line_reports_number(tmp_path):
    path = tmp_path / "pubs.jsonl"
    with open(path, "w") as fh:
        fh.write(json.dumps(pub_json("p1", 2010, ["a1"])) + "\n")
        fh.write("{not json\n")
    with pytest.raises(IngestError, match="line 2"):
        load_publications(path, CONFIG)


def test_missing_key_is_malformed(tmp_path):
    path = tmp_path / "pubs.jsonl"
    record = pub_json("p1", 2010, ["a1"])
    del record["year"]
    write_jsonl(path, [record])
    with pytest.raises(IngestError, match="missing key 'year'"):
        load_publications(path, CONFIG)


def test_planted_reject_rate(tmp_path):
    # 867 valid records plus planted rejects: 13.3% of input lines excluded
    config = SynthConfig(seed=5, year_min=1, year_max=5,
                         teams=(), n_background_authors=30, background_pubs=867,
                         reject_fraction=0.133)
    generate_corpus(config, tmp_path)
    pubs = load_publications(tmp_path / "publications.jsonl",
                             IngestConfig(year_min=1, year_max=5))
    assert pubs.input_lines == 1000
    assert len(pubs.rejects) == 133
    assert len(pubs) / pubs.input_lines == pytest.approx(0.867, abs=0.0005)


def test_idempotent_canonical_roundtrip(tmp_path):
    records = [pub_json(f"p{i}", 2010 + i % 3, ["a1", "a2", "a3"]) for i in range(20)]
    raw = tmp_path / "pubs.jsonl"
    write_jsonl(raw, records)
    pubs = load_publications(raw, CONFIG)
    first = tmp_path / "canonical1.jsonl"
    second = tmp_path / "canonical2.jsonl"
    write_publications_jsonl(pubs, first)
    write_publications_jsonl(load_publications(first, CONFIG), second)
    assert first.read_bytes() == second.read_bytes()


def test_stored_records_satisfy_invariants(tmp_path):
    config = SynthConfig(seed=1, year_min=1, year_max=8, teams=(),
                         n_background_authors=40, background_pubs=300)
    generate_corpus(config, tmp_path)
    pubs = load_publications(tmp_path / "publications.jsonl",
                             IngestConfig(year_min=1, year_max=8))
    seen = set()
    for rec in pubs:
        assert rec.pub_id not in seen
        seen.add(rec.pub_id)
        assert 1 <= rec.year <= 8
        assert rec.fields
        assert rec.authors
        ids = rec.author_ids()
        assert len(set(ids)) == len(ids)
        for entry in rec.authors:
            assert entry.affiliations
            for aff in entry.affiliations:
                assert aff.org_id is not None or aff.has_geo()
                if aff.has_geo():
                    assert -90 <= aff.lat <= 90 and -180 <= aff.lon <= 180


# --- citations ---

def _pubs_for_citations(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"]), pub_json("p2", 2012, ["a2"])])
    return load_publications(path, CONFIG)


def test_empty_citation_file(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [])
    assert len(load_citations(path, pubs)) == 0


def test_unknown_cited_dropped(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [("x1", "nope", 2011)])
    cites = load_citations(path, pubs)
    assert len(cites) == 0
    assert cites.drop_counts == {"unknown_cited": 1}


def test_all_window_events_stored(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [("x1", "p1", 2010), ("x2", "p1", 2011), ("x3", "p1", 2015)])
    cites = load_citations(path, pubs)
    assert [(e.cited_pub_id, e.citing_year) for e in cites] == \
        [("p1", 2010), ("p1", 2011), ("p1", 2015)]


def test_citing_year_defaults_to_citing_pub_year(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [("p2", "p1", "")])
    cites = load_citations(path, pubs)
    assert cites.events[0].citing_year == 2012


def test_missing_year_unknown_citing_dropped(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [("ghost", "p1", "")])
    cites = load_citations(path, pubs)
    assert cites.drop_counts == {"missing_year": 1}


def test_year_before_cited_dropped(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    write_citations(path, [("x1", "p1", 2009)])
    cites = load_citations(path, pubs)
    assert len(cites) == 0
    assert cites.drop_counts == {"year_before_cited": 1}


def test_malformed_citation_line_fatal(tmp_path):
    pubs = _pubs_for_citations(tmp_path)
    path = tmp_path / "cites.csv"
    with open(path, "w") as fh:
        fh.write("citing_pub_id,cited_pub_id,citing_year\nx1,p1,notayear\n")
    with pytest.raises(IngestError, match="line 2"):
        load_citations(path, pubs)


# --- document type prevalence ---

def test_corpus_stats_all_articles(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json(f"p{i}", 2010, ["a1"]) for i in range(5)])
    pubs = load_publications(path, CONFIG)
    tags = tag_table({f"p{i}": (0, False, False) for i in range(5)})
    stats = corpus_stats(pubs, tags)
    by_type = {row[0]: row for row in stats.rows}
    assert by_type["Article"][1] == 5
    assert by_type["Article"][2] == 100.0
    assert not stats.empty


def test_corpus_stats_review_overrepresented_in_top1(tmp_path):
    records = [pub_json(f"a{i}", 2010, ["a1"]) for i in range(90)]
    records += [pub_json(f"r{i}", 2010, ["a1"], doc_type="Review") for i in range(10)]
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, records)
    pubs = load_publications(path, CONFIG)
    # plant: every Review is top1, only 10 of 90 Articles are
    tags = {f"a{i}": (1, True, i < 10) for i in range(90)}
    tags.update({f"r{i}": (9, True, True) for i in range(10)})
    stats = corpus_stats(pubs, tag_table(tags))
    by_type = {row[0]: row for row in stats.rows}
    assert by_type["Review"][6] > by_type["Review"][2]
    assert by_type["Review"][6] == 50.0  # 10 of 20 top1 publications


def test_corpus_stats_percentages_sum_to_100(tmp_path):
    records = [pub_json(f"p{i}", 2010, ["a1"],
                        doc_type=["Article", "Review", "Letter", "Proceedings Paper"][i % 4])
               for i in range(37)]
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, records)
    pubs = load_publications(path, CONFIG)
    tags = tag_table({f"p{i}": (1, True, i % 3 == 0) for i in range(37)})
    stats = corpus_stats(pubs, tags)
    for col in (2, 4, 6):
        assert sum(row[col] for row in stats.rows) == pytest.approx(100.0, abs=0.01)


def test_corpus_stats_empty_corpus(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [])
    pubs = load_publications(path, CONFIG)
    stats = corpus_stats(pubs, tag_table({}))
    assert stats.empty
    assert all(row[1] == 0 and row[2] == 0.0 for row in stats.rows)


def test_proceedings_paper_aliases(tmp_path):
    path = tmp_path / "pubs.jsonl"
    write_jsonl(path, [pub_json("p1", 2010, ["a1"], doc_type="Proceeding Paper"),
                       pub_json("p2", 2010, ["a1"], doc_type="Proceedings Paper")])
    pubs = load_publications(path, CONFIG)
    assert all(rec.doc_type is DocType.PROCEEDINGS_PAPER for rec in pubs)
