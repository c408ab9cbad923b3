from hypothesis import given, settings
from hypothesis import strategies as st

from teammine.ingest import PublicationRecord
from teammine.pairs import build_pair_timelines, canonical_pair

from helpers import pub, table


def test_triangle():
    pubs = table([pub("p1", 5, ["A", "B", "C"])])
    timelines = build_pair_timelines(pubs)
    assert timelines == {("A", "B"): [5], ("A", "C"): [5], ("B", "C"): [5]}


def test_multiplicity():
    pubs = table([pub("p1", 2, ["A", "B"]), pub("p2", 2, ["B", "A"])])
    assert build_pair_timelines(pubs) == {("A", "B"): [2, 2]}


def test_single_author_pubs_contribute_nothing():
    pubs = table([pub(f"p{i}", 3, ["A"]) for i in range(4)])
    assert build_pair_timelines(pubs) == {}


def test_author_cap_excludes_large_pubs():
    pubs = table([pub("p1", 3, ["A", "B", "C", "D"]), pub("p2", 4, ["A", "B"])])
    timelines = build_pair_timelines(pubs, author_cap=3)
    assert timelines == {("A", "B"): [4]}


@st.composite
def corpora(draw):
    records = []
    for i in range(draw(st.integers(1, 12))):
        size = draw(st.integers(1, 5))
        ids = draw(st.lists(st.integers(0, 9), min_size=size, max_size=size,
                            unique=True))
        records.append(pub(f"p{i}", draw(st.integers(1, 6)),
                           [f"a{x}" for x in ids]))
    return records


@given(corpora())
@settings(max_examples=60, deadline=None)
def test_pair_count_sum_invariant(records):
    timelines = build_pair_timelines(table(records))
    expected = sum(len(r.authors) * (len(r.authors) - 1) // 2 for r in records)
    assert sum(len(years) for years in timelines.values()) == expected


@given(corpora(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_author_order_irrelevant(records, rng):
    shuffled = []
    for rec in records:
        authors = list(rec.authors)
        rng.shuffle(authors)
        shuffled.append(PublicationRecord(rec.pub_id, rec.year, rec.doc_type,
                                          rec.fields, tuple(authors)))
    assert build_pair_timelines(table(records)) == build_pair_timelines(table(shuffled))


def test_canonical_pair_ordering():
    assert canonical_pair("b", "a") == ("a", "b") == canonical_pair("a", "b")
