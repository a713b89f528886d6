import random

import pytest

from confmatch.corpus import (
    Bid,
    DanglingReferenceError,
    SchemaError,
    load_corpus,
    normalize_domain,
    save_corpus,
    seniority_level,
)

from conftest import corpus_of, make_paper, make_reviewer


class TestNormalizeDomain:
    def test_strips_department_prefix_from_ac_domain(self):
        assert normalize_domain("cse.iitd.ac.in") == "iitd.ac.in"

    def test_idempotent_on_already_normal_domain(self):
        assert normalize_domain("iitd.ac.in") == "iitd.ac.in"

    def test_lowercases_and_strips_prefix(self):
        assert normalize_domain("CSE.Stanford.EDU") == "stanford.edu"

    def test_collapses_unknown_prefix_before_ac_suffix(self):
        assert normalize_domain("dept.iitd.ac.in") == "iitd.ac.in"

    def test_strips_repeated_prefixes(self):
        assert normalize_domain("www.cs.stanford.edu") == "stanford.edu"

    def test_idempotent_for_random_inputs(self):
        rng = random.Random(7)
        labels = ["cs", "cse", "www", "ee", "ac", "edu", "iitd", "mit", "in", "uk", "x1"]
        for _ in range(500):
            raw = ".".join(rng.choices(labels, k=rng.randint(1, 5)))
            once = normalize_domain(raw)
            assert normalize_domain(once) == once


class TestSeniorityLevel:
    def test_three_committees_is_senior(self):
        assert seniority_level(make_reviewer("r", committees=3)) == 3

    def test_seven_papers_is_level_two(self):
        assert seniority_level(make_reviewer("r", papers=7)) == 2

    def test_floor_case(self):
        assert seniority_level(make_reviewer("r")) == 0

    def test_overlap_at_four_papers_takes_higher_band(self):
        assert seniority_level(make_reviewer("r", papers=4)) == 2

    def test_total_and_monotone(self):
        grid = range(0, 13)
        for committees in grid:
            for papers in grid:
                level = seniority_level(make_reviewer("r", committees=committees, papers=papers))
                assert level in (0, 1, 2, 3)
                up_c = seniority_level(make_reviewer("r", committees=committees + 1, papers=papers))
                up_p = seniority_level(make_reviewer("r", committees=committees, papers=papers + 1))
                assert up_c >= level
                assert up_p >= level


class TestBuildAndLoad:
    def test_identity_load(self, tiny_corpus):
        assert len(tiny_corpus.papers) == 3
        assert len(tiny_corpus.reviewers) == 4

    def test_dangling_bid_rejected(self):
        with pytest.raises(DanglingReferenceError, match="nosuch"):
            corpus_of(
                [make_paper("p1")],
                [make_reviewer("rev1")],
                bids=[Bid("rev1", "nosuch", "eager")],
            )

    def test_duplicate_bid_keeps_last(self):
        corpus = corpus_of(
            [make_paper("p1")],
            [make_reviewer("rev1")],
            bids=[Bid("rev1", "p1", "willing"), Bid("rev1", "p1", "eager")],
        )
        assert len(corpus.bids) == 1
        assert corpus.bids[("rev1", "p1")].level == "eager"

    def test_duplicate_paper_rejected(self):
        with pytest.raises(SchemaError, match="duplicate paper"):
            corpus_of([make_paper("p1"), make_paper("p1")], [make_reviewer("rev1")])

    def test_unknown_keyword_rejected(self):
        with pytest.raises(DanglingReferenceError, match="k_bogus"):
            corpus_of([make_paper("p1", primary="k_bogus")], [make_reviewer("rev1")])

    def test_unknown_region_rejected(self):
        with pytest.raises(DanglingReferenceError, match="atlantis"):
            corpus_of([make_paper("p1")], [make_reviewer("rev1", region="atlantis")])

    def test_secondary_must_exclude_primary(self):
        with pytest.raises(SchemaError, match="primary keyword as secondary"):
            corpus_of(
                [make_paper("p1", primary="k_ml", secondary=("k_ml",))],
                [make_reviewer("rev1")],
            )


class TestRoundTrip:
    def test_save_then_load_is_identity(self, tiny_corpus, tmp_path):
        save_corpus(tiny_corpus, tmp_path)
        reloaded = load_corpus(tmp_path)
        assert reloaded.papers == tiny_corpus.papers
        assert reloaded.reviewers == tiny_corpus.reviewers
        assert reloaded.bids == tiny_corpus.bids
        assert reloaded.taxonomy == tiny_corpus.taxonomy
        assert reloaded.coauthor_graph == tiny_corpus.coauthor_graph
        assert reloaded.person_meta == tiny_corpus.person_meta
        assert reloaded.regions == tiny_corpus.regions
        assert reloaded.external_scores == tiny_corpus.external_scores

    def test_save_load_save_is_byte_stable(self, tiny_corpus, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        save_corpus(tiny_corpus, first)
        save_corpus(load_corpus(first), second)
        for name in ("papers.csv", "reviewers.csv", "bids.csv", "keywords.csv",
                     "regions.csv", "coauthor_edges.csv", "person_meta.csv",
                     "external_scores.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_schema_error_names_file_and_line(self, tiny_corpus, tmp_path):
        save_corpus(tiny_corpus, tmp_path)
        bids = (tmp_path / "bids.csv").read_text().splitlines()
        bids.append("rev1,p1,super_eager")
        (tmp_path / "bids.csv").write_text("\n".join(bids) + "\n")
        with pytest.raises(SchemaError) as excinfo:
            load_corpus(tmp_path)
        assert "bids.csv" in str(excinfo.value)
        assert str(len(bids)) in str(excinfo.value)
