import random

import pytest

from confmatch.bids import FilteredBids
from confmatch.coi import ConflictSet
from confmatch.corpus import Bid
from confmatch.scoring import (
    BID_EXPONENTS,
    DegenerateSamplesError,
    ExpertiseIndex,
    Normalizer,
    aggscore,
    base_score,
    build_score_matrix,
    cleanup,
    cooccurrence,
    densify,
    fit_normalizer,
    hidden_component_deltas,
    sam_score,
)

from conftest import corpus_of, make_paper, make_reviewer


class TestCooccurrence:
    def test_direct_ratio(self):
        # 20 listings of k_ml, 5 of which pair it with k_theory.
        papers = [
            make_paper(f"p{n}", primary="k_ml",
                       secondary=("k_theory",) if n < 5 else ())
            for n in range(15)
        ]
        reviewers = [make_reviewer(f"rev{n}", primary="k_ml") for n in range(5)]
        corpus = corpus_of(papers, reviewers)
        assert cooccurrence(corpus, "k_ml", "k_theory") == pytest.approx(5 / 20)

    def test_self_is_one(self, tiny_corpus):
        assert cooccurrence(tiny_corpus, "k_ml", "k_ml") == 1.0

    def test_disjoint_is_zero(self, tiny_corpus):
        assert cooccurrence(tiny_corpus, "k_ml", "k_detect") == 0.0

    def test_unseen_keyword_contributes_zero(self, tiny_corpus):
        assert cooccurrence(tiny_corpus, "k_detect", "k_ml") == 0.0


class TestDensify:
    def test_own_submission_imputes_point_two(self):
        papers = [make_paper("p1", primary="k_vision", authors=("rev1", "other"))]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers)
        dense = densify(corpus, corpus.reviewers["rev1"])
        assert dense["k_vision"] == pytest.approx(0.2)

    def test_common_parent_imputes_point_four(self):
        papers = [make_paper("p1", primary="k_ml", authors=("a1",))]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers)
        dense = densify(corpus, corpus.reviewers["rev1"])
        # k_theory shares parent area_ml with the primary; no co-occurrence,
        # not on rev1's own papers.
        assert dense["k_theory"] == pytest.approx(0.4)

    def test_max_over_sources(self):
        # Make co-occurrence P(k_theory | k_ml) = 0.9 via 9/10 listings,
        # which beats the 0.4 common-parent value.
        papers = [
            make_paper(f"p{n}", primary="k_ml", secondary=("k_theory",), authors=("a1",))
            for n in range(9)
        ]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers)
        dense = densify(corpus, corpus.reviewers["rev1"])
        assert dense["k_theory"] == pytest.approx(0.9)

    def test_declared_dimensions_fixed(self, tiny_corpus):
        dense = densify(tiny_corpus, tiny_corpus.reviewers["rev1"])
        assert dense["k_ml"] == 1.0


class TestSamScore:
    def test_primary_match_no_secondaries(self):
        paper = make_paper("p1", primary="k_ml")
        assert sam_score(paper, {"k_ml": 1.0}) == pytest.approx(1.0)

    def test_primary_hits_reviewer_secondary(self):
        paper = make_paper("p1", primary="k_ml")
        assert sam_score(paper, {"k_ml": 0.5}) == pytest.approx(0.5)

    def test_worked_example(self):
        paper = make_paper("p1", primary="k_ml", secondary=("k_theory",))
        dense = {"k_ml": 1.0, "k_theory": 0.5}
        assert sam_score(paper, dense) == pytest.approx((1 + 0.5 * 0.5) / 1.5, abs=1e-9)

    def test_zero_secondaries_equals_primary_dot(self):
        rng = random.Random(5)
        for _ in range(200):
            value = rng.random()
            paper = make_paper("p1", primary="k_ml")
            assert sam_score(paper, {"k_ml": value}) == pytest.approx(value, abs=1e-12)


class TestNormalizer:
    def test_exact_fit(self):
        norm = fit_normalizer([(0.0, 0.0), (1.0, 1.0)])
        assert norm.slope == pytest.approx(1.0)
        assert norm.intercept == pytest.approx(0.0)

    def test_half_slope_and_clipping(self):
        norm = fit_normalizer([(0.0, 0.0), (2.0, 1.0)])
        assert norm.slope == pytest.approx(0.5)
        assert norm.apply(3.0) == 1.0

    def test_constant_target(self):
        norm = fit_normalizer([(0.0, 1.0), (1.0, 1.0)])
        assert norm.slope == pytest.approx(0.0)
        assert norm.intercept == pytest.approx(1.0)

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateSamplesError):
            fit_normalizer([(0.5, 0.0), (0.5, 1.0)])


class TestBaseScore:
    def test_all_present(self):
        assert base_score(0.8, 0.6, 0.7) == pytest.approx(0.70)

    def test_tpms_missing(self):
        assert base_score(None, 0.6, 0.7) == pytest.approx(0.65)

    def test_both_missing(self):
        assert base_score(None, None, 0.7) == pytest.approx(0.7)

    def test_hidden_component_identity(self):
        # Hiding one external score shifts the blend by a quarter of the
        # difference between the other external score and the hidden one;
        # the keyword term cancels.
        rng = random.Random(9)
        for _ in range(300):
            t, a, s = rng.random(), rng.random(), rng.random()
            full = base_score(t, a, s)
            assert base_score(None, a, s) - full == pytest.approx((a - t) / 4, abs=1e-12)
            assert base_score(t, None, s) - full == pytest.approx((t - a) / 4, abs=1e-12)


class TestAggscore:
    def test_not_entered_identity(self):
        assert aggscore(0.8, "not_entered") == pytest.approx(0.8)

    def test_not_willing_crushes(self):
        assert aggscore(0.9, "not_willing") == pytest.approx(0.9 ** 20, abs=1e-9)

    def test_willing_lifts(self):
        assert aggscore(0.81, "willing") == pytest.approx(0.81 ** 0.4, abs=1e-9)

    def test_exponent_table(self):
        assert BID_EXPONENTS == {
            "not_willing": 20.0,
            "not_entered": 1.0,
            "in_a_pinch": 0.67,
            "willing": 0.4,
            "eager": 0.25,
        }

    def test_order_preserved_per_level(self):
        rng = random.Random(13)
        for level in BID_EXPONENTS:
            for _ in range(100):
                lo, hi = sorted((rng.random(), rng.random()))
                assert aggscore(lo, level) <= aggscore(hi, level) + 1e-12

    def test_exponents_below_one_never_decrease(self):
        rng = random.Random(14)
        for _ in range(100):
            base = rng.random()
            for level in ("in_a_pinch", "willing", "eager"):
                assert aggscore(base, level) >= base - 1e-12
            assert aggscore(base, "not_willing") <= base + 1e-12


class TestCleanup:
    def test_backoff_clipped_at_floor(self):
        assert cleanup(0.10, 0.3, "eager") == pytest.approx(0.15)

    def test_backoff_uses_sam_when_lower(self):
        assert cleanup(0.10, 0.04, "not_entered") == pytest.approx(0.04)

    def test_above_floor_unchanged(self):
        assert cleanup(0.5, 0.9, "eager") == 0.5


class TestBuildScoreMatrix:
    def test_conflicting_pair_has_no_entry(self, tiny_corpus):
        conflicts = ConflictSet({("p1", "rev1"): "declared_person"})
        matrix = build_score_matrix(tiny_corpus, conflicts, FilteredBids())
        assert ("p1", "rev1") not in matrix.entries
        assert ("p2", "rev1") in matrix.entries

    def test_sam_only_no_bid_gives_sam(self):
        papers = [make_paper("p1", primary="k_ml", authors=("a1",))]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers)
        matrix = build_score_matrix(corpus, ConflictSet(), FilteredBids())
        entry = matrix.entries[("p1", "rev1")]
        assert entry.aggscore == pytest.approx(entry.sam)
        assert entry.tpms_norm is None and entry.acl_norm is None

    def test_two_by_three_fixture_matches_hand_computation(self):
        papers = [
            make_paper("p1", primary="k_ml", authors=("a1",)),
            make_paper("p2", primary="k_vision", secondary=("k_detect",), authors=("a2",)),
        ]
        reviewers = [
            make_reviewer("rev1", primary="k_ml"),
            make_reviewer("rev2", primary="k_vision", secondary=("k_detect",)),
            make_reviewer("rev3", primary="k_detect"),
        ]
        external = {
            ("p1", "rev1"): (0.8, 0.6),
            ("p2", "rev2"): (None, 0.5),
        }
        bids = [Bid("rev2", "p2", "eager"), Bid("rev1", "p2", "not_willing")]
        corpus = corpus_of(papers, reviewers, bids=bids, external=external)
        filtered = FilteredBids(bids={("rev2", "p2"): "eager", ("rev1", "p2"): "not_willing"})
        index = ExpertiseIndex(corpus)
        matrix = build_score_matrix(corpus, ConflictSet(), filtered)

        # Hand computation, entry by entry.
        for (paper_id, reviewer_id), entry in matrix.entries.items():
            paper = corpus.papers[paper_id]
            dense = index.densify(corpus.reviewers[reviewer_id])
            sam = sam_score(paper, dense)
            tpms_raw, acl_raw = corpus.external_scores.get((paper_id, reviewer_id), (None, None))
            expected_base = base_score(tpms_raw, acl_raw, sam)
            level = filtered.level(reviewer_id, paper_id)
            expected = cleanup(expected_base ** BID_EXPONENTS[level], sam, level)
            assert entry.aggscore == pytest.approx(expected, abs=1e-9)
        assert len(matrix.entries) == 6

    def test_identity_normalizers_pass_raw_through(self):
        papers = [make_paper("p1", primary="k_ml", authors=("a1",))]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers, external={("p1", "rev1"): (0.25, None)})
        matrix = build_score_matrix(corpus, ConflictSet(), FilteredBids())
        assert matrix.entries[("p1", "rev1")].tpms_norm == pytest.approx(0.25)

    def test_custom_normalizer_applies_and_clips(self):
        papers = [make_paper("p1", primary="k_ml", authors=("a1",))]
        reviewers = [make_reviewer("rev1", primary="k_ml")]
        corpus = corpus_of(papers, reviewers, external={("p1", "rev1"): (0.9, None)})
        normalizers = {"tpms": Normalizer(slope=2.0, intercept=0.0), "acl": Normalizer()}
        matrix = build_score_matrix(corpus, ConflictSet(), FilteredBids(), normalizers)
        assert matrix.entries[("p1", "rev1")].tpms_norm == 1.0


class TestSamProperties:
    def test_random_configurations_bounded_and_monotone(self):
        rng = random.Random(42)
        keywords = [f"k{n}" for n in range(10)]
        for _ in range(2000):
            n_secondary = rng.randint(0, 5)
            secondary = rng.sample(keywords[1:], n_secondary)
            paper = make_paper("p", primary=keywords[0], secondary=secondary)
            dense = {k: rng.random() for k in rng.sample(keywords, rng.randint(1, 10))}
            value = sam_score(paper, dense)
            assert 0.0 <= value <= 1.0 + 1e-12
            # bump one coordinate: score must not decrease
            bump_key = rng.choice(keywords)
            bumped = dict(dense)
            bumped[bump_key] = min(1.0, bumped.get(bump_key, 0.0) + rng.random())
            assert sam_score(paper, bumped) >= value - 1e-12

    def test_primary_dominates_all_secondaries(self):
        # A full primary match always outweighs every secondary match combined.
        for m in range(1, 12):
            secondary = [f"k{n}" for n in range(1, m + 1)]
            paper = make_paper("p", primary="k0", secondary=secondary)
            primary_only = sam_score(paper, {"k0": 1.0})
            secondaries_only = sam_score(paper, {k: 1.0 for k in secondary})
            assert primary_only > secondaries_only


class TestHiddenComponentDeltas:
    def test_requires_both_components(self):
        from confmatch.scoring import ScoreEntry

        entry = ScoreEntry(sam=0.5, tpms_norm=None, acl_norm=0.5,
                           base=0.5, bid_level="not_entered", aggscore=0.5)
        assert hidden_component_deltas(entry) == (None, None)
