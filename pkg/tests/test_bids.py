import random

from confmatch.bids import filter_bids, positive_weight
from confmatch.corpus import Bid

from conftest import corpus_of, make_paper, make_reviewer


def build(bids, reviewers=None, papers=None):
    papers = papers or [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(1, 26)]
    reviewers = reviewers or [make_reviewer("rev1"), make_reviewer("rev2", role="spc", capacity=24)]
    return corpus_of(papers, reviewers, bids=bids)


def bids_for(reviewer, levels):
    return [Bid(reviewer, f"p{n + 1}", level) for n, level in enumerate(levels)]


class TestPositiveWeight:
    def test_in_a_pinch_counts_half(self):
        assert positive_weight(["eager"] * 6 + ["in_a_pinch"] * 4) == 8.0

    def test_empty(self):
        assert positive_weight([]) == 0.0

    def test_nine_willing(self):
        assert positive_weight(["willing"] * 9) == 9.0


class TestSparseDiscard:
    def test_pc_below_nine_loses_everything(self):
        corpus = build(bids_for("rev1", ["eager"] * 6 + ["in_a_pinch"] * 4))
        result = filter_bids(corpus)
        assert not any(r == "rev1" for r, _ in result.bids)
        assert any(a.action == "discard_all_sparse" for a in result.audit)

    def test_pc_at_nine_keeps_bids(self):
        corpus = build(bids_for("rev1", ["eager"] * 9))
        result = filter_bids(corpus)
        assert sum(1 for r, _ in result.bids if r == "rev1") == 9

    def test_spc_needs_ten(self):
        corpus = build(bids_for("rev2", ["eager"] * 9))
        assert not filter_bids(corpus).bids
        corpus = build(bids_for("rev2", ["eager"] * 10))
        assert len(filter_bids(corpus).bids) == 10

    def test_ac_is_untouched(self):
        corpus = build(
            bids_for("rev9", ["eager"]),
            reviewers=[make_reviewer("rev9", role="ac", capacity=60)],
        )
        result = filter_bids(corpus)
        assert result.bids[("rev9", "p1")] == "eager"
        assert not result.audit


class TestDowngrades:
    def test_thin_eager_becomes_willing_then_stops(self):
        corpus = build(bids_for("rev1", ["eager"] * 3 + ["willing"] * 6))
        result = filter_bids(corpus)
        levels = [result.bids[("rev1", f"p{n}")] for n in range(1, 10)]
        assert levels == ["willing"] * 9

    def test_thin_eager_then_thin_willing_cascade(self):
        corpus = build(
            bids_for("rev1", ["eager"] * 3 + ["in_a_pinch"] * 12)
        )
        result = filter_bids(corpus)
        # weight = 3 + 6 = 9 passes; 3 eager -> willing; 3 willing < 4 -> in_a_pinch
        assert all(level == "in_a_pinch" for level in result.bids.values())

    def test_thin_willing_downgrades_even_with_enough_eager(self):
        corpus = build(bids_for("rev1", ["eager"] * 5 + ["willing"] * 2 + ["in_a_pinch"] * 4))
        result = filter_bids(corpus)
        levels = sorted(result.bids.values())
        assert levels.count("eager") == 5
        assert levels.count("willing") == 0
        assert levels.count("in_a_pinch") == 6

    def test_never_increases_enthusiasm(self):
        order = {"not_willing": 0, "not_entered": 1, "in_a_pinch": 2, "willing": 3, "eager": 4}
        rng = random.Random(11)
        for trial in range(30):
            levels = rng.choices(
                ["eager", "willing", "in_a_pinch", "not_willing"], k=rng.randint(1, 25)
            )
            corpus = build(bids_for("rev1", levels))
            result = filter_bids(corpus)
            for n, level in enumerate(levels):
                after = result.bids.get(("rev1", f"p{n + 1}"), "not_entered")
                if after != "not_entered":
                    assert order[after] <= order[level]


class TestNotWillingFlood:
    def test_flood_dropped(self):
        levels = ["eager"] * 4 + ["willing"] * 5 + ["not_willing"] * 55
        papers = [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(1, 65)]
        corpus = build(bids_for("rev1", levels), papers=papers)
        result = filter_bids(corpus)
        kept = [lvl for (r, _), lvl in result.bids.items() if r == "rev1"]
        assert "not_willing" not in kept
        assert len(kept) == 9

    def test_exactly_six_times_is_kept(self):
        levels = ["eager"] * 4 + ["willing"] * 5 + ["not_willing"] * 54
        papers = [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(1, 64)]
        corpus = build(bids_for("rev1", levels), papers=papers)
        kept = [lvl for lvl in filter_bids(corpus).bids.values()]
        assert kept.count("not_willing") == 54


class TestCollusion:
    def test_single_author_forty_percent_boundary(self):
        # 10 positive bids, 4 on papers by one author -> exactly 40%, dropped.
        papers = [make_paper(f"p{n}", authors=("mallory",)) for n in range(1, 5)]
        papers += [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(5, 11)]
        corpus = build(bids_for("rev1", ["eager"] * 4 + ["willing"] * 6), papers=papers)
        result = filter_bids(corpus)
        assert not result.bids
        assert any(a.action == "discard_all_collusion" for a in result.audit)

    def test_below_forty_percent_is_kept(self):
        papers = [make_paper(f"p{n}", authors=("mallory",)) for n in range(1, 4)]
        papers += [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(4, 11)]
        corpus = build(bids_for("rev1", ["eager"] * 4 + ["willing"] * 6), papers=papers)
        assert len(filter_bids(corpus).bids) == 10

    def test_criterion_two_drops_the_partner_too(self):
        # rev1 places 6 of 10 positive bids on rev2's papers; rev2 has only
        # in_a_pinch bids (zero positives). The reciprocal criterion fires at
        # 6 >= 60% of (10 + 0), so rev2's bids fall with rev1's even though
        # no rule fires for rev2 alone.
        papers = [make_paper(f"q{n}", authors=("rev2",)) for n in range(1, 7)]
        papers += [make_paper(f"p{n}", authors=(f"author{n}",)) for n in range(1, 23)]
        reviewers = [make_reviewer("rev1"), make_reviewer("rev2")]
        bids = [Bid("rev1", f"q{n}", "eager") for n in range(1, 7)]
        bids += [Bid("rev1", f"p{n}", "willing") for n in range(1, 5)]
        bids += [Bid("rev2", f"p{n}", "in_a_pinch") for n in range(1, 19)]
        corpus = corpus_of(papers, reviewers, bids=bids)
        result = filter_bids(corpus)
        dropped = {a.reviewer_id for a in result.audit if a.action == "discard_all_collusion"}
        assert "rev2" in dropped
        assert not any(r == "rev2" for r, _ in result.bids)

    def test_reciprocal_pair_symmetric_drop(self):
        # Each reviewer places 3 of 4 positive bids on the other's papers:
        # mutual = 6 of combined 8 positives = 75% >= 60% -> both dropped.
        papers = [make_paper(f"q{n}", authors=("rev2",)) for n in range(1, 4)]
        papers += [make_paper(f"q{n}", authors=("rev1",)) for n in range(4, 7)]
        papers += [make_paper("q7", authors=("solo1",)), make_paper("q8", authors=("solo2",))]
        papers += [make_paper(f"x{n}", authors=(f"author{n}",)) for n in range(1, 11)]
        reviewers = [make_reviewer("rev1"), make_reviewer("rev2")]
        bids = [Bid("rev1", f"q{n}", "eager") for n in (1, 2, 3, 7)]
        bids += [Bid("rev2", f"q{n}", "eager") for n in (4, 5, 6, 8)]
        for n in range(1, 11):
            bids.append(Bid("rev1", f"x{n}", "in_a_pinch"))
            bids.append(Bid("rev2", f"x{n}", "in_a_pinch"))
        corpus = corpus_of(papers, reviewers, bids=bids)
        result = filter_bids(corpus)
        dropped = {a.reviewer_id for a in result.audit if a.action == "discard_all_collusion"}
        assert dropped == {"rev1", "rev2"}
        assert not result.bids

    def test_zero_bids_stay_zero(self):
        corpus = build([])
        result = filter_bids(corpus)
        assert not result.bids
        assert not result.audit

    def test_order_independence(self):
        levels = ["eager"] * 5 + ["willing"] * 5 + ["not_willing"] * 3
        bids = bids_for("rev1", levels)
        rng = random.Random(3)
        corpus_a = build(list(bids))
        shuffled = list(bids)
        rng.shuffle(shuffled)
        corpus_b = build(shuffled)
        assert filter_bids(corpus_a).bids == filter_bids(corpus_b).bids
