"""Random small instances for solver-oracle and LP round-trip tests."""

import random

from confmatch.bids import FilteredBids
from confmatch.coi import ConflictSet
from confmatch.corpus import CoauthorEdge, Paper, PersonMeta, Reviewer, build_corpus
from confmatch.model import MatchParams
from confmatch.scoring import ScoreEntry, ScoreMatrix

REGION_POOL = ("eu", "na", "asia")


def random_instance(seed, max_papers=6, max_reviewers=9, params=None,
                    conflict_rate=0.08, bid_rate=0.3):
    """A random desk-scale matching instance with §5.1-default parameters.

    Returns (corpus, scores, conflicts, filtered_bids, params). Scores are
    uniform in [0, 1] (some below the 0.15 threshold), regions, seniorities
    and coauthor edges random, and some papers are authored by reviewers so
    reciprocal-bid cycles occur.
    """
    rng = random.Random(seed)
    n_papers = rng.randint(2, max_papers)
    n_reviewers = rng.randint(4, max_reviewers)

    roles = ["pc", "pc"]
    roles += [rng.choice(["pc", "pc", "pc", "spc", "ac"]) for _ in range(n_reviewers - 2)]
    rng.shuffle(roles)
    regions = REGION_POOL[: rng.randint(2, 3)]
    reviewer_ids = [f"r{n:02d}" for n in range(n_reviewers)]
    reviewers = [
        Reviewer(
            id=rid,
            role=role,
            primary_keyword="k0",
            secondary_keywords=frozenset(),
            region=rng.choice(regions),
            prior_committee_count=rng.randint(0, 4),
            published_paper_count=rng.randint(0, 12),
            capacity=3,
        )
        for rid, role in zip(reviewer_ids, roles)
    ]

    papers = []
    for n in range(n_papers):
        authors = {f"a{n}"}
        if rng.random() < 0.6:
            authors.add(rng.choice(reviewer_ids))
        papers.append(Paper(
            id=f"p{n:02d}",
            primary_keyword="k0",
            secondary_keywords=frozenset(),
            author_ids=frozenset(authors),
            track="main",
        ))

    edges = {}
    for _ in range(rng.randint(0, 4)):
        a, b = rng.sample(reviewer_ids, 2)
        edges[frozenset((a, b))] = CoauthorEdge(paper_count=rng.randint(1, 3), last_year=2015)
    metas = []
    if rng.random() < 0.5:
        a, b = rng.sample(reviewer_ids, 2)
        edges.setdefault(frozenset((a, "hub")), CoauthorEdge(paper_count=1, last_year=2015))
        edges.setdefault(frozenset((b, "hub")), CoauthorEdge(paper_count=1, last_year=2015))
        metas.append(PersonMeta("hub"))

    corpus = build_corpus(
        papers=papers,
        reviewers=reviewers,
        keyword_parents={"k0": "area0"},
        regions=regions,
        coauthor_edges=edges,
        person_meta=metas,
    )

    conflicts = ConflictSet()
    for paper in papers:
        for rid in reviewer_ids:
            if rng.random() < conflict_rate:
                conflicts.reasons[(paper.id, rid)] = "declared_person"

    filtered = FilteredBids()
    for rid in reviewer_ids:
        for paper in papers:
            if rng.random() < bid_rate:
                filtered.bids[(rid, paper.id)] = rng.choice(
                    ["eager", "eager", "willing", "in_a_pinch"]
                )

    scores = ScoreMatrix()
    for paper in papers:
        for rid in reviewer_ids:
            if (paper.id, rid) in conflicts:
                continue
            value = round(rng.random(), 6)
            scores.entries[(paper.id, rid)] = ScoreEntry(
                sam=value, tpms_norm=None, acl_norm=None,
                base=value, bid_level="not_entered", aggscore=value,
            )

    return corpus, scores, conflicts, filtered, params or MatchParams()
