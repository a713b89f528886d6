import pytest

from confmatch.corpus import (
    Bid,
    CoauthorEdge,
    Paper,
    PersonMeta,
    Reviewer,
    build_corpus,
)


def make_paper(pid, primary="k_ml", secondary=(), authors=("author1",), track="main"):
    return Paper(
        id=pid,
        primary_keyword=primary,
        secondary_keywords=frozenset(secondary),
        author_ids=frozenset(authors),
        track=track,
    )


def make_reviewer(
    rid,
    role="pc",
    primary="k_ml",
    secondary=(),
    region="eu",
    committees=0,
    papers=0,
    capacity=3,
    domains=(),
    people=(),
):
    return Reviewer(
        id=rid,
        role=role,
        primary_keyword=primary,
        secondary_keywords=frozenset(secondary),
        region=region,
        prior_committee_count=committees,
        published_paper_count=papers,
        capacity=capacity,
        declared_conflict_domains=frozenset(domains),
        declared_conflict_people=frozenset(people),
    )


DEFAULT_KEYWORDS = {
    "k_ml": "area_ml",
    "k_theory": "area_ml",
    "k_vision": "area_cv",
    "k_detect": "area_cv",
}
DEFAULT_REGIONS = ("eu", "na", "asia")


def corpus_of(papers, reviewers, bids=(), edges=None, metas=(), external=None,
              keywords=None, regions=DEFAULT_REGIONS):
    return build_corpus(
        papers=papers,
        reviewers=reviewers,
        keyword_parents=keywords or DEFAULT_KEYWORDS,
        regions=regions,
        bids=bids,
        coauthor_edges=edges or {},
        person_meta=metas,
        external_scores=external or {},
    )


@pytest.fixture
def tiny_corpus():
    """3 papers, 4 reviewers, a couple of bids and one coauthor edge."""
    papers = [
        make_paper("p1", primary="k_ml", secondary=("k_theory",), authors=("author1", "author2")),
        make_paper("p2", primary="k_vision", authors=("author3",)),
        make_paper("p3", primary="k_theory", authors=("author1",)),
    ]
    reviewers = [
        make_reviewer("rev1", role="pc", primary="k_ml", committees=3),
        make_reviewer("rev2", role="pc", primary="k_vision", region="na", papers=5),
        make_reviewer("rev3", role="spc", primary="k_theory", region="asia", capacity=24),
        make_reviewer("rev4", role="ac", primary="k_ml", capacity=60),
    ]
    bids = [
        Bid("rev1", "p1", "eager"),
        Bid("rev2", "p2", "willing"),
    ]
    edges = {frozenset(("rev1", "author2")): CoauthorEdge(paper_count=2, last_year=2019)}
    metas = [
        PersonMeta("author1", first_pub_year=2010, paper_count=30),
        PersonMeta("author2", first_pub_year=2015, paper_count=8),
        PersonMeta("author3", first_pub_year=2018, paper_count=3),
    ]
    return corpus_of(papers, reviewers, bids=bids, edges=edges, metas=metas)
