"""Bid sanitization: sparse bidders, thin enthusiasm tiers, negative floods,
and collusion-consistent bidding patterns.

The filter runs per reviewer in a fixed order — (a) discard sparse bidders,
(b) downgrade thin eager/willing tiers, (c) drop not-willing floods, then a
global pass (d) that discards every bid of reviewers whose positive bids
concentrate on one author or reciprocate with one. Area chairs are left
untouched. Every change is traceable through the audit list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .corpus import Corpus

MIN_POSITIVE_WEIGHT = {"pc": 9.0, "spc": 10.0}
MIN_EAGER = 4
MIN_WILLING = 4
NOT_WILLING_RATIO = 6
# Collusion thresholds as exact rationals: 40% and 60% of positive bids.
SINGLE_AUTHOR_PCT = (4, 10)
RECIPROCAL_PCT = (6, 10)
POSITIVE_LEVELS = frozenset({"eager", "willing"})


@dataclass(frozen=True)
class AuditEntry:
    reviewer_id: str
    action: str
    detail: str


@dataclass
class FilteredBids:
    bids: dict[tuple[str, str], str] = field(default_factory=dict)
    audit: list[AuditEntry] = field(default_factory=list)

    def level(self, reviewer_id: str, paper_id: str) -> str:
        return self.bids.get((reviewer_id, paper_id), "not_entered")


def positive_weight(levels) -> float:
    """Total positive-bid weight: eager and willing count 1, in-a-pinch 0.5."""
    weight = 0.0
    for level in levels:
        if level in POSITIVE_LEVELS:
            weight += 1.0
        elif level == "in_a_pinch":
            weight += 0.5
    return weight


def filter_bids(corpus: Corpus, authorship: Mapping[str, set] | None = None) -> FilteredBids:
    """Run the four-step bid sanitization pipeline over the corpus bids.

    ``authorship`` (person -> paper ids) defaults to the corpus authorship
    index; it is the cross-reference used by the collusion criteria.
    """
    if authorship is None:
        authorship = corpus.papers_by_author()

    per_reviewer: dict[str, dict[str, str]] = {}
    for (reviewer_id, paper_id), bid in corpus.bids.items():
        per_reviewer.setdefault(reviewer_id, {})[paper_id] = bid.level

    result = FilteredBids()

    for reviewer_id in sorted(per_reviewer):
        reviewer = corpus.reviewers[reviewer_id]
        levels = per_reviewer[reviewer_id]
        if reviewer.role == "ac":
            continue

        # (a) sparse bidders lose everything
        weight = positive_weight(levels.values())
        threshold = MIN_POSITIVE_WEIGHT[reviewer.role]
        if weight < threshold:
            result.audit.append(AuditEntry(
                reviewer_id, "discard_all_sparse",
                f"positive weight {weight:g} < {threshold:g}",
            ))
            levels.clear()
            continue

        # (b) thin enthusiasm tiers get downgraded
        eager = [p for p, lvl in levels.items() if lvl == "eager"]
        if 0 < len(eager) < MIN_EAGER:
            for paper_id in eager:
                levels[paper_id] = "willing"
            result.audit.append(AuditEntry(
                reviewer_id, "eager_downgraded", f"{len(eager)} eager -> willing",
            ))
        willing = [p for p, lvl in levels.items() if lvl == "willing"]
        if 0 < len(willing) < MIN_WILLING:
            for paper_id in willing:
                levels[paper_id] = "in_a_pinch"
            result.audit.append(AuditEntry(
                reviewer_id, "willing_downgraded", f"{len(willing)} willing -> in_a_pinch",
            ))

        # (c) negative floods
        not_willing = [p for p, lvl in levels.items() if lvl == "not_willing"]
        positives = sum(1 for lvl in levels.values() if lvl in POSITIVE_LEVELS)
        if len(not_willing) > NOT_WILLING_RATIO * positives:
            for paper_id in not_willing:
                del levels[paper_id]
            result.audit.append(AuditEntry(
                reviewer_id, "not_willing_dropped",
                f"{len(not_willing)} not_willing > {NOT_WILLING_RATIO}x{positives} positive",
            ))

    # (d) collusion criteria over the post-(c) positive bids; ACs stay exempt
    committee_bids = {
        reviewer_id: levels for reviewer_id, levels in per_reviewer.items()
        if corpus.reviewers[reviewer_id].role != "ac"
    }
    flagged = _collusion_flags(corpus, committee_bids, authorship)
    for reviewer_id in sorted(flagged):
        if per_reviewer.get(reviewer_id):
            per_reviewer[reviewer_id].clear()
        result.audit.append(AuditEntry(
            reviewer_id, "discard_all_collusion", flagged[reviewer_id],
        ))

    for reviewer_id in sorted(per_reviewer):
        for paper_id, level in sorted(per_reviewer[reviewer_id].items()):
            result.bids[(reviewer_id, paper_id)] = level
    return result


def _collusion_flags(
    corpus: Corpus,
    per_reviewer: Mapping[str, Mapping[str, str]],
    authorship: Mapping[str, set],
) -> dict[str, str]:
    """Evaluate both collusion criteria simultaneously over current bids.

    Criterion 1: one author of a bid-target paper accounts for >= 40% of a
    reviewer's positive bids. Criterion 2: a reviewer/author pair's mutual
    positive bids reach >= 60% of their combined positive bids; both members
    of such a pair are flagged, keeping the criterion symmetric.
    Integer cross-multiplication keeps the percentage boundaries exact.
    """
    positive_bids: dict[str, set[str]] = {}
    for reviewer_id, levels in per_reviewer.items():
        papers = {p for p, lvl in levels.items() if lvl in POSITIVE_LEVELS}
        if papers:
            positive_bids[reviewer_id] = papers

    # reviewer -> author -> number of positive bids on that author's papers
    bids_on_author: dict[str, dict[str, int]] = {}
    for reviewer_id, papers in positive_bids.items():
        counts: dict[str, int] = {}
        for paper_id in papers:
            for author in corpus.papers[paper_id].author_ids:
                counts[author] = counts.get(author, 0) + 1
        bids_on_author[reviewer_id] = counts

    flagged: dict[str, str] = {}

    def flag(reviewer_id: str, detail: str):
        if reviewer_id in per_reviewer and reviewer_id not in flagged:
            flagged[reviewer_id] = detail

    num, den = SINGLE_AUTHOR_PCT
    for reviewer_id in sorted(bids_on_author):
        total = len(positive_bids[reviewer_id])
        for author, count in sorted(bids_on_author[reviewer_id].items()):
            if den * count >= num * total:
                flag(reviewer_id, f"criterion 1: {count}/{total} positive bids on author {author}")
                break

    num, den = RECIPROCAL_PCT
    seen_pairs: set[frozenset[str]] = set()
    for reviewer_id in sorted(bids_on_author):
        for author, count in sorted(bids_on_author[reviewer_id].items()):
            if author == reviewer_id or author not in per_reviewer:
                continue
            pair = frozenset((reviewer_id, author))
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            reverse = bids_on_author.get(author, {}).get(reviewer_id, 0)
            mutual = count + reverse
            combined = len(positive_bids.get(reviewer_id, ())) + len(positive_bids.get(author, ()))
            if mutual >= 1 and den * mutual >= num * combined:
                detail = f"criterion 2: {mutual} mutual of {combined} positive bids with {{}}"
                flag(reviewer_id, detail.format(author))
                flag(author, detail.format(reviewer_id))
    return flagged
