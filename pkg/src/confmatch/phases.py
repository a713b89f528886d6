"""Two-phase review lifecycle.

Phase 1 assigns a small committee per paper; papers collecting two confident
below-threshold reviews are rejected with those reviews returned to the
authors. Everything else is promoted, joined by fast-track papers arriving
with imported reviews, and phase 2 tops every survivor up to the required
review count while keeping the phase-1 assignment fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Mapping, Sequence

from .bids import FilteredBids
from .coi import ConflictSet
from .corpus import Corpus
from .model import MatchParams, build_model
from .scoring import ScoreMatrix
from .solver import SolveReport, resolve_backend

PROMOTION_REASONS = ("survived", "missing_review", "low_confidence", "fasttrack")


@dataclass(frozen=True)
class Review:
    paper_id: str
    reviewer_id: str
    score: float
    confidence: int
    phase: int = 1
    pre_rebuttal: bool = True

    def __post_init__(self):
        if not 1.0 <= self.score <= 10.0:
            raise ValueError(f"review score {self.score} outside the 1-10 scale")
        if self.confidence not in (1, 2, 3, 4):
            raise ValueError(f"confidence {self.confidence} outside 1-4")
        if self.phase not in (1, 2):
            raise ValueError(f"phase {self.phase} must be 1 or 2")


@dataclass(frozen=True)
class PhasePolicy:
    reject_score_threshold: float = 4.5
    reject_confidence_min: int = 3
    required_phase1_reviews: int = 2
    total_reviews_min: int = 4
    fasttrack_reviews_min: int = 3


@dataclass(frozen=True)
class PhaseOutcome:
    rejected: frozenset[str]
    promoted: frozenset[str]
    promotion_reason: Mapping[str, str] = field(default_factory=dict)


def phase1_decide(
    reviews_by_paper: Mapping[str, Sequence[Review]],
    policy: PhasePolicy,
    fasttrack: Collection[str] = (),
) -> PhaseOutcome:
    """Reject papers with two confident below-threshold phase-1 reviews.

    Papers short of the required review count are promoted regardless of
    scores (missing_review), as are fully negative papers whose reviewers
    lacked confidence (low_confidence). Fast-track papers are always
    promoted; their imported reviews never trigger rejection.
    """
    fasttrack_set = set(fasttrack)
    rejected: set[str] = set()
    reasons: dict[str, str] = {}
    papers = set(reviews_by_paper) | fasttrack_set
    for paper_id in sorted(papers):
        if paper_id in fasttrack_set:
            reasons[paper_id] = "fasttrack"
            continue
        reviews = [r for r in reviews_by_paper[paper_id] if r.phase == 1]
        rejecting = [
            r for r in reviews
            if r.score < policy.reject_score_threshold
            and r.confidence >= policy.reject_confidence_min
        ]
        below = [r for r in reviews if r.score < policy.reject_score_threshold]
        if len(rejecting) >= policy.required_phase1_reviews:
            rejected.add(paper_id)
        elif len(reviews) < policy.required_phase1_reviews:
            reasons[paper_id] = "missing_review"
        elif (
            len(reviews) == policy.required_phase1_reviews
            and len(below) == len(reviews)
            and any(r.confidence < policy.reject_confidence_min for r in reviews)
        ):
            reasons[paper_id] = "low_confidence"
        else:
            reasons[paper_id] = "survived"
    return PhaseOutcome(
        rejected=frozenset(rejected),
        promoted=frozenset(reasons),
        promotion_reason=reasons,
    )


def phase2_requirements(
    outcome: PhaseOutcome,
    reviews_by_paper: Mapping[str, Sequence[Review]],
    policy: PhasePolicy,
) -> dict[str, int]:
    """Additional reviewers each non-rejected paper needs in phase 2.

    Main-track survivors are topped up to ``total_reviews_min`` counting the
    phase-1 reviews that actually arrived; fast-track papers need
    ``fasttrack_reviews_min`` counting their imported reviews.
    """
    requirements: dict[str, int] = {}
    for paper_id in sorted(outcome.rejected | outcome.promoted):
        if paper_id in outcome.rejected:
            requirements[paper_id] = 0
            continue
        completed = len(reviews_by_paper.get(paper_id, ()))
        if outcome.promotion_reason.get(paper_id) == "fasttrack":
            requirements[paper_id] = max(0, policy.fasttrack_reviews_min - completed)
        else:
            requirements[paper_id] = max(0, policy.total_reviews_min - completed)
    return requirements


def run_two_phase(
    corpus: Corpus,
    scores: ScoreMatrix,
    conflicts: ConflictSet,
    filtered_bids: FilteredBids,
    params: MatchParams,
    policy: PhasePolicy,
    phase1_reviews: Mapping[str, Sequence[Review]],
    backend: str = "exact",
    *,
    phase2_pc_capacity: int | None = None,
    seed: int = 0,
) -> tuple[SolveReport, PhaseOutcome, SolveReport]:
    """Solve phase 1, apply rejection decisions, and re-match phase 2.

    Phase 2 fixes every phase-1 assignment on surviving papers (the phase-2
    matching is a superset there), admits fast-track papers with one SPC and
    one AC each, and raises the PC capacity by one unless an explicit
    ``phase2_pc_capacity`` is given.
    """
    solve = resolve_backend(backend, seed=seed)
    main_papers = sorted(p.id for p in corpus.papers.values() if p.track == "main")
    fasttrack = sorted(p.id for p in corpus.papers.values() if p.track == "fasttrack")

    phase1_model = build_model(
        corpus, scores, conflicts, filtered_bids, params,
        include_papers=main_papers,
    )
    phase1_report = solve(phase1_model)

    # Papers with no review record at all count as having zero reviews.
    reviews_full = {pid: tuple(phase1_reviews.get(pid, ())) for pid in main_papers}
    for paper_id in fasttrack:
        reviews_full[paper_id] = tuple(phase1_reviews.get(paper_id, ()))
    outcome = phase1_decide(reviews_full, policy, fasttrack)
    requirements = phase2_requirements(outcome, reviews_full, policy)

    survivors = sorted(outcome.promoted - set(fasttrack))
    phase2_papers = survivors + fasttrack
    fixed = tuple(
        (paper_id, reviewer_id)
        for paper_id, reviewer_id in phase1_report.assignment
        if paper_id in outcome.promoted
    )

    fixed_counts: dict[str, dict[str, int]] = {}
    roles = {r.id: r.role for r in corpus.reviewers.values()}
    for paper_id, reviewer_id in fixed:
        per_role = fixed_counts.setdefault(paper_id, {"pc": 0, "spc": 0, "ac": 0})
        per_role[roles[reviewer_id]] += 1

    overrides: dict[str, dict[str, int]] = {}
    for paper_id in survivors:
        counts = fixed_counts.get(paper_id, {"pc": 0, "spc": 0, "ac": 0})
        overrides[paper_id] = {
            "pc": counts["pc"] + requirements.get(paper_id, 0),
            "spc": counts["spc"],
            "ac": counts["ac"],
        }
    for paper_id in fasttrack:
        overrides[paper_id] = {
            "pc": requirements.get(paper_id, 0),
            "spc": 1,
            "ac": 1,
        }

    phase2_model = build_model(
        corpus, scores, conflicts, filtered_bids, params,
        fixed=fixed,
        include_papers=phase2_papers,
        paper_quota_overrides=overrides,
        pc_capacity_override=(
            params.pc_capacity + 1 if phase2_pc_capacity is None else phase2_pc_capacity
        ),
        raise_capacity_for_fixed=True,
    )
    phase2_report = solve(phase2_model)
    return phase1_report, outcome, phase2_report
