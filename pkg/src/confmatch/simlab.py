"""Synthetic conference generation, matching metrics, and the statistical
simulation suite for two-phase reviewing.

The selection-bias simulator draws true paper scores and noisy reviews from
a hierarchical Gaussian model, rejects papers whose first two reviews both
fall below the threshold, and measures how much higher phase-1 scores sit on
the surviving papers. A Gibbs sampler inverts the same model to recover the
review-noise scale from observed scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Collection, Mapping, Sequence

import numpy as np

from .corpus import Corpus, subset_corpus
from .model import Model
from .phases import PhasePolicy
from .scoring import ScoreMatrix, base_score


@dataclass(frozen=True)
class GenConfig:
    seed_keyword: str
    growth_factor: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.growth_factor <= 1.0:
            raise ValueError("growth_factor must be > 1")


@dataclass(frozen=True)
class NoiseModel:
    mu_s: float = 5.0
    sigma_s: float = 1.0
    sigma: float = 1.3
    gamma_alpha: float = 1.0
    gamma_beta: float = 1.0

    def __post_init__(self):
        if self.sigma_s <= 0 or self.sigma < 0:
            raise ValueError("score and review noise scales must be positive")


@dataclass
class SimWorld:
    true_scores: np.ndarray
    phase1_scores: np.ndarray  # (papers, reviews per phase)
    rejected: np.ndarray  # boolean mask
    phase2_scores: np.ndarray  # (survivors, reviews per phase)


def _keyword_listings(corpus: Corpus):
    for paper in corpus.papers.values():
        yield paper.id, {paper.primary_keyword} | paper.secondary_keywords


def generate_conference(corpus: Corpus, config: GenConfig) -> list[Corpus]:
    """Grow keyword-coherent sub-conferences out of a full corpus.

    Starting from the seed keyword's papers, each iteration adopts the
    keyword most frequent among current papers that is not yet tracked and
    pulls in its papers. Reviewers come from the adopted keyword's top-level
    area, sampled without replacement in proportion to the keyword's share
    of the area's papers. A snapshot is emitted whenever the paper count
    crosses the next growth multiple, plus one of the final state.
    """
    taxonomy = corpus.taxonomy
    if config.seed_keyword not in taxonomy.keywords:
        raise ValueError(f"unknown seed keyword {config.seed_keyword!r}")
    rng = np.random.default_rng(config.seed)

    listings = dict(_keyword_listings(corpus))
    papers_of_keyword: dict[str, set[str]] = {}
    for paper_id, keywords in listings.items():
        for keyword in keywords:
            papers_of_keyword.setdefault(keyword, set()).add(paper_id)

    area_reviewers: dict[str, list[str]] = {}
    for reviewer in corpus.reviewers.values():
        area = taxonomy.parent(reviewer.primary_keyword)
        area_reviewers.setdefault(area, []).append(reviewer.id)
    for pool in area_reviewers.values():
        pool.sort()

    area_paper_count: dict[str, int] = {}
    primary_paper_count: dict[str, int] = {}
    for paper in corpus.papers.values():
        area = taxonomy.parent(paper.primary_keyword)
        area_paper_count[area] = area_paper_count.get(area, 0) + 1
        primary_paper_count[paper.primary_keyword] = (
            primary_paper_count.get(paper.primary_keyword, 0) + 1
        )

    def sample_reviewers(keyword: str, current: set[str]) -> list[str]:
        area = taxonomy.parent(keyword)
        pool = area_reviewers.get(area, [])
        total_papers = area_paper_count.get(area, 0)
        if not pool or not total_papers:
            return []
        share = primary_paper_count.get(keyword, 0) / total_papers
        count = round(len(pool) * share)
        available = [r for r in pool if r not in current]
        count = min(count, len(available))
        if count == 0:
            return []
        picked = rng.choice(len(available), size=count, replace=False)
        return [available[i] for i in sorted(picked)]

    tracked = {config.seed_keyword}
    current_papers: set[str] = set(papers_of_keyword.get(config.seed_keyword, set()))
    current_reviewers: set[str] = set()
    current_reviewers.update(sample_reviewers(config.seed_keyword, current_reviewers))

    snapshots: list[Corpus] = []
    if not current_papers:
        raise ValueError(f"seed keyword {config.seed_keyword!r} covers no papers")
    next_threshold = len(current_papers) * config.growth_factor

    while True:
        counts: dict[str, int] = {}
        for paper_id in current_papers:
            for keyword in listings[paper_id]:
                if keyword not in tracked:
                    counts[keyword] = counts.get(keyword, 0) + 1
        if not counts:
            break
        best = min(counts, key=lambda k: (-counts[k], k))
        tracked.add(best)
        current_papers.update(papers_of_keyword.get(best, set()))
        current_reviewers.update(sample_reviewers(best, current_reviewers))
        if len(current_papers) >= next_threshold:
            snapshots.append(
                subset_corpus(corpus, sorted(current_papers), sorted(current_reviewers))
            )
            while len(current_papers) >= next_threshold:
                next_threshold *= config.growth_factor

    final = subset_corpus(corpus, sorted(current_papers), sorted(current_reviewers))
    if not snapshots or set(snapshots[-1].papers) != set(final.papers):
        snapshots.append(final)
    return snapshots


def simulate_reviews(
    n_papers: int,
    noise: NoiseModel,
    reviewers_per_phase: int = 2,
    policy: PhasePolicy | None = None,
    seed: int = 0,
) -> tuple[SimWorld, dict]:
    """Simulate two-phase reviewing under the Gaussian noise model.

    Papers whose phase-1 reviews all fall below the rejection threshold drop
    out; survivors get a second batch of reviews. Returns the world plus the
    phase-1 minus phase-2 mean-score gap on surviving papers, the pure
    selection-bias effect.
    """
    if n_papers < 1:
        raise ValueError("need at least one paper")
    if policy is None:
        policy = PhasePolicy()
    rng = np.random.default_rng(seed)
    true_scores = rng.normal(noise.mu_s, noise.sigma_s, size=n_papers)
    phase1 = rng.normal(
        true_scores[:, None], noise.sigma, size=(n_papers, reviewers_per_phase)
    )
    rejected = (phase1 < policy.reject_score_threshold).all(axis=1)
    survivors = ~rejected
    phase2 = rng.normal(
        true_scores[survivors, None], noise.sigma,
        size=(int(survivors.sum()), reviewers_per_phase),
    )
    world = SimWorld(
        true_scores=true_scores,
        phase1_scores=phase1,
        rejected=rejected,
        phase2_scores=phase2,
    )
    if survivors.any():
        gap = float(phase1[survivors].mean() - phase2.mean())
    else:
        gap = float("nan")
    stats = {
        "gap": gap,
        "n_papers": n_papers,
        "n_rejected": int(rejected.sum()),
        "rejected_fraction": float(rejected.mean()),
    }
    return world, stats


def mean_gap_over_seeds(
    n_papers: int,
    noise: NoiseModel,
    seeds: Sequence[int],
    reviewers_per_phase: int = 2,
    policy: PhasePolicy | None = None,
) -> dict:
    gaps = [
        simulate_reviews(n_papers, noise, reviewers_per_phase, policy, seed)[1]["gap"]
        for seed in seeds
    ]
    return {
        "gap_mean": float(np.mean(gaps)),
        "gap_std": float(np.std(gaps)),
        "gaps": gaps,
        "seeds": list(seeds),
    }


def gibbs_estimate(
    reviews_by_paper: Mapping[str, Sequence[float]] | Sequence[Sequence[float]],
    noise: NoiseModel,
    iterations: int = 2000,
    burn_in: int = 500,
    seed: int = 0,
) -> dict:
    """Recover the review-noise scale and per-paper scores by Gibbs sampling.

    Alternates between the conjugate normal update for each paper's true
    score and a shape-rate gamma update for the review precision
    ``1 / sigma**2``. Reports posterior means after burn-in.
    """
    if isinstance(reviews_by_paper, Mapping):
        paper_ids = sorted(reviews_by_paper)
        groups = [reviews_by_paper[pid] for pid in paper_ids]
    else:
        groups = list(reviews_by_paper)
        paper_ids = [str(i) for i in range(len(groups))]
    if not groups or any(len(g) == 0 for g in groups):
        raise ValueError("every paper needs at least one review")
    if burn_in >= iterations:
        raise ValueError("burn_in must be smaller than iterations")

    observations = np.concatenate([np.asarray(g, dtype=float) for g in groups])
    lengths = np.array([len(g) for g in groups])
    paper_index = np.repeat(np.arange(len(groups)), lengths)
    sums = np.bincount(paper_index, weights=observations, minlength=len(groups))
    total_reviews = len(observations)

    rng = np.random.default_rng(seed)
    prior_precision = 1.0 / noise.sigma_s ** 2
    prior_mean_term = noise.mu_s * prior_precision

    tau = 1.0  # review precision
    scores = sums / lengths
    sigma_samples = []
    score_running = np.zeros(len(groups))
    kept = 0
    for step in range(iterations):
        post_precision = prior_precision + lengths * tau
        post_mean = (prior_mean_term + tau * sums) / post_precision
        scores = rng.normal(post_mean, 1.0 / np.sqrt(post_precision))
        residuals = observations - scores[paper_index]
        shape = noise.gamma_alpha + total_reviews / 2.0
        rate = noise.gamma_beta + 0.5 * float(residuals @ residuals)
        tau = rng.gamma(shape, 1.0 / rate)
        if step >= burn_in:
            sigma_samples.append(1.0 / math.sqrt(tau))
            score_running += scores
            kept += 1

    return {
        "sigma": float(np.mean(sigma_samples)),
        "sigma_std": float(np.std(sigma_samples)),
        "scores": dict(zip(paper_ids, (score_running / kept).tolist())),
        "iterations": iterations,
        "burn_in": burn_in,
    }


@dataclass(frozen=True)
class ReviewedPaper:
    paper_id: str
    scores: tuple[float, ...]
    confidences: tuple[int, ...]
    accepted: bool


def pair_rejection_probability(paper: ReviewedPaper, policy: PhasePolicy) -> float:
    """Fraction of qualifying review pairs that would have rejected the paper.

    Exact enumeration over all pairs of reviews with confidence at or above
    the policy minimum; a pair rejects when both scores sit below the
    threshold. Requires at least four qualifying reviews.
    """
    qualifying = [
        score for score, confidence in zip(paper.scores, paper.confidences)
        if confidence >= policy.reject_confidence_min
    ]
    if len(qualifying) < 4:
        raise ValueError(
            f"paper {paper.paper_id!r} has {len(qualifying)} high-confidence reviews, need >= 4"
        )
    pairs = list(combinations(qualifying, 2))
    rejecting = sum(
        1 for a, b in pairs
        if a < policy.reject_score_threshold and b < policy.reject_score_threshold
    )
    return rejecting / len(pairs)


def false_negative_rate(
    cohort: Sequence[ReviewedPaper], policy: PhasePolicy
) -> dict:
    """Probability mass of would-be phase-1 rejections that were accepted.

    For each paper the exact pair-rejection probability acts as its chance of
    having been rejected under a random phase-1 pairing; the rate is the
    accepted papers' share of that rejection mass.
    """
    per_paper = {p.paper_id: pair_rejection_probability(p, policy) for p in cohort}
    accepted_mass = sum(per_paper[p.paper_id] for p in cohort if p.accepted)
    total_mass = sum(per_paper.values())
    return {
        "per_paper": per_paper,
        "rate": (accepted_mass / total_mass) if total_mass else 0.0,
        "accepted_mass": accepted_mass,
        "total_mass": total_mass,
    }


def match_metrics(
    assignment: Collection[tuple[str, str]],
    scores: ScoreMatrix,
    model: Model,
) -> dict:
    """Soft-constraint violation counts and match-quality summaries."""
    by_paper: dict[str, list[str]] = {paper: [] for paper in model.papers}
    for paper_id, reviewer_id in assignment:
        by_paper[paper_id].append(reviewer_id)

    papers_without_senior = 0
    for paper_id, reviewers in by_paper.items():
        if not any(
            model.seniority[r] == 3 for r in reviewers if model.roles[r] == "pc"
        ):
            papers_without_senior += 1

    coauthor_counts = {1: 0, 2: 0}
    for pair, distance in model.co_master.items():
        a, b = sorted(pair)
        if any(a in reviewers and b in reviewers for reviewers in by_paper.values()):
            coauthor_counts[distance] += 1

    same_region_papers = 0
    for reviewers in by_paper.values():
        committee = [r for r in reviewers if model.roles[r] in ("pc", "spc")]
        regions = [model.regions[r] for r in committee]
        if len(regions) != len(set(regions)):
            same_region_papers += 1

    assigned = set(assignment)
    realized_cycles = set()
    for j, j2, i, i2 in model.cycles:
        if (i, j) in assigned and (i2, j2) in assigned:
            realized_cycles.add(frozenset(((i, j), (i2, j2))))

    agg_values = [scores.entries[pair].aggscore for pair in sorted(assigned)]

    candidates_ranked: dict[str, list[str]] = {}
    for (paper_id, reviewer_id), entry in scores.entries.items():
        candidates_ranked.setdefault(paper_id, []).append(reviewer_id)
    for paper_id, reviewer_ids in candidates_ranked.items():
        reviewer_ids.sort(
            key=lambda r: (-scores.entries[(paper_id, r)].aggscore, r)
        )
    mean_ranks: dict[str, float] = {}
    for paper_id, reviewers in by_paper.items():
        if not reviewers:
            continue
        ranking = {r: n for n, r in enumerate(candidates_ranked.get(paper_id, []), start=1)}
        ranks = [ranking[r] for r in reviewers if r in ranking]
        if ranks:
            mean_ranks[paper_id] = sum(ranks) / len(ranks)

    return {
        "papers_without_senior_reviewer": papers_without_senior,
        "coauthor_pairs_by_distance": coauthor_counts,
        "papers_with_same_region_pair": same_region_papers,
        "realized_cycles": len(realized_cycles),
        "mean_aggscore": float(np.mean(agg_values)) if agg_values else 0.0,
        "mean_reviewer_rank": (
            float(np.mean(list(mean_ranks.values()))) if mean_ranks else 0.0
        ),
        "per_paper_mean_rank": mean_ranks,
    }


def missing_data_stability(scores: ScoreMatrix) -> dict:
    """Spread of base-score changes when one external component is hidden.

    Only pairs carrying all three components participate. Because the
    keyword term keeps its weight in both blends, each delta reduces to a
    quarter of the difference between the two external scores, so the
    reported standard deviations measure how much the external signals
    disagree. Also reports the mean per-paper spread of complete scores as
    the comparison yardstick.
    """
    deltas_tpms: list[float] = []
    deltas_acl: list[float] = []
    by_paper: dict[str, list[float]] = {}
    for (paper_id, _), entry in scores.entries.items():
        if entry.tpms_norm is None or entry.acl_norm is None:
            continue
        full = entry.base
        deltas_tpms.append(base_score(None, entry.acl_norm, entry.sam) - full)
        deltas_acl.append(base_score(entry.tpms_norm, None, entry.sam) - full)
        by_paper.setdefault(paper_id, []).append(full)
    if len(deltas_tpms) < 2:
        raise ValueError("need at least two complete-score entries")
    per_paper_std = [
        float(np.std(values)) for values in by_paper.values() if len(values) >= 2
    ]
    return {
        "delta_std_tpms_hidden": float(np.std(deltas_tpms)),
        "delta_std_acl_hidden": float(np.std(deltas_acl)),
        "delta_mean_tpms_hidden": float(np.mean(deltas_tpms)),
        "delta_mean_acl_hidden": float(np.mean(deltas_acl)),
        "mean_within_paper_std": float(np.mean(per_paper_std)) if per_paper_std else 0.0,
        "n_complete": len(deltas_tpms),
    }
