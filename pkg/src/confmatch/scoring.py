"""Reviewer-paper match scores.

The final score of a candidate pair starts from the keyword-based subject
area match (computed over a densified reviewer expertise vector), blends in
externally supplied text-similarity scores after linear normalization, bends
the blend by the reviewer's bid via exponentiation, and finally floors
low-scoring matches back onto the subject-area signal so that a weak match
is at least topically sensible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .bids import FilteredBids
from .coi import ConflictSet
from .corpus import Corpus, Paper, Reviewer

# Exponents applied to the base score per bid level; <1 lifts a score,
# the not-willing exponent crushes it.
BID_EXPONENTS = {
    "not_willing": 20.0,
    "not_entered": 1.0,
    "in_a_pinch": 0.67,
    "willing": 0.4,
    "eager": 0.25,
}
LOW_SCORE_FLOOR = 0.15
PRIMARY_WEIGHT = 1.0
SECONDARY_WEIGHT = 0.5
OWN_PAPER_VALUE = 0.2
COMMON_PARENT_VALUE = 0.4


class DegenerateSamplesError(ValueError):
    """Normalizer fit is impossible: fewer than two distinct raw values."""


@dataclass(frozen=True)
class Normalizer:
    """Linear raw-score calibration, clipped into [0, 1]."""

    slope: float = 1.0
    intercept: float = 0.0

    def apply(self, raw: float) -> float:
        return min(1.0, max(0.0, self.slope * raw + self.intercept))


@dataclass(frozen=True)
class ScoreEntry:
    sam: float
    tpms_norm: float | None
    acl_norm: float | None
    base: float
    bid_level: str
    aggscore: float


@dataclass
class ScoreMatrix:
    """Sparse map of non-conflicting (paper, reviewer) pairs to score records."""

    entries: dict[tuple[str, str], ScoreEntry] = field(default_factory=dict)

    def aggscore(self, paper_id: str, reviewer_id: str) -> float | None:
        entry = self.entries.get((paper_id, reviewer_id))
        return entry.aggscore if entry else None

    def by_paper(self) -> dict[str, list[tuple[str, ScoreEntry]]]:
        out: dict[str, list[tuple[str, ScoreEntry]]] = {}
        for (paper_id, reviewer_id), entry in self.entries.items():
            out.setdefault(paper_id, []).append((reviewer_id, entry))
        return out


class ExpertiseIndex:
    """Keyword statistics over a corpus plus cached dense reviewer vectors."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._single: dict[str, int] = {}
        self._pair: dict[frozenset[str], int] = {}
        listings = [
            {p.primary_keyword} | p.secondary_keywords for p in corpus.papers.values()
        ] + [
            {r.primary_keyword} | r.secondary_keywords for r in corpus.reviewers.values()
        ]
        for keywords in listings:
            for k in keywords:
                self._single[k] = self._single.get(k, 0) + 1
            ordered = sorted(keywords)
            for i, a in enumerate(ordered):
                for b in ordered[i + 1:]:
                    pair = frozenset((a, b))
                    self._pair[pair] = self._pair.get(pair, 0) + 1
        self._own_keywords: dict[str, set[str]] = {}
        for paper in corpus.papers.values():
            for author in paper.author_ids:
                self._own_keywords.setdefault(author, set()).update(
                    {paper.primary_keyword} | paper.secondary_keywords
                )
        self._dense_cache: dict[str, dict[str, float]] = {}

    def cooccurrence(self, keyword: str, other: str) -> float:
        """P(expertise in ``other`` | lists ``keyword``) from listing counts."""
        count = self._single.get(keyword, 0)
        if count == 0:
            return 0.0
        if other == keyword:
            return 1.0
        return self._pair.get(frozenset((keyword, other)), 0) / count

    def densify(self, reviewer: Reviewer) -> dict[str, float]:
        cached = self._dense_cache.get(reviewer.id)
        if cached is not None:
            return cached
        dense = _densify(self, reviewer)
        self._dense_cache[reviewer.id] = dense
        return dense


def cooccurrence(corpus_or_index, keyword: str, other: str) -> float:
    index = corpus_or_index if isinstance(corpus_or_index, ExpertiseIndex) \
        else ExpertiseIndex(corpus_or_index)
    return index.cooccurrence(keyword, other)


def densify(corpus_or_index, reviewer: Reviewer) -> dict[str, float]:
    """Dense expertise vector: declared keywords keep 1 / 0.5; other keywords
    take the max over co-occurrence, own-submission, and common-parent sources.
    """
    index = corpus_or_index if isinstance(corpus_or_index, ExpertiseIndex) \
        else ExpertiseIndex(corpus_or_index)
    return index.densify(reviewer)


def _densify(index: ExpertiseIndex, reviewer: Reviewer) -> dict[str, float]:
    corpus = index.corpus
    taxonomy = corpus.taxonomy
    declared = [(reviewer.primary_keyword, PRIMARY_WEIGHT)] + [
        (k, SECONDARY_WEIGHT) for k in sorted(reviewer.secondary_keywords)
    ]
    dense: dict[str, float] = {}
    for keyword, rho in declared:
        dense[keyword] = max(dense.get(keyword, 0.0), rho)
    own = index._own_keywords.get(reviewer.id, set())
    declared_set = set(dense)
    for keyword in taxonomy.keywords:
        if keyword in declared_set:
            continue
        value = 0.0
        for declared_kw, rho in declared:
            value = max(value, rho * index.cooccurrence(declared_kw, keyword))
            if taxonomy.parent(keyword) == taxonomy.parent(declared_kw):
                value = max(value, rho * COMMON_PARENT_VALUE)
        if keyword in own:
            value = max(value, OWN_PAPER_VALUE)
        if value > 0.0:
            dense[keyword] = value
    return dense


def sam_score(paper: Paper, dense: Mapping[str, float]) -> float:
    """Subject-area match: primary dot product plus geometrically discounted,
    descending-sorted secondary matches, normalized so the score caps at 1.

    The primary term alone can contribute 1 while the secondary terms sum to
    strictly less, so a primary match always dominates.
    """
    primary = dense.get(paper.primary_keyword, 0.0)
    # Sort by value descending with keyword id as the deterministic tie-break.
    products = [
        dense.get(k, 0.0) for k in
        sorted(paper.secondary_keywords, key=lambda k: (-dense.get(k, 0.0), k))
    ]
    m_count = len(products)
    z = 1.0 + sum(0.5 ** m for m in range(1, m_count + 1))
    secondary = sum((0.5 ** m) * v for m, v in enumerate(products, start=1))
    return (primary + secondary) / z


def fit_normalizer(samples: Sequence[tuple[float, float]]) -> Normalizer:
    """Ordinary least squares line through (raw score, annotated quality) pairs."""
    if len(samples) < 2:
        raise DegenerateSamplesError("need at least two samples")
    xs = [float(x) for x, _ in samples]
    ys = [float(y) for _, y in samples]
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0.0:
        raise DegenerateSamplesError("all raw values are identical")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return Normalizer(slope=slope, intercept=mean_y - slope * mean_x)


def base_score(tpms_norm: float | None, acl_norm: float | None, sam: float) -> float:
    """Blend normalized components, reweighting around missing ones.

    The keyword score carries half the weight whenever it is not the only
    signal, so the blend is unbiased by which external score is absent.
    """
    if tpms_norm is not None and acl_norm is not None:
        return 0.25 * tpms_norm + 0.25 * acl_norm + 0.5 * sam
    if tpms_norm is None and acl_norm is not None:
        return 0.5 * acl_norm + 0.5 * sam
    if acl_norm is None and tpms_norm is not None:
        return 0.5 * tpms_norm + 0.5 * sam
    return sam


def aggscore(base: float, bid_level: str) -> float:
    """Bend the base score by the reviewer's bid: ``base ** exponent``."""
    return base ** BID_EXPONENTS[bid_level]


def cleanup(agg: float, sam: float, bid_level: str) -> float:
    """Floor low aggregate scores onto the bid-adjusted subject-area score.

    A sub-0.15 aggregate backs off to min(sam ** exponent, 0.15) so any
    low-scoring match that does get selected is at least on-topic.
    """
    if agg < LOW_SCORE_FLOOR:
        return min(sam ** BID_EXPONENTS[bid_level], LOW_SCORE_FLOOR)
    return agg


def identity_normalizers() -> dict[str, Normalizer]:
    return {"tpms": Normalizer(), "acl": Normalizer()}


def fit_normalizers_from_annotations(
    annotations: Iterable[tuple[str, float, float]],
) -> dict[str, Normalizer]:
    """Fit per-component normalizers from (component, raw, y) annotations."""
    samples: dict[str, list[tuple[float, float]]] = {}
    for component, raw, y in annotations:
        samples.setdefault(component, []).append((raw, y))
    normalizers = identity_normalizers()
    for component, pairs in samples.items():
        if component not in normalizers:
            raise ValueError(f"unknown score component {component!r}")
        normalizers[component] = fit_normalizer(pairs)
    return normalizers


def build_score_matrix(
    corpus: Corpus,
    conflicts: ConflictSet,
    filtered_bids: FilteredBids,
    normalizers: Mapping[str, Normalizer] | None = None,
) -> ScoreMatrix:
    """Score every non-conflicting (paper, reviewer) pair.

    Candidate pruning against the 0.15 threshold is left to model
    construction; this matrix keeps every scored pair.
    """
    if normalizers is None:
        normalizers = identity_normalizers()
    index = ExpertiseIndex(corpus)
    matrix = ScoreMatrix()
    for paper_id in sorted(corpus.papers):
        paper = corpus.papers[paper_id]
        for reviewer_id in sorted(corpus.reviewers):
            if (paper_id, reviewer_id) in conflicts:
                continue
            reviewer = corpus.reviewers[reviewer_id]
            sam = sam_score(paper, index.densify(reviewer))
            tpms_raw, acl_raw = corpus.external_scores.get((paper_id, reviewer_id), (None, None))
            tpms_norm = None if tpms_raw is None else normalizers["tpms"].apply(tpms_raw)
            acl_norm = None if acl_raw is None else normalizers["acl"].apply(acl_raw)
            base = base_score(tpms_norm, acl_norm, sam)
            level = filtered_bids.level(reviewer_id, paper_id)
            final = cleanup(aggscore(base, level), sam, level)
            matrix.entries[(paper_id, reviewer_id)] = ScoreEntry(
                sam=sam,
                tpms_norm=tpms_norm,
                acl_norm=acl_norm,
                base=base,
                bid_level=level,
                aggscore=final,
            )
    return matrix


def hidden_component_deltas(entry: ScoreEntry) -> tuple[float | None, float | None]:
    """Base-score deltas if TPMS (resp. ACL) had been missing; None without
    both components. The keyword term cancels, leaving a quarter of the
    difference between the other external score and the hidden one.
    """
    if entry.tpms_norm is None or entry.acl_norm is None:
        return (None, None)
    full = entry.base
    without_tpms = base_score(None, entry.acl_norm, entry.sam)
    without_acl = base_score(entry.tpms_norm, None, entry.sam)
    return (without_tpms - full, without_acl - full)
