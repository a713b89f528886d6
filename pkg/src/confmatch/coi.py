"""Conflict-of-interest inference and suspicious-declaration screening.

Produces the hard exclusion set consumed by the assignment model. Conflicts
come from two places: what reviewers declared (affiliation domains, explicit
person conflicts) and what the coauthorship record implies (co-submission,
recent or heavy coauthorship, inferred advisor links). Declarations that look
manipulative are only *flagged* here; dropping them is a human decision fed
back in through the ``suppressed`` argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Mapping

from .corpus import Corpus, PersonMeta

# Reason precedence: the first rule (in this order) that fires for any author
# of the paper becomes the entry's recorded reason.
REASON_ORDER = (
    "declared_domain",
    "declared_person",
    "cosubmission",
    "recent_coauthor",
    "heavy_coauthor",
    "advisor",
    "sibling_students",
)
# Declared and co-submission conflicts; everything else counts as a
# non-trivial (inferred) conflict in reporting.
TRIVIAL_REASONS = frozenset({"declared_domain", "declared_person", "cosubmission"})

SUSPICION_CRITERIA = ("many_domains", "many_person_cois", "many_asymmetric")
MANY_DOMAINS_MIN = 8
MANY_PERSON_COIS_MIN = 15
MANY_ASYMMETRIC_MIN = 10

RECENT_COAUTHOR_YEARS = 5
HEAVY_COAUTHOR_PAPERS = 6  # strictly more than this many joint papers
ADVISOR_YEAR_GAP = 5
ADVISOR_PAPER_GAP = 10
ADVISOR_EARLY_PAPERS = 3


@dataclass(frozen=True)
class SuspicionReport:
    criteria: Mapping[str, frozenset[str]]  # person -> criteria that fired

    @property
    def flagged_users(self) -> frozenset[str]:
        return frozenset(self.criteria)


@dataclass
class ConflictSet:
    """Hard (paper, reviewer) exclusions with one recorded reason each."""

    reasons: dict[tuple[str, str], str] = field(default_factory=dict)

    @property
    def entries(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.reasons)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.reasons

    def __len__(self) -> int:
        return len(self.reasons)


def flag_suspicious_declarations(corpus: Corpus) -> SuspicionReport:
    """Flag reviewers whose declared conflicts look like gaming attempts.

    A reviewer is flagged for declaring many affiliation domains, many
    non-coauthor person conflicts, or many person conflicts the other party
    does not declare back (a target with no declaration data of its own
    counts as not reciprocating).
    """
    graph = corpus.coauthor_graph
    flagged: dict[str, frozenset[str]] = {}
    for reviewer in corpus.reviewers.values():
        fired = []
        if len(reviewer.declared_conflict_domains) >= MANY_DOMAINS_MIN:
            fired.append("many_domains")
        non_coauthors = [
            person for person in reviewer.declared_conflict_people
            if graph.edge(reviewer.id, person) is None
        ]
        if len(non_coauthors) >= MANY_PERSON_COIS_MIN:
            fired.append("many_person_cois")
        asymmetric = 0
        for person in reviewer.declared_conflict_people:
            other = corpus.reviewers.get(person)
            if other is None or reviewer.id not in other.declared_conflict_people:
                asymmetric += 1
        if asymmetric >= MANY_ASYMMETRIC_MIN:
            fired.append("many_asymmetric")
        if fired:
            flagged[reviewer.id] = frozenset(fired)
    return SuspicionReport(criteria=flagged)


def _is_advisor(
    senior: PersonMeta | None, junior: PersonMeta | None
) -> bool:
    """True when ``senior`` plausibly supervised ``junior``.

    Requires a five-year head start in first publication, at least ten more
    published papers, and coauthorship on at least three of the junior's
    first ten papers. Missing metadata means no inference.
    """
    if senior is None or junior is None:
        return False
    if senior.first_pub_year is None or junior.first_pub_year is None:
        return False
    if senior.first_pub_year > junior.first_pub_year - ADVISOR_YEAR_GAP:
        return False
    if senior.paper_count < junior.paper_count + ADVISOR_PAPER_GAP:
        return False
    return junior.early_coauthor_counts.get(senior.id, 0) >= ADVISOR_EARLY_PAPERS


def infer_conflicts(
    corpus: Corpus,
    current_year: int,
    suppressed: Collection[tuple[str, str, str]] = (),
) -> ConflictSet:
    """Build the full conflict set from declarations plus coauthorship rules.

    ``suppressed`` holds manually vetoed declarations as
    ``(reviewer_id, "domain"|"person", value)`` tuples; only declared
    conflicts can be suppressed, inferred ones never are.
    """
    if current_year is None:
        raise ValueError("current_year is required for recency-based conflict rules")
    suppressed_set = set(suppressed)
    for reviewer_id, kind, value in suppressed_set:
        reviewer = corpus.reviewers.get(reviewer_id)
        if reviewer is None:
            raise ValueError(f"suppression names unknown reviewer {reviewer_id!r}")
        declared = (
            reviewer.declared_conflict_domains if kind == "domain"
            else reviewer.declared_conflict_people if kind == "person"
            else None
        )
        if declared is None or value not in declared:
            raise ValueError(
                f"suppression ({reviewer_id!r}, {kind!r}, {value!r}) does not match a declaration"
            )

    by_author = corpus.papers_by_author()
    graph = corpus.coauthor_graph
    meta = corpus.person_meta

    def active_domains(reviewer):
        return {
            d for d in reviewer.declared_conflict_domains
            if (reviewer.id, "domain", d) not in suppressed_set
        }

    def active_people(reviewer):
        return {
            p for p in reviewer.declared_conflict_people
            if (reviewer.id, "person", p) not in suppressed_set
        }

    conflicts = ConflictSet()
    for paper in corpus.papers.values():
        authors = sorted(paper.author_ids)
        for reviewer in corpus.reviewers.values():
            domains = active_domains(reviewer)
            people = active_people(reviewer)
            reviewer_papers = by_author.get(reviewer.id, set())
            reason = None

            if any(meta.get(a) and (meta[a].domains & domains) for a in authors):
                reason = "declared_domain"
            elif any(a in people for a in authors):
                reason = "declared_person"
            elif any(reviewer_papers & by_author.get(a, set()) for a in authors):
                reason = "cosubmission"
            else:
                edges = [(a, graph.edge(reviewer.id, a)) for a in authors]
                if any(
                    e is not None and current_year - e.last_year <= RECENT_COAUTHOR_YEARS
                    for _, e in edges
                ):
                    reason = "recent_coauthor"
                elif any(e is not None and e.paper_count > HEAVY_COAUTHOR_PAPERS for _, e in edges):
                    reason = "heavy_coauthor"
                else:
                    r_meta = meta.get(reviewer.id)
                    author_metas = [meta.get(a) for a in authors]
                    if any(
                        _is_advisor(am, r_meta) or _is_advisor(r_meta, am)
                        for am in author_metas
                    ):
                        reason = "advisor"
                    elif r_meta is not None and any(
                        _shared_advisor(meta, r_meta, am) for am in author_metas
                    ):
                        reason = "sibling_students"

            if reason is not None:
                conflicts.reasons[(paper.id, reviewer.id)] = reason
    return conflicts


def _shared_advisor(
    all_meta: Mapping[str, PersonMeta], a: PersonMeta, b: PersonMeta | None
) -> bool:
    if b is None:
        return False
    # An advisor must appear in both students' early coauthor records.
    candidates = set(a.early_coauthor_counts) & set(b.early_coauthor_counts)
    return any(
        _is_advisor(all_meta.get(s), a) and _is_advisor(all_meta.get(s), b)
        for s in candidates
    )


def conflict_stats(conflicts: ConflictSet, total_papers: int | None = None) -> dict:
    """Summarize a conflict set: per-reason counts and trivial/non-trivial shares.

    ``total_papers`` sets the denominator for the papers-with-nontrivial
    fraction; when omitted, only papers appearing in the set are counted.
    """
    counts = {reason: 0 for reason in REASON_ORDER}
    papers_with_nontrivial = set()
    papers_seen = set()
    for (paper_id, _), reason in conflicts.reasons.items():
        counts[reason] += 1
        papers_seen.add(paper_id)
        if reason not in TRIVIAL_REASONS:
            papers_with_nontrivial.add(paper_id)
    total = len(conflicts.reasons)
    trivial = sum(counts[r] for r in TRIVIAL_REASONS)
    denominator = total_papers if total_papers is not None else len(papers_seen)
    return {
        "counts": counts,
        "total": total,
        "trivial_count": trivial,
        "trivial_fraction": (trivial / total) if total else 0.0,
        "nontrivial_fraction": ((total - trivial) / total) if total else 0.0,
        "papers_with_nontrivial_fraction": (
            len(papers_with_nontrivial) / denominator if denominator else 0.0
        ),
    }
