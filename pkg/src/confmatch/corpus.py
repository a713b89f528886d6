"""Conference input data: domain types, CSV ingest/export, and validation.

All identifier spaces (papers, reviewers, persons, keywords, regions) are
owned here. A loaded :class:`Corpus` is immutable by convention and fully
cross-validated: every reference in bids, edges, declared conflicts and
external scores resolves to a known id.

CSV schemas (UTF-8, header row, RFC-4180 quoting):

==================  =============================================================
papers.csv          id, primary_keyword, secondary_keywords(;), authors(;), track
reviewers.csv       id, role, primary_keyword, secondary_keywords(;), region,
                    prior_committee_count, published_paper_count, capacity,
                    conflict_domains(;), conflict_people(;)
bids.csv            reviewer_id, paper_id, level
keywords.csv        id, parent
regions.csv         id
coauthor_edges.csv  a, b, paper_count, last_year
person_meta.csv     id, first_pub_year, paper_count, early_counts(;), domains(;)
external_scores.csv paper_id, reviewer_id, tpms, acl   (empty cell = missing)
==================  =============================================================

``(;)`` marks a ``;``-joined multi-value cell. ``early_counts`` cells hold
``person:count`` pairs: how many of *this* person's first ten papers the named
person coauthored.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

ROLES = ("pc", "spc", "ac")
TRACKS = ("main", "fasttrack")
BID_LEVELS = ("not_willing", "not_entered", "in_a_pinch", "willing", "eager")

# Leading labels stripped during domain normalization, and the second-level
# suffixes that mark "organization.ac.xx" style domains.
DOMAIN_PREFIX_LABELS = ("cse", "cs", "eecs", "ee", "www", "mail")
DOMAIN_SUFFIX_SECOND_LEVELS = ("ac", "edu")


class CorpusError(Exception):
    """Base class for corpus ingest failures."""

    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        self.file = file
        self.line = line
        prefix = ""
        if file is not None:
            prefix = f"{file}:{line}: " if line is not None else f"{file}: "
        super().__init__(prefix + message)


class SchemaError(CorpusError):
    """Malformed cell, bad enum value, missing column, or duplicate key."""


class DanglingReferenceError(CorpusError):
    """A record references an id that does not exist."""


@dataclass(frozen=True)
class Paper:
    id: str
    primary_keyword: str
    secondary_keywords: frozenset[str]
    author_ids: frozenset[str]
    track: str = "main"


@dataclass(frozen=True)
class Reviewer:
    id: str
    role: str
    primary_keyword: str
    secondary_keywords: frozenset[str]
    region: str
    prior_committee_count: int
    published_paper_count: int
    capacity: int
    declared_conflict_domains: frozenset[str] = frozenset()
    declared_conflict_people: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Bid:
    reviewer_id: str
    paper_id: str
    level: str


@dataclass(frozen=True)
class CoauthorEdge:
    paper_count: int
    last_year: int


@dataclass(frozen=True)
class PersonMeta:
    """Publication-history facts used by advisor inference and domain COIs."""

    id: str
    first_pub_year: int | None = None
    paper_count: int = 0
    # person -> how many of this person's first ten papers they coauthored
    early_coauthor_counts: Mapping[str, int] = field(default_factory=dict)
    domains: frozenset[str] = frozenset()


@dataclass
class KeywordTaxonomy:
    """Two-level keyword hierarchy: bottom-level keywords -> top-level parents."""

    parent_of: dict[str, str]

    @property
    def keywords(self) -> frozenset[str]:
        return frozenset(self.parent_of)

    def parent(self, keyword: str) -> str | None:
        return self.parent_of.get(keyword)

    def __eq__(self, other):
        return isinstance(other, KeywordTaxonomy) and self.parent_of == other.parent_of


@dataclass
class CoauthorGraph:
    edges: dict[frozenset[str], CoauthorEdge]

    def edge(self, a: str, b: str) -> CoauthorEdge | None:
        return self.edges.get(frozenset((a, b)))

    def neighbors(self, person: str) -> set[str]:
        out: set[str] = set()
        for pair in self.edges:
            if person in pair:
                out.update(pair - {person})
        return out

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {}
        for pair in self.edges:
            a, b = sorted(pair)
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return adj

    def __eq__(self, other):
        return isinstance(other, CoauthorGraph) and self.edges == other.edges


@dataclass
class Corpus:
    papers: dict[str, Paper]
    reviewers: dict[str, Reviewer]
    taxonomy: KeywordTaxonomy
    bids: dict[tuple[str, str], Bid]  # keyed (reviewer_id, paper_id)
    coauthor_graph: CoauthorGraph
    person_meta: dict[str, PersonMeta]
    regions: frozenset[str]
    # (paper_id, reviewer_id) -> (tpms raw, acl raw); None marks a missing component
    external_scores: dict[tuple[str, str], tuple[float | None, float | None]]

    def known_persons(self) -> set[str]:
        persons = set(self.person_meta)
        persons.update(self.reviewers)
        for paper in self.papers.values():
            persons.update(paper.author_ids)
        return persons

    def papers_by_author(self) -> dict[str, set[str]]:
        index: dict[str, set[str]] = {}
        for paper in self.papers.values():
            for author in paper.author_ids:
                index.setdefault(author, set()).add(paper.id)
        return index

    def reviewers_with_role(self, *roles: str) -> list[Reviewer]:
        wanted = set(roles) if roles else set(ROLES)
        return [r for r in self.reviewers.values() if r.role in wanted]


def normalize_domain(raw: str) -> str:
    """Canonicalize an email/affiliation domain.

    Lowercases, strips well-known department prefixes (cse., cs., ...) while at
    least two labels remain, and collapses ``*.ac.xx`` / ``*.edu.xx`` domains to
    the organization label plus suffix pair. Idempotent.
    """
    labels = [part for part in raw.strip().lower().split(".") if part]
    changed = True
    while changed:
        changed = False
        while len(labels) >= 3 and labels[0] in DOMAIN_PREFIX_LABELS:
            labels.pop(0)
            changed = True
        if len(labels) > 3 and labels[-2] in DOMAIN_SUFFIX_SECOND_LEVELS:
            labels = labels[-3:]
            changed = True
    return ".".join(labels)


def seniority_level(reviewer: Reviewer) -> int:
    """Map reviewing/publication history to a 0-3 seniority band.

    The 2-4 paper band overlaps the 4-9 one; the higher band is checked first
    so a reviewer with exactly 4 papers lands at level 2.
    """
    committees = reviewer.prior_committee_count
    papers = reviewer.published_paper_count
    if committees >= 3 or papers >= 10:
        return 3
    if 4 <= papers <= 9:
        return 2
    if 2 <= papers <= 4 or 1 <= committees <= 2:
        return 1
    return 0


def build_corpus(
    papers: Iterable[Paper],
    reviewers: Iterable[Reviewer],
    keyword_parents: Mapping[str, str],
    regions: Iterable[str],
    bids: Iterable[Bid] = (),
    coauthor_edges: Mapping[frozenset[str], CoauthorEdge] | None = None,
    person_meta: Iterable[PersonMeta] = (),
    external_scores: Mapping[tuple[str, str], tuple[float | None, float | None]] | None = None,
) -> Corpus:
    """Assemble and cross-validate a corpus from in-memory parts.

    Duplicate bids collapse last-wins; every other duplicate key is an error.
    """
    taxonomy = KeywordTaxonomy(dict(keyword_parents))
    region_set = frozenset(regions)
    if not region_set:
        raise SchemaError("at least one region is required")

    paper_map: dict[str, Paper] = {}
    for paper in papers:
        if paper.id in paper_map:
            raise SchemaError(f"duplicate paper id {paper.id!r}")
        if not paper.author_ids:
            raise SchemaError(f"paper {paper.id!r} has no authors")
        if paper.track not in TRACKS:
            raise SchemaError(f"paper {paper.id!r} has unknown track {paper.track!r}")
        if paper.primary_keyword in paper.secondary_keywords:
            raise SchemaError(
                f"paper {paper.id!r} lists its primary keyword as secondary"
            )
        paper_map[paper.id] = paper

    reviewer_map: dict[str, Reviewer] = {}
    for reviewer in reviewers:
        if reviewer.id in reviewer_map:
            raise SchemaError(f"duplicate reviewer id {reviewer.id!r}")
        if reviewer.role not in ROLES:
            raise SchemaError(f"reviewer {reviewer.id!r} has unknown role {reviewer.role!r}")
        if reviewer.capacity < 1:
            raise SchemaError(f"reviewer {reviewer.id!r} has capacity < 1")
        normalized = frozenset(normalize_domain(d) for d in reviewer.declared_conflict_domains)
        if normalized != reviewer.declared_conflict_domains:
            reviewer = dataclasses.replace(reviewer, declared_conflict_domains=normalized)
        reviewer_map[reviewer.id] = reviewer

    known_keywords = taxonomy.keywords
    for paper in paper_map.values():
        for keyword in {paper.primary_keyword} | paper.secondary_keywords:
            if keyword not in known_keywords:
                raise DanglingReferenceError(
                    f"paper {paper.id!r} references unknown keyword {keyword!r}"
                )
    for reviewer in reviewer_map.values():
        for keyword in {reviewer.primary_keyword} | reviewer.secondary_keywords:
            if keyword not in known_keywords:
                raise DanglingReferenceError(
                    f"reviewer {reviewer.id!r} references unknown keyword {keyword!r}"
                )
        if reviewer.region not in region_set:
            raise DanglingReferenceError(
                f"reviewer {reviewer.id!r} references unknown region {reviewer.region!r}"
            )

    meta_map: dict[str, PersonMeta] = {}
    for meta in person_meta:
        if meta.id in meta_map:
            raise SchemaError(f"duplicate person_meta id {meta.id!r}")
        normalized = frozenset(normalize_domain(d) for d in meta.domains)
        if normalized != meta.domains:
            meta = dataclasses.replace(meta, domains=normalized)
        meta_map[meta.id] = meta

    persons = set(meta_map) | set(reviewer_map)
    for paper in paper_map.values():
        persons.update(paper.author_ids)

    edge_map = dict(coauthor_edges or {})
    for pair, edge in edge_map.items():
        if len(pair) != 2:
            raise SchemaError(f"coauthor edge {sorted(pair)} is not a pair")
        if edge.paper_count < 1:
            raise SchemaError(f"coauthor edge {sorted(pair)} has weight < 1")
        for person in pair:
            if person not in persons:
                raise DanglingReferenceError(
                    f"coauthor edge references unknown person {person!r}"
                )

    for meta in meta_map.values():
        for other in meta.early_coauthor_counts:
            if other not in persons:
                raise DanglingReferenceError(
                    f"person_meta {meta.id!r} references unknown person {other!r}"
                )

    for reviewer in reviewer_map.values():
        for person in reviewer.declared_conflict_people:
            if person not in persons:
                raise DanglingReferenceError(
                    f"reviewer {reviewer.id!r} declares conflict with unknown person {person!r}"
                )

    bid_map: dict[tuple[str, str], Bid] = {}
    for bid in bids:
        if bid.level not in BID_LEVELS or bid.level == "not_entered":
            raise SchemaError(
                f"bid ({bid.reviewer_id!r}, {bid.paper_id!r}) has invalid level {bid.level!r}"
            )
        if bid.reviewer_id not in reviewer_map:
            raise DanglingReferenceError(
                f"bid references unknown reviewer {bid.reviewer_id!r}"
            )
        if bid.paper_id not in paper_map:
            raise DanglingReferenceError(f"bid references unknown paper {bid.paper_id!r}")
        bid_map[(bid.reviewer_id, bid.paper_id)] = bid  # last wins

    score_map = dict(external_scores or {})
    for (paper_id, reviewer_id), (tpms, acl) in score_map.items():
        if paper_id not in paper_map:
            raise DanglingReferenceError(
                f"external score references unknown paper {paper_id!r}"
            )
        if reviewer_id not in reviewer_map:
            raise DanglingReferenceError(
                f"external score references unknown reviewer {reviewer_id!r}"
            )
        for value in (tpms, acl):
            if value is not None and not 0.0 <= value <= 1.0:
                raise SchemaError(
                    f"external score for ({paper_id!r}, {reviewer_id!r}) outside [0, 1]"
                )

    return Corpus(
        papers=paper_map,
        reviewers=reviewer_map,
        taxonomy=taxonomy,
        bids=bid_map,
        coauthor_graph=CoauthorGraph(edge_map),
        person_meta=meta_map,
        regions=region_set,
        external_scores=score_map,
    )


def _split_multi(cell: str) -> list[str]:
    cell = cell.strip()
    if not cell:
        return []
    return [part.strip() for part in cell.split(";") if part.strip()]


def _read_rows(path: Path, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(f"missing columns {missing}", file=path.name, line=1)
        unknown = [col for col in header if col not in required + optional]
        if unknown:
            raise SchemaError(f"unknown columns {unknown}", file=path.name, line=1)
        for lineno, row in enumerate(reader, start=2):
            if None in row.values():
                raise SchemaError("row has too few cells", file=path.name, line=lineno)
            yield lineno, row


def _parse_int(value: str, what: str, file: str, line: int, minimum: int | None = None) -> int:
    try:
        parsed = int(value.strip())
    except ValueError:
        raise SchemaError(f"{what} is not an integer: {value!r}", file=file, line=line)
    if minimum is not None and parsed < minimum:
        raise SchemaError(f"{what} must be >= {minimum}, got {parsed}", file=file, line=line)
    return parsed


def _parse_optional_float(value: str, what: str, file: str, line: int) -> float | None:
    value = value.strip()
    if not value:
        return None
    try:
        return float(value)
    except ValueError:
        raise SchemaError(f"{what} is not a number: {value!r}", file=file, line=line)


def load_corpus(data_dir: str | Path) -> Corpus:
    """Load and cross-validate all conference inputs from ``data_dir``.

    papers.csv, reviewers.csv, keywords.csv and regions.csv are required;
    the remaining files default to empty when absent.
    """
    root = Path(data_dir)
    for name in ("papers.csv", "reviewers.csv", "keywords.csv", "regions.csv"):
        if not (root / name).exists():
            raise SchemaError(f"required input file missing: {name}", file=name)

    keyword_parents: dict[str, str] = {}
    for lineno, row in _read_rows(root / "keywords.csv", ("id", "parent")):
        keyword = row["id"].strip()
        if not keyword:
            raise SchemaError("empty keyword id", file="keywords.csv", line=lineno)
        if keyword in keyword_parents:
            raise SchemaError(f"duplicate keyword {keyword!r}", file="keywords.csv", line=lineno)
        parent = row["parent"].strip()
        if not parent:
            raise SchemaError(f"keyword {keyword!r} has no parent", file="keywords.csv", line=lineno)
        keyword_parents[keyword] = parent

    regions: list[str] = []
    for lineno, row in _read_rows(root / "regions.csv", ("id",)):
        region = row["id"].strip()
        if region in regions:
            raise SchemaError(f"duplicate region {region!r}", file="regions.csv", line=lineno)
        regions.append(region)

    papers: list[Paper] = []
    for lineno, row in _read_rows(
        root / "papers.csv",
        ("id", "primary_keyword", "secondary_keywords", "authors", "track"),
    ):
        track = row["track"].strip() or "main"
        if track not in TRACKS:
            raise SchemaError(f"unknown track {track!r}", file="papers.csv", line=lineno)
        papers.append(
            Paper(
                id=row["id"].strip(),
                primary_keyword=row["primary_keyword"].strip(),
                secondary_keywords=frozenset(_split_multi(row["secondary_keywords"])),
                author_ids=frozenset(_split_multi(row["authors"])),
                track=track,
            )
        )

    reviewers: list[Reviewer] = []
    for lineno, row in _read_rows(
        root / "reviewers.csv",
        (
            "id",
            "role",
            "primary_keyword",
            "secondary_keywords",
            "region",
            "prior_committee_count",
            "published_paper_count",
            "capacity",
            "conflict_domains",
            "conflict_people",
        ),
    ):
        role = row["role"].strip().lower()
        if role not in ROLES:
            raise SchemaError(f"unknown role {row['role']!r}", file="reviewers.csv", line=lineno)
        reviewers.append(
            Reviewer(
                id=row["id"].strip(),
                role=role,
                primary_keyword=row["primary_keyword"].strip(),
                secondary_keywords=frozenset(_split_multi(row["secondary_keywords"])),
                region=row["region"].strip(),
                prior_committee_count=_parse_int(
                    row["prior_committee_count"], "prior_committee_count",
                    "reviewers.csv", lineno, minimum=0,
                ),
                published_paper_count=_parse_int(
                    row["published_paper_count"], "published_paper_count",
                    "reviewers.csv", lineno, minimum=0,
                ),
                capacity=_parse_int(row["capacity"], "capacity", "reviewers.csv", lineno, minimum=1),
                declared_conflict_domains=frozenset(
                    normalize_domain(d) for d in _split_multi(row["conflict_domains"])
                ),
                declared_conflict_people=frozenset(_split_multi(row["conflict_people"])),
            )
        )

    bids: list[Bid] = []
    bids_path = root / "bids.csv"
    if bids_path.exists():
        for lineno, row in _read_rows(bids_path, ("reviewer_id", "paper_id", "level")):
            level = row["level"].strip()
            if level not in BID_LEVELS or level == "not_entered":
                raise SchemaError(f"invalid bid level {level!r}", file="bids.csv", line=lineno)
            bids.append(Bid(row["reviewer_id"].strip(), row["paper_id"].strip(), level))

    edges: dict[frozenset[str], CoauthorEdge] = {}
    edges_path = root / "coauthor_edges.csv"
    if edges_path.exists():
        for lineno, row in _read_rows(edges_path, ("a", "b", "paper_count", "last_year")):
            pair = frozenset((row["a"].strip(), row["b"].strip()))
            if len(pair) != 2:
                raise SchemaError("self-loop coauthor edge", file="coauthor_edges.csv", line=lineno)
            if pair in edges:
                raise SchemaError(
                    f"duplicate coauthor edge {sorted(pair)}", file="coauthor_edges.csv", line=lineno
                )
            edges[pair] = CoauthorEdge(
                paper_count=_parse_int(row["paper_count"], "paper_count",
                                       "coauthor_edges.csv", lineno, minimum=1),
                last_year=_parse_int(row["last_year"], "last_year", "coauthor_edges.csv", lineno),
            )

    metas: list[PersonMeta] = []
    meta_path = root / "person_meta.csv"
    if meta_path.exists():
        for lineno, row in _read_rows(
            meta_path,
            ("id", "first_pub_year", "paper_count", "early_counts"),
            optional=("domains",),
        ):
            counts: dict[str, int] = {}
            for item in _split_multi(row["early_counts"]):
                if ":" not in item:
                    raise SchemaError(
                        f"early_counts entry {item!r} is not person:count",
                        file="person_meta.csv", line=lineno,
                    )
                person, count = item.rsplit(":", 1)
                counts[person.strip()] = _parse_int(
                    count, "early count", "person_meta.csv", lineno, minimum=0
                )
            first_year = row["first_pub_year"].strip()
            metas.append(
                PersonMeta(
                    id=row["id"].strip(),
                    first_pub_year=(
                        _parse_int(first_year, "first_pub_year", "person_meta.csv", lineno)
                        if first_year else None
                    ),
                    paper_count=_parse_int(
                        row["paper_count"], "paper_count", "person_meta.csv", lineno, minimum=0
                    ),
                    early_coauthor_counts=counts,
                    domains=frozenset(
                        normalize_domain(d) for d in _split_multi(row.get("domains", ""))
                    ),
                )
            )

    scores: dict[tuple[str, str], tuple[float | None, float | None]] = {}
    scores_path = root / "external_scores.csv"
    if scores_path.exists():
        for lineno, row in _read_rows(scores_path, ("paper_id", "reviewer_id", "tpms", "acl")):
            key = (row["paper_id"].strip(), row["reviewer_id"].strip())
            if key in scores:
                raise SchemaError(
                    f"duplicate external score for {key}", file="external_scores.csv", line=lineno
                )
            scores[key] = (
                _parse_optional_float(row["tpms"], "tpms", "external_scores.csv", lineno),
                _parse_optional_float(row["acl"], "acl", "external_scores.csv", lineno),
            )

    return build_corpus(
        papers=papers,
        reviewers=reviewers,
        keyword_parents=keyword_parents,
        regions=regions,
        bids=bids,
        coauthor_edges=edges,
        person_meta=metas,
        external_scores=scores,
    )


def _join_multi(values: Iterable[str]) -> str:
    return ";".join(sorted(values))


def save_corpus(corpus: Corpus, data_dir: str | Path) -> None:
    """Write the corpus back to CSV files; load(save(c)) == c."""
    root = Path(data_dir)
    root.mkdir(parents=True, exist_ok=True)

    def write(name: str, header: list[str], rows: Iterable[list]):
        with (root / name).open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)

    write(
        "papers.csv",
        ["id", "primary_keyword", "secondary_keywords", "authors", "track"],
        [
            [p.id, p.primary_keyword, _join_multi(p.secondary_keywords),
             _join_multi(p.author_ids), p.track]
            for p in sorted(corpus.papers.values(), key=lambda p: p.id)
        ],
    )
    write(
        "reviewers.csv",
        ["id", "role", "primary_keyword", "secondary_keywords", "region",
         "prior_committee_count", "published_paper_count", "capacity",
         "conflict_domains", "conflict_people"],
        [
            [r.id, r.role, r.primary_keyword, _join_multi(r.secondary_keywords), r.region,
             r.prior_committee_count, r.published_paper_count, r.capacity,
             _join_multi(r.declared_conflict_domains), _join_multi(r.declared_conflict_people)]
            for r in sorted(corpus.reviewers.values(), key=lambda r: r.id)
        ],
    )
    write(
        "keywords.csv",
        ["id", "parent"],
        [[k, corpus.taxonomy.parent_of[k]] for k in sorted(corpus.taxonomy.parent_of)],
    )
    write("regions.csv", ["id"], [[r] for r in sorted(corpus.regions)])
    write(
        "bids.csv",
        ["reviewer_id", "paper_id", "level"],
        [[b.reviewer_id, b.paper_id, b.level] for b in
         sorted(corpus.bids.values(), key=lambda b: (b.reviewer_id, b.paper_id))],
    )
    write(
        "coauthor_edges.csv",
        ["a", "b", "paper_count", "last_year"],
        [
            [*sorted(pair), edge.paper_count, edge.last_year]
            for pair, edge in sorted(corpus.coauthor_graph.edges.items(),
                                     key=lambda item: sorted(item[0]))
        ],
    )
    write(
        "person_meta.csv",
        ["id", "first_pub_year", "paper_count", "early_counts", "domains"],
        [
            [m.id, "" if m.first_pub_year is None else m.first_pub_year, m.paper_count,
             ";".join(f"{p}:{c}" for p, c in sorted(m.early_coauthor_counts.items())),
             _join_multi(m.domains)]
            for m in sorted(corpus.person_meta.values(), key=lambda m: m.id)
        ],
    )
    write(
        "external_scores.csv",
        ["paper_id", "reviewer_id", "tpms", "acl"],
        [
            [p, r, "" if t is None else repr(t), "" if a is None else repr(a)]
            for (p, r), (t, a) in sorted(corpus.external_scores.items())
        ],
    )


def subset_corpus(corpus: Corpus, paper_ids: Iterable[str], reviewer_ids: Iterable[str]) -> Corpus:
    """Restrict a corpus to the given papers and reviewers.

    Bids, external scores and coauthor edges are filtered to surviving ids;
    the taxonomy and region set are kept whole.
    """
    papers = {pid: corpus.papers[pid] for pid in paper_ids}
    reviewers = {rid: corpus.reviewers[rid] for rid in reviewer_ids}
    persons = set(reviewers)
    for paper in papers.values():
        persons.update(paper.author_ids)
    return Corpus(
        papers=papers,
        reviewers=reviewers,
        taxonomy=corpus.taxonomy,
        bids={
            key: bid for key, bid in corpus.bids.items()
            if bid.reviewer_id in reviewers and bid.paper_id in papers
        },
        coauthor_graph=CoauthorGraph(
            {pair: edge for pair, edge in corpus.coauthor_graph.edges.items()
             if pair <= persons}
        ),
        person_meta={pid: m for pid, m in corpus.person_meta.items() if pid in persons},
        regions=corpus.regions,
        external_scores={
            key: value for key, value in corpus.external_scores.items()
            if key[0] in papers and key[1] in reviewers
        },
    )
