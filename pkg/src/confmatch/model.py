"""Sparse assignment-model construction and independent objective evaluation.

The model maximizes total match score over binary paper-reviewer assignment
variables subject to hard constraints (conflict exclusion by variable
omission, per-paper role quotas, PC load caps) plus soft terms: stepped
capacity penalties for SPC/AC overload, a capped per-paper seniority reward,
penalties for assigning close coauthors to the same paper, a reward per
distinct region among a paper's committee, and penalties on assignments
completing reciprocal-bid cycles.

``evaluate_objective`` recomputes every term from first principles (slacks at
their minimal feasible values) so it can serve as the oracle for any solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Collection, Iterable, Mapping, Sequence

from .bids import FilteredBids, POSITIVE_LEVELS
from .coi import ConflictSet
from .corpus import Corpus, seniority_level
from .scoring import ScoreMatrix

DEFAULT_CAPACITY_LEVELS: dict[str, tuple[tuple[int, float], ...]] = {
    "spc": ((8, -0.05), (12, -0.05), (16, -0.05), (20, -0.05), (24, -0.5)),
    "ac": ((20, -0.05), (30, -0.05), (40, -0.05), (50, -0.05), (60, -0.5)),
}


class ModelError(Exception):
    pass


class HardConstraintViolation(ModelError):
    """An assignment breaks a hard constraint; the message names it."""


class InfeasibleModelError(ModelError):
    pass


def _default_p_co() -> dict[int, float]:
    return {1: -0.3, 2: -0.2}


@dataclass(frozen=True)
class MatchParams:
    """Assignment-problem configuration; defaults are the deployed values."""

    gamma_pc: int = 2
    gamma_spc: int = 1
    gamma_ac: int = 1
    pc_capacity: int = 3
    capacity_levels: Mapping[str, tuple[tuple[int, float], ...]] = field(
        default_factory=lambda: dict(DEFAULT_CAPACITY_LEVELS)
    )
    reward_sen: float = 4.0
    target_seniority: int = 4
    min_seniority: int = 0
    p_co: Mapping[int, float] = field(default_factory=_default_p_co)
    reward_reg: float = 0.1
    p_cy: float = -0.05
    k: int = 50
    score_threshold: float = 0.15
    mip_gap_abs: float = 20.0
    cycle_mode: str = "per_tuple"  # or "per_pair": one slack per reviewer pair

    def __post_init__(self):
        levels = self.capacity_levels
        for role, steps in levels.items():
            caps = [cap for cap, _ in steps]
            if caps != sorted(caps) or len(set(caps)) != len(caps):
                raise ValueError(f"capacity levels for {role!r} must strictly increase")
        if any(penalty > 0 for penalty in self.p_co.values()):
            raise ValueError("coauthor penalties must be <= 0")
        if self.p_cy > 0:
            raise ValueError("cycle penalty must be <= 0")
        if self.cycle_mode not in ("per_tuple", "per_pair"):
            raise ValueError(f"unknown cycle_mode {self.cycle_mode!r}")

    def gamma(self, role: str) -> int:
        return {"pc": self.gamma_pc, "spc": self.gamma_spc, "ac": self.gamma_ac}[role]


@dataclass(frozen=True)
class ObjectiveBreakdown:
    match: float = 0.0
    capacity: float = 0.0
    seniority: float = 0.0
    coauthor: float = 0.0
    region: float = 0.0
    cycle: float = 0.0

    @property
    def total(self) -> float:
        return (self.match + self.capacity + self.seniority
                + self.coauthor + self.region + self.cycle)

    def as_dict(self) -> dict[str, float]:
        return {
            "match": self.match,
            "capacity": self.capacity,
            "seniority": self.seniority,
            "coauthor": self.coauthor,
            "region": self.region,
            "cycle": self.cycle,
            "total": self.total,
        }

    def allclose(self, other: "ObjectiveBreakdown", tol: float = 1e-9) -> bool:
        mine, theirs = self.as_dict(), other.as_dict()
        return all(abs(mine[k] - theirs[k]) <= tol for k in mine)


@dataclass(frozen=True)
class Variable:
    paper_id: str
    reviewer_id: str
    score: float
    fixed: bool = False


@dataclass
class Model:
    """Immutable-after-build description of one assignment problem."""

    params: MatchParams
    papers: tuple[str, ...]
    variables: tuple[Variable, ...]
    var_index: dict[tuple[str, str], int]
    roles: dict[str, str]
    regions: dict[str, str]
    seniority: dict[str, int]
    paper_quota: dict[str, dict[str, int]]
    pc_load_limit: dict[str, int]
    # SPC/AC reviewer -> effective capacity steps (cap, penalty)
    capacity_steps: dict[str, tuple[tuple[int, float], ...]]
    # master coauthor-distance map over PC/SPC pairs, distance in {1, 2}
    co_master: dict[frozenset[str], int]
    # pairs whose penalty terms are currently in the model; None = all
    co_active: frozenset[frozenset[str]] | None
    # reciprocal-bid cycles (j, j2, i, i2), closed under the half swap
    cycles: tuple[tuple[str, str, str, str], ...]
    fixed_pairs: frozenset[tuple[str, str]]

    def candidates_by_paper(self) -> dict[str, dict[str, list[Variable]]]:
        out: dict[str, dict[str, list[Variable]]] = {
            paper: {"pc": [], "spc": [], "ac": []} for paper in self.papers
        }
        for var in self.variables:
            out[var.paper_id][self.roles[var.reviewer_id]].append(var)
        return out

    def active_co_pairs(self) -> dict[frozenset[str], int]:
        if self.co_active is None:
            return dict(self.co_master)
        return {pair: self.co_master[pair] for pair in self.co_active}

    def with_active_co_pairs(self, pairs: Collection[frozenset[str]]) -> "Model":
        unknown = [p for p in pairs if p not in self.co_master]
        if unknown:
            raise ModelError(f"unknown coauthor pairs {sorted(map(sorted, unknown))}")
        return replace(self, co_active=frozenset(pairs))


def candidate_pairs(
    corpus: Corpus, scores: ScoreMatrix, params: MatchParams
) -> list[tuple[str, str]]:
    """Sparsify: per-paper top-k per role union per-reviewer top k/5k/10k,
    then drop anything under the score threshold.

    Ties break by (score desc, reviewer id, paper id) throughout.
    """
    by_paper: dict[str, list[tuple[float, str]]] = {}
    by_reviewer: dict[str, list[tuple[float, str]]] = {}
    for (paper_id, reviewer_id), entry in scores.entries.items():
        by_paper.setdefault(paper_id, []).append((entry.aggscore, reviewer_id))
        by_reviewer.setdefault(reviewer_id, []).append((entry.aggscore, paper_id))

    selected: set[tuple[str, str]] = set()
    for paper_id, items in by_paper.items():
        per_role: dict[str, list[tuple[float, str]]] = {"pc": [], "spc": [], "ac": []}
        for score, reviewer_id in items:
            per_role[corpus.reviewers[reviewer_id].role].append((score, reviewer_id))
        for role, entries in per_role.items():
            entries.sort(key=lambda item: (-item[0], item[1]))
            for score, reviewer_id in entries[: params.k]:
                selected.add((paper_id, reviewer_id))

    quota_by_role = {"pc": params.k, "spc": 5 * params.k, "ac": 10 * params.k}
    for reviewer_id, items in by_reviewer.items():
        items.sort(key=lambda item: (-item[0], item[1]))
        limit = quota_by_role[corpus.reviewers[reviewer_id].role]
        for score, paper_id in items[:limit]:
            selected.add((paper_id, reviewer_id))

    return sorted(
        pair for pair in selected
        if scores.entries[pair].aggscore >= params.score_threshold
    )


def reviewer_distances(corpus: Corpus) -> dict[frozenset[str], int]:
    """Coauthorship-graph distances between PC/SPC reviewers, truncated at 2.

    Distance runs through the full person graph, so the middle node of a
    distance-2 path need not be a reviewer.
    """
    committee = sorted(
        r.id for r in corpus.reviewers.values() if r.role in ("pc", "spc")
    )
    committee_set = set(committee)
    adjacency = corpus.coauthor_graph.adjacency()
    distances: dict[frozenset[str], int] = {}
    for reviewer_id in committee:
        direct = adjacency.get(reviewer_id, set())
        for other in direct:
            if other in committee_set and other != reviewer_id:
                distances[frozenset((reviewer_id, other))] = 1
        two_away: set[str] = set()
        for middle in direct:
            two_away.update(adjacency.get(middle, set()))
        for other in two_away:
            if other not in committee_set or other == reviewer_id or other in direct:
                continue
            pair = frozenset((reviewer_id, other))
            if pair not in distances:
                distances[pair] = 2
    return distances


def bidding_cycles(
    corpus: Corpus, filtered_bids: FilteredBids
) -> list[tuple[str, str, str, str]]:
    """All (j, j2, i, i2) tuples where j bids positively on i authored by j2
    and j2 bids positively on i2 authored by j; PC/SPC reviewers only.
    Closed under the swap (j, j2, i, i2) <-> (j2, j, i2, i).
    """
    committee = {
        r.id for r in corpus.reviewers.values() if r.role in ("pc", "spc")
    }
    positive: dict[str, set[str]] = {}
    for (reviewer_id, paper_id), level in filtered_bids.bids.items():
        if level in POSITIVE_LEVELS and reviewer_id in committee:
            positive.setdefault(reviewer_id, set()).add(paper_id)

    tuples: set[tuple[str, str, str, str]] = set()
    for j, papers in positive.items():
        for i in papers:
            for j2 in corpus.papers[i].author_ids:
                if j2 == j or j2 not in committee:
                    continue
                for i2 in positive.get(j2, ()):
                    if j in corpus.papers[i2].author_ids:
                        tuples.add((j, j2, i, i2))
                        tuples.add((j2, j, i2, i))
    return sorted(tuples)


def build_model(
    corpus: Corpus,
    scores: ScoreMatrix,
    conflicts: ConflictSet,
    filtered_bids: FilteredBids,
    params: MatchParams,
    fixed: Iterable[tuple[str, str]] = (),
    *,
    include_papers: Collection[str] | None = None,
    paper_quota_overrides: Mapping[str, Mapping[str, int]] | None = None,
    pc_capacity_override: int | None = None,
    raise_capacity_for_fixed: bool = True,
    defer_coauthor_terms: bool = False,
) -> Model:
    """Assemble the sparse assignment model.

    ``fixed`` pairs (prior-phase assignments) are forced on and, when
    ``raise_capacity_for_fixed`` is set, exempted from capacity budgets by
    shifting the affected reviewer's limits. With
    ``raise_capacity_for_fixed=False`` fixed assignments consume the same
    budget as new ones, which keeps a multi-phase decomposition feasible for
    the corresponding single-phase problem. ``defer_coauthor_terms`` starts
    the model with an empty active coauthor set for row generation.
    """
    paper_ids = sorted(include_papers) if include_papers is not None else sorted(corpus.papers)
    paper_set = set(paper_ids)
    for paper_id in paper_ids:
        if paper_id not in corpus.papers:
            raise ModelError(f"include_papers names unknown paper {paper_id!r}")

    fixed_pairs = frozenset(fixed)
    for paper_id, reviewer_id in fixed_pairs:
        if paper_id not in paper_set:
            raise ModelError(f"fixed pair references excluded paper {paper_id!r}")
        if (paper_id, reviewer_id) in conflicts:
            raise ModelError(
                f"fixed pair ({paper_id!r}, {reviewer_id!r}) is conflicting"
            )

    pairs = [p for p in candidate_pairs(corpus, scores, params) if p[0] in paper_set]
    pair_set = set(pairs)
    for pair in sorted(fixed_pairs):
        if pair not in pair_set:
            entry = scores.entries.get(pair)
            if entry is None:
                raise ModelError(f"fixed pair {pair} has no score entry")
            pairs.append(pair)
            pair_set.add(pair)
    pairs.sort()

    variables = tuple(
        Variable(
            paper_id=paper_id,
            reviewer_id=reviewer_id,
            score=scores.entries[(paper_id, reviewer_id)].aggscore,
            fixed=(paper_id, reviewer_id) in fixed_pairs,
        )
        for paper_id, reviewer_id in pairs
    )
    var_index = {(v.paper_id, v.reviewer_id): n for n, v in enumerate(variables)}

    fixed_count: dict[str, int] = {}
    for _, reviewer_id in fixed_pairs:
        fixed_count[reviewer_id] = fixed_count.get(reviewer_id, 0) + 1

    roles = {r.id: r.role for r in corpus.reviewers.values()}
    regions = {r.id: r.region for r in corpus.reviewers.values()}
    seniority = {r.id: seniority_level(r) for r in corpus.reviewers.values()}

    quota: dict[str, dict[str, int]] = {}
    overrides = paper_quota_overrides or {}
    for paper_id in paper_ids:
        per_role = {role: params.gamma(role) for role in ("pc", "spc", "ac")}
        per_role.update(overrides.get(paper_id, {}))
        quota[paper_id] = per_role

    pc_cap = params.pc_capacity if pc_capacity_override is None else pc_capacity_override
    pc_load_limit = {}
    capacity_steps = {}
    for reviewer in corpus.reviewers.values():
        bump = fixed_count.get(reviewer.id, 0) if raise_capacity_for_fixed else 0
        if reviewer.role == "pc":
            pc_load_limit[reviewer.id] = pc_cap + bump
        else:
            steps = params.capacity_levels.get(reviewer.role, ())
            capacity_steps[reviewer.id] = tuple(
                (cap + bump, penalty) for cap, penalty in steps
            )

    distances = reviewer_distances(corpus)
    cycles = tuple(
        (j, j2, i, i2) for (j, j2, i, i2) in bidding_cycles(corpus, filtered_bids)
        if (i, j) in var_index or (i2, j2) in var_index
    )

    return Model(
        params=params,
        papers=tuple(paper_ids),
        variables=variables,
        var_index=var_index,
        roles=roles,
        regions=regions,
        seniority=seniority,
        paper_quota=quota,
        pc_load_limit=pc_load_limit,
        capacity_steps=capacity_steps,
        co_master=distances,
        co_active=frozenset() if defer_coauthor_terms else None,
        cycles=cycles,
        fixed_pairs=fixed_pairs,
    )


def capacity_penalty(load: int, steps: Sequence[tuple[int, float]]) -> float:
    """Penalty charged per unit of load above each capacity step."""
    total = 0.0
    for cap, penalty in steps:
        if load > cap:
            total += penalty * (load - cap)
    return total


def evaluate_objective(
    model: Model,
    assignment: Collection[tuple[str, str]],
    *,
    coauthor_terms: str = "active",
) -> ObjectiveBreakdown:
    """Recompute the decomposed objective for an assignment from scratch.

    Raises :class:`HardConstraintViolation` naming the broken constraint if
    the assignment is infeasible. ``coauthor_terms`` selects whether the
    model's active coauthor set or the full master list is charged.
    """
    if coauthor_terms not in ("active", "master"):
        raise ValueError(f"coauthor_terms must be 'active' or 'master', got {coauthor_terms!r}")
    assigned = set(assignment)
    for pair in assigned:
        if pair not in model.var_index:
            raise HardConstraintViolation(
                f"assignment uses non-candidate pair {pair} (COI or sparsification exclusion)"
            )
    for pair in model.fixed_pairs:
        if pair not in assigned:
            raise HardConstraintViolation(f"fixed pair {pair} is unassigned")

    by_paper: dict[str, list[str]] = {paper: [] for paper in model.papers}
    load: dict[str, int] = {}
    match = 0.0
    for paper_id, reviewer_id in assigned:
        by_paper[paper_id].append(reviewer_id)
        load[reviewer_id] = load.get(reviewer_id, 0) + 1
        match += model.variables[model.var_index[(paper_id, reviewer_id)]].score

    for paper_id, reviewers in by_paper.items():
        counts = {"pc": 0, "spc": 0, "ac": 0}
        for reviewer_id in reviewers:
            counts[model.roles[reviewer_id]] += 1
        for role, count in counts.items():
            if count > model.paper_quota[paper_id][role]:
                raise HardConstraintViolation(
                    f"paper count: paper {paper_id!r} has {count} {role} reviewers "
                    f"(quota {model.paper_quota[paper_id][role]})"
                )

    for reviewer_id, count in load.items():
        limit = model.pc_load_limit.get(reviewer_id)
        if limit is not None and count > limit:
            raise HardConstraintViolation(
                f"reviewer load: {reviewer_id!r} assigned {count} > {limit}"
            )

    capacity = 0.0
    for reviewer_id, steps in model.capacity_steps.items():
        capacity += capacity_penalty(load.get(reviewer_id, 0), steps)

    seniority = 0.0
    params = model.params
    for paper_id, reviewers in by_paper.items():
        sen_sum = sum(
            model.seniority[r] for r in reviewers if model.roles[r] == "pc"
        )
        if sen_sum < params.min_seniority:
            raise HardConstraintViolation(
                f"min seniority: paper {paper_id!r} has seniority {sen_sum} "
                f"< {params.min_seniority}"
            )
        seniority += params.reward_sen * min(sen_sum, params.target_seniority)

    region = 0.0
    for paper_id, reviewers in by_paper.items():
        committee_regions = {
            model.regions[r] for r in reviewers if model.roles[r] in ("pc", "spc")
        }
        region += params.reward_reg * len(committee_regions)

    co_pairs = model.co_master if coauthor_terms == "master" else model.active_co_pairs()
    coauthor = 0.0
    for pair, distance in co_pairs.items():
        a, b = sorted(pair)
        if any(a in reviewers and b in reviewers for reviewers in by_paper.values()):
            coauthor += params.p_co.get(distance, 0.0)

    cycle = 0.0
    if params.cycle_mode == "per_tuple":
        for j, j2, i, i2 in model.cycles:
            if (i, j) in assigned:
                cycle += params.p_cy
    else:
        realized: set[frozenset[str]] = set()
        for j, j2, i, i2 in model.cycles:
            if (i, j) in assigned and (i2, j2) in assigned:
                realized.add(frozenset((j, j2)))
        cycle = params.p_cy * len(realized)

    return ObjectiveBreakdown(
        match=match,
        capacity=capacity,
        seniority=seniority,
        coauthor=coauthor,
        region=region,
        cycle=cycle,
    )


def model_stats(model: Model) -> dict[str, int]:
    """Counts of variables and constraint rows per family."""
    counts_by_role = {"pc": 0, "spc": 0, "ac": 0}
    for var in model.variables:
        counts_by_role[model.roles[var.reviewer_id]] += 1
    by_paper: dict[str, set[str]] = {}
    for var in model.variables:
        if model.roles[var.reviewer_id] in ("pc", "spc"):
            by_paper.setdefault(var.paper_id, set()).add(var.reviewer_id)
    active = model.active_co_pairs()
    cad_rows = 0
    for pair in active:
        for paper_id, reviewers in by_paper.items():
            if pair <= reviewers:
                cad_rows += 1
    region_rows = sum(
        len({model.regions[r] for r in reviewers})
        for paper_id, reviewers in by_paper.items()
    )
    return {
        "variables": len(model.variables),
        "variables_pc": counts_by_role["pc"],
        "variables_spc": counts_by_role["spc"],
        "variables_ac": counts_by_role["ac"],
        "fixed_variables": len(model.fixed_pairs),
        "paper_quota_rows": 3 * len(model.papers),
        "pc_load_rows": len(model.pc_load_limit),
        "capacity_rows": sum(len(steps) for steps in model.capacity_steps.values()),
        "seniority_rows": len(model.papers),
        "coauthor_pairs_master": len(model.co_master),
        "coauthor_pairs_active": len(active),
        "coauthor_rows": cad_rows,
        "region_rows": region_rows,
        "cycle_tuples": len(model.cycles),
    }
