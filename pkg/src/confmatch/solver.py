"""Solve the assignment model with in-repo backends.

Two backends share one incremental objective tracker: an exact depth-first
search over per-paper reviewer subsets with admissible-bound pruning (the
oracle), and a greedy constructor followed by best-improvement local search
(the scalable substitute). On top of either backend,
``solve_with_row_generation`` runs the lazy coauthor-constraint loop: solve
without coauthor terms, add the violated ones, repeat. The objective of the
last solve (which excludes penalties from never-generated terms) is an upper
bound on the optimum, because generated terms only ever penalize.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Collection, Mapping, Sequence

from .bids import FilteredBids
from .coi import ConflictSet
from .corpus import Corpus
from .model import (
    HardConstraintViolation,
    InfeasibleModelError,
    MatchParams,
    Model,
    ModelError,
    ObjectiveBreakdown,
    build_model,
    capacity_penalty,
)
from .scoring import ScoreMatrix

DEFAULT_COMBO_LIMIT = 2 ** 22
IMPROVE_EPS = 1e-12


class ExhaustiveLimitError(ModelError):
    """The instance is too large for the exact backend's enumeration budget."""


@dataclass(frozen=True)
class IterationStat:
    index: int
    violations_added: int
    objective: float
    wall_time: float


@dataclass
class SolveReport:
    assignment: tuple[tuple[str, str], ...]
    objective: ObjectiveBreakdown
    upper_bound: float
    status: str
    iterations: list[IterationStat] = field(default_factory=list)
    seed: int | None = None

    def to_json_dict(self, include_timing: bool = False) -> dict:
        # Wall times are excluded by default so serialized reports are
        # byte-identical across reruns.
        iterations = [
            {
                "index": stat.index,
                "violations_added": stat.violations_added,
                "objective": stat.objective,
                **({"wall_time": stat.wall_time} if include_timing else {}),
            }
            for stat in self.iterations
        ]
        return {
            "assignment": [list(pair) for pair in self.assignment],
            "objective": self.objective.as_dict(),
            "upper_bound": self.upper_bound,
            "status": self.status,
            "iterations": iterations,
            "seed": self.seed,
        }


class ObjectiveTracker:
    """Incrementally maintained decomposed objective over a partial assignment.

    This is the solvers' working state; ``model.evaluate_objective`` is the
    independent from-scratch recomputation used to check it.
    """

    def __init__(self, model: Model, co_pairs: Mapping[frozenset[str], int] | None = None):
        self.model = model
        params = model.params
        self.params = params
        self.co_pairs = model.active_co_pairs() if co_pairs is None else dict(co_pairs)

        self.assigned: set[tuple[str, str]] = set()
        self.role_count: dict[str, dict[str, int]] = {
            paper: {"pc": 0, "spc": 0, "ac": 0} for paper in model.papers
        }
        self.paper_reviewers: dict[str, set[str]] = {paper: set() for paper in model.papers}
        self.load: dict[str, int] = {}
        self.sen_sum: dict[str, int] = {paper: 0 for paper in model.papers}
        self.region_count: dict[str, dict[str, int]] = {paper: {} for paper in model.papers}
        self.pair_shared: dict[frozenset[str], int] = {}
        # reviewer -> [(other reviewer, pair key, distance)] for charged pairs
        self.co_neighbors: dict[str, list[tuple[str, frozenset[str], int]]] = {}
        for pair, distance in self.co_pairs.items():
            a, b = sorted(pair)
            self.co_neighbors.setdefault(a, []).append((b, pair, distance))
            self.co_neighbors.setdefault(b, []).append((a, pair, distance))

        # per-tuple mode: (paper, reviewer) -> number of cycle tuples it heads
        self.cycle_weight: dict[tuple[str, str], int] = {}
        # per-pair mode: (paper, reviewer) -> [(pair key, partner half)]
        self.cycle_halves: dict[tuple[str, str], list[tuple[frozenset[str], tuple[str, str]]]] = {}
        self.cycle_realized: dict[frozenset[str], int] = {}
        for j, j2, i, i2 in model.cycles:
            if (i, j) not in model.var_index:
                continue
            if params.cycle_mode == "per_tuple":
                key = (i, j)
                self.cycle_weight[key] = self.cycle_weight.get(key, 0) + 1
            else:
                self.cycle_halves.setdefault((i, j), []).append(
                    (frozenset((j, j2)), (i2, j2))
                )

        self.match = 0.0
        self.capacity = 0.0
        self.seniority = 0.0
        self.coauthor = 0.0
        self.region = 0.0
        self.cycle = 0.0

    @property
    def total(self) -> float:
        return (self.match + self.capacity + self.seniority
                + self.coauthor + self.region + self.cycle)

    def breakdown(self) -> ObjectiveBreakdown:
        return ObjectiveBreakdown(
            match=self.match,
            capacity=self.capacity,
            seniority=self.seniority,
            coauthor=self.coauthor,
            region=self.region,
            cycle=self.cycle,
        )

    def can_add(self, paper_id: str, reviewer_id: str) -> bool:
        pair = (paper_id, reviewer_id)
        if pair in self.assigned or pair not in self.model.var_index:
            return False
        role = self.model.roles[reviewer_id]
        if self.role_count[paper_id][role] >= self.model.paper_quota[paper_id][role]:
            return False
        limit = self.model.pc_load_limit.get(reviewer_id)
        if limit is not None and self.load.get(reviewer_id, 0) >= limit:
            return False
        return True

    def add(self, paper_id: str, reviewer_id: str) -> float:
        pair = (paper_id, reviewer_id)
        if not self.can_add(paper_id, reviewer_id):
            raise HardConstraintViolation(f"cannot add {pair}")
        model, params = self.model, self.params
        role = model.roles[reviewer_id]
        delta = model.variables[model.var_index[pair]].score
        self.match += delta

        load = self.load.get(reviewer_id, 0)
        steps = model.capacity_steps.get(reviewer_id)
        if steps is not None:
            cap_delta = capacity_penalty(load + 1, steps) - capacity_penalty(load, steps)
            self.capacity += cap_delta
            delta += cap_delta
        self.load[reviewer_id] = load + 1

        if role == "pc":
            old = self.sen_sum[paper_id]
            new = old + model.seniority[reviewer_id]
            sen_delta = params.reward_sen * (
                min(new, params.target_seniority) - min(old, params.target_seniority)
            )
            self.seniority += sen_delta
            delta += sen_delta
            self.sen_sum[paper_id] = new

        if role in ("pc", "spc"):
            region = model.regions[reviewer_id]
            counts = self.region_count[paper_id]
            if counts.get(region, 0) == 0:
                self.region += params.reward_reg
                delta += params.reward_reg
            counts[region] = counts.get(region, 0) + 1

            for other, pair_key, distance in self.co_neighbors.get(reviewer_id, ()):
                if other in self.paper_reviewers[paper_id]:
                    shared = self.pair_shared.get(pair_key, 0)
                    if shared == 0:
                        penalty = params.p_co.get(distance, 0.0)
                        self.coauthor += penalty
                        delta += penalty
                    self.pair_shared[pair_key] = shared + 1

        if params.cycle_mode == "per_tuple":
            weight = self.cycle_weight.get(pair, 0)
            if weight:
                cyc_delta = params.p_cy * weight
                self.cycle += cyc_delta
                delta += cyc_delta
        else:
            for pair_key, partner in self.cycle_halves.get(pair, ()):
                if partner in self.assigned:
                    realized = self.cycle_realized.get(pair_key, 0)
                    if realized == 0:
                        self.cycle += params.p_cy
                        delta += params.p_cy
                    self.cycle_realized[pair_key] = realized + 1

        self.assigned.add(pair)
        self.role_count[paper_id][role] += 1
        self.paper_reviewers[paper_id].add(reviewer_id)
        return delta

    def remove(self, paper_id: str, reviewer_id: str) -> float:
        pair = (paper_id, reviewer_id)
        if pair not in self.assigned:
            raise HardConstraintViolation(f"cannot remove unassigned {pair}")
        model, params = self.model, self.params
        role = model.roles[reviewer_id]
        self.assigned.remove(pair)
        self.role_count[paper_id][role] -= 1
        self.paper_reviewers[paper_id].remove(reviewer_id)

        delta = -model.variables[model.var_index[pair]].score
        self.match += delta

        load = self.load[reviewer_id]
        steps = model.capacity_steps.get(reviewer_id)
        if steps is not None:
            cap_delta = capacity_penalty(load - 1, steps) - capacity_penalty(load, steps)
            self.capacity += cap_delta
            delta += cap_delta
        self.load[reviewer_id] = load - 1

        if role == "pc":
            old = self.sen_sum[paper_id]
            new = old - model.seniority[reviewer_id]
            sen_delta = params.reward_sen * (
                min(new, params.target_seniority) - min(old, params.target_seniority)
            )
            self.seniority += sen_delta
            delta += sen_delta
            self.sen_sum[paper_id] = new

        if role in ("pc", "spc"):
            region = model.regions[reviewer_id]
            counts = self.region_count[paper_id]
            counts[region] -= 1
            if counts[region] == 0:
                del counts[region]
                self.region -= params.reward_reg
                delta -= params.reward_reg

            for other, pair_key, distance in self.co_neighbors.get(reviewer_id, ()):
                if other in self.paper_reviewers[paper_id]:
                    shared = self.pair_shared[pair_key]
                    if shared == 1:
                        penalty = params.p_co.get(distance, 0.0)
                        self.coauthor -= penalty
                        delta -= penalty
                        del self.pair_shared[pair_key]
                    else:
                        self.pair_shared[pair_key] = shared - 1

        if params.cycle_mode == "per_tuple":
            weight = self.cycle_weight.get(pair, 0)
            if weight:
                cyc_delta = params.p_cy * weight
                self.cycle -= cyc_delta
                delta -= cyc_delta
        else:
            for pair_key, partner in self.cycle_halves.get(pair, ()):
                if partner in self.assigned:
                    realized = self.cycle_realized[pair_key]
                    if realized == 1:
                        self.cycle -= params.p_cy
                        delta -= params.p_cy
                        del self.cycle_realized[pair_key]
                    else:
                        self.cycle_realized[pair_key] = realized - 1
        return delta


def replay_breakdown(
    model: Model,
    assignment: Collection[tuple[str, str]],
    co_pairs: Mapping[frozenset[str], int] | None = None,
) -> ObjectiveBreakdown:
    """Breakdown of an assignment by replaying it through a fresh tracker."""
    tracker = ObjectiveTracker(model, co_pairs=co_pairs)
    for paper_id, reviewer_id in sorted(assignment):
        tracker.add(paper_id, reviewer_id)
    return tracker.breakdown()


def _paper_combos(model: Model) -> tuple[list[str], dict[str, list[tuple[tuple[str, ...], float]]]]:
    """Per-paper assignment choices (reviewer tuples) with standalone gains.

    A combo's standalone gain counts its scores plus the seniority and region
    rewards it would earn on its own; penalties are ignored, so summing the
    per-paper maxima yields an admissible upper bound for the search.
    """
    params = model.params
    fixed_by_paper: dict[str, dict[str, list[str]]] = {
        paper: {"pc": [], "spc": [], "ac": []} for paper in model.papers
    }
    for paper_id, reviewer_id in sorted(model.fixed_pairs):
        fixed_by_paper[paper_id][model.roles[reviewer_id]].append(reviewer_id)

    candidates = model.candidates_by_paper()
    combos: dict[str, list[tuple[tuple[str, ...], float]]] = {}
    for paper_id in model.papers:
        role_choices: list[list[tuple[str, ...]]] = []
        for role in ("pc", "spc", "ac"):
            fixed = fixed_by_paper[paper_id][role]
            quota = model.paper_quota[paper_id][role]
            if len(fixed) > quota:
                raise InfeasibleModelError(
                    f"paper {paper_id!r} has {len(fixed)} fixed {role} reviewers "
                    f"over quota {quota}"
                )
            free = sorted(
                (v.reviewer_id for v in candidates[paper_id][role]
                 if v.reviewer_id not in fixed),
                key=lambda r: (-model.variables[model.var_index[(paper_id, r)]].score, r),
            )
            choices = []
            for size in range(0, quota - len(fixed) + 1):
                for subset in itertools.combinations(free, size):
                    choices.append(tuple(sorted(fixed + list(subset))))
            role_choices.append(choices)

        paper_combos: list[tuple[tuple[str, ...], float]] = []
        for pc_set, spc_set, ac_set in itertools.product(*role_choices):
            reviewers = pc_set + spc_set + ac_set
            sen_sum = sum(model.seniority[r] for r in pc_set)
            if sen_sum < params.min_seniority:
                continue
            gain = sum(
                model.variables[model.var_index[(paper_id, r)]].score for r in reviewers
            )
            gain += params.reward_sen * min(sen_sum, params.target_seniority)
            gain += params.reward_reg * len({model.regions[r] for r in pc_set + spc_set})
            paper_combos.append((reviewers, gain))
        if not paper_combos:
            raise InfeasibleModelError(
                f"paper {paper_id!r} has no feasible reviewer subset"
            )
        paper_combos.sort(key=lambda item: (-item[1], item[0]))
        combos[paper_id] = paper_combos
    return list(model.papers), combos


def solve_exact(model: Model, *, combo_limit: int | None = DEFAULT_COMBO_LIMIT) -> SolveReport:
    """Provably optimal solve by depth-first search over per-paper subsets.

    Hard constraints propagate through the tracker; branches whose admissible
    bound cannot beat the incumbent are pruned. Among ties the first
    assignment in the deterministic enumeration order wins. Instances whose
    combination count exceeds ``combo_limit`` are rejected loudly.
    """
    start = time.perf_counter()
    papers, combos = _paper_combos(model)

    if combo_limit is not None:
        estimate = 1
        for paper_id in papers:
            estimate *= len(combos[paper_id])
            if estimate > combo_limit:
                raise ExhaustiveLimitError(
                    f"instance needs > {combo_limit} combinations; "
                    "raise combo_limit or use the heuristic backend"
                )

    suffix_max = [0.0] * (len(papers) + 1)
    for depth in range(len(papers) - 1, -1, -1):
        best_gain = combos[papers[depth]][0][1] if combos[papers[depth]] else 0.0
        suffix_max[depth] = suffix_max[depth + 1] + best_gain

    tracker = ObjectiveTracker(model)
    best_total = float("-inf")
    best_state: tuple[tuple[tuple[str, str], ...], ObjectiveBreakdown] | None = None

    def dfs(depth: int):
        nonlocal best_total, best_state
        if depth == len(papers):
            total = tracker.total
            if total > best_total + IMPROVE_EPS:
                best_total = total
                best_state = (tuple(sorted(tracker.assigned)), tracker.breakdown())
            return
        paper_id = papers[depth]
        for reviewers, _gain in combos[paper_id]:
            added: list[str] = []
            feasible = True
            for reviewer_id in reviewers:
                if not tracker.can_add(paper_id, reviewer_id):
                    feasible = False
                    break
                tracker.add(paper_id, reviewer_id)
                added.append(reviewer_id)
            if feasible:
                bound = tracker.total + suffix_max[depth + 1]
                if bound > best_total + IMPROVE_EPS:
                    dfs(depth + 1)
            for reviewer_id in reversed(added):
                tracker.remove(paper_id, reviewer_id)

    dfs(0)
    if best_state is None:
        raise InfeasibleModelError("no feasible assignment exists")
    assignment, breakdown = best_state
    elapsed = time.perf_counter() - start
    return SolveReport(
        assignment=assignment,
        objective=breakdown,
        upper_bound=breakdown.total,
        status="optimal",
        iterations=[IterationStat(0, 0, breakdown.total, elapsed)],
    )


def _greedy_construct(tracker: ObjectiveTracker) -> None:
    model = tracker.model
    top_score: dict[str, float] = {paper: 0.0 for paper in model.papers}
    for var in model.variables:
        top_score[var.paper_id] = max(top_score[var.paper_id], var.score)
    order = sorted(model.papers, key=lambda p: (-top_score[p], p))

    candidates = model.candidates_by_paper()
    for paper_id, reviewer_id in sorted(model.fixed_pairs):
        tracker.add(paper_id, reviewer_id)

    for paper_id in order:
        scan = [
            v.reviewer_id
            for role in ("pc", "spc", "ac")
            for v in sorted(candidates[paper_id][role], key=lambda v: (-v.score, v.reviewer_id))
        ]
        while True:
            best_delta, best_reviewer = IMPROVE_EPS, None
            for reviewer_id in scan:
                if not tracker.can_add(paper_id, reviewer_id):
                    continue
                delta = tracker.add(paper_id, reviewer_id)
                tracker.remove(paper_id, reviewer_id)
                if delta > best_delta:
                    best_delta, best_reviewer = delta, reviewer_id
            if best_reviewer is None:
                break
            tracker.add(paper_id, best_reviewer)


def _local_search(
    tracker: ObjectiveTracker,
    max_rounds: int,
    deadline: float | None,
) -> str:
    """Best-improvement passes over add / drop / replace / swap moves."""
    model = tracker.model
    candidates = model.candidates_by_paper()

    def trial(removals, additions) -> float | None:
        delta = 0.0
        done_rm, done_add = [], []
        ok = True
        for pair in removals:
            delta += tracker.remove(*pair)
            done_rm.append(pair)
        for pair in additions:
            if not tracker.can_add(*pair):
                ok = False
                break
            delta += tracker.add(*pair)
            done_add.append(pair)
        for pair in reversed(done_add):
            tracker.remove(*pair)
        for pair in reversed(done_rm):
            tracker.add(*pair)
        return delta if ok else None

    for _ in range(max_rounds):
        if deadline is not None and time.perf_counter() > deadline:
            return "time_limit"
        best_delta = IMPROVE_EPS
        best_move: tuple[tuple, tuple] | None = None

        assigned = sorted(tracker.assigned)
        removable = [p for p in assigned if p not in model.fixed_pairs]

        moves: list[tuple[tuple, tuple]] = []
        for var in model.variables:
            pair = (var.paper_id, var.reviewer_id)
            if pair not in tracker.assigned and tracker.can_add(*pair):
                moves.append(((), (pair,)))
        for pair in removable:
            moves.append(((pair,), ()))
        for paper_id, reviewer_id in removable:
            role = model.roles[reviewer_id]
            for var in candidates[paper_id][role]:
                other = (paper_id, var.reviewer_id)
                if var.reviewer_id != reviewer_id and other not in tracker.assigned:
                    moves.append((((paper_id, reviewer_id),), (other,)))
        for n, (p1, r1) in enumerate(removable):
            for p2, r2 in removable[n + 1:]:
                if p1 == p2 or r1 == r2:
                    continue
                if model.roles[r1] != model.roles[r2]:
                    continue
                if (p1, r2) in model.var_index and (p2, r1) in model.var_index \
                        and (p1, r2) not in tracker.assigned \
                        and (p2, r1) not in tracker.assigned:
                    moves.append((((p1, r1), (p2, r2)), ((p1, r2), (p2, r1))))
        # relocate a reviewer to another paper, optionally backfilling the
        # freed slot with a same-role candidate
        for p1, r1 in removable:
            role = model.roles[r1]
            for p2 in model.papers:
                if p2 == p1 or (p2, r1) not in model.var_index \
                        or (p2, r1) in tracker.assigned:
                    continue
                moves.append((((p1, r1),), ((p2, r1),)))
                for var in candidates[p1][role]:
                    filler = (p1, var.reviewer_id)
                    if var.reviewer_id != r1 and filler not in tracker.assigned:
                        moves.append((((p1, r1),), ((p2, r1), filler)))

        for removals, additions in moves:
            delta = trial(removals, additions)
            if delta is not None and delta > best_delta:
                best_delta = delta
                best_move = (removals, additions)

        if best_move is None:
            return "gap_reached"
        removals, additions = best_move
        for pair in removals:
            tracker.remove(*pair)
        for pair in additions:
            tracker.add(*pair)
    return "iteration_limit"


def solve_heuristic(
    model: Model,
    *,
    seed: int = 0,
    max_rounds: int = 10_000,
    time_limit: float | None = None,
) -> SolveReport:
    """Greedy construction plus best-improvement local search.

    Always returns a feasible assignment (quotas are inequalities, so papers
    may stay under-assigned). Deterministic: the scan order is fixed, so the
    result does not depend on ``seed``, which is recorded for provenance.
    """
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit
    tracker = ObjectiveTracker(model)
    _greedy_construct(tracker)
    if model.params.min_seniority > 0:
        for paper_id in model.papers:
            if tracker.sen_sum[paper_id] < model.params.min_seniority:
                raise InfeasibleModelError(
                    f"paper {paper_id!r} cannot reach min seniority "
                    f"{model.params.min_seniority}"
                )
    status = _local_search(tracker, max_rounds, deadline)
    breakdown = tracker.breakdown()
    elapsed = time.perf_counter() - start
    return SolveReport(
        assignment=tuple(sorted(tracker.assigned)),
        objective=breakdown,
        upper_bound=breakdown.total,
        status=status,
        iterations=[IterationStat(0, 0, breakdown.total, elapsed)],
        seed=seed,
    )


BackendFn = Callable[[Model], SolveReport]


def resolve_backend(
    backend: str | BackendFn,
    *,
    seed: int = 0,
    combo_limit: int | None = DEFAULT_COMBO_LIMIT,
) -> BackendFn:
    if callable(backend):
        return backend
    if backend == "exact":
        return lambda m: solve_exact(m, combo_limit=combo_limit)
    if backend == "heuristic":
        return lambda m: solve_heuristic(m, seed=seed)
    raise ValueError(f"unknown backend {backend!r}")


def find_coauthor_violations(
    model: Model,
    assignment: Collection[tuple[str, str]],
    active: Collection[frozenset[str]],
) -> list[frozenset[str]]:
    """Master-list coauthor pairs assigned to a common paper but not yet active."""
    active_set = set(active)
    by_paper: dict[str, list[str]] = {}
    for paper_id, reviewer_id in assignment:
        if model.roles[reviewer_id] in ("pc", "spc"):
            by_paper.setdefault(paper_id, []).append(reviewer_id)
    violations: set[frozenset[str]] = set()
    for reviewers in by_paper.values():
        ordered = sorted(reviewers)
        for n, a in enumerate(ordered):
            for b in ordered[n + 1:]:
                pair = frozenset((a, b))
                if pair in model.co_master and pair not in active_set:
                    violations.add(pair)
    return sorted(violations, key=lambda pair: sorted(pair))


def solve_with_row_generation(
    model: Model,
    backend: str | BackendFn = "exact",
    max_iters: int = 10,
    *,
    mip_gap_abs: float | None = None,
    seed: int = 0,
    combo_limit: int | None = DEFAULT_COMBO_LIMIT,
    time_limit: float | None = None,
) -> SolveReport:
    """Lazy generation of violated coauthor terms around repeated solves.

    The model must have been built with ``defer_coauthor_terms=True``. The
    report's objective charges every master-list penalty (the true value);
    ``upper_bound`` is the last solve's reported objective, which excludes
    penalties from terms never generated.
    """
    if model.co_active is None:
        raise ModelError("row generation needs a model built with defer_coauthor_terms=True")
    solve = resolve_backend(backend, seed=seed, combo_limit=combo_limit)
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit

    active: set[frozenset[str]] = set(model.co_active)
    iterations: list[IterationStat] = []
    status = "iteration_limit"
    report = None
    for index in range(max_iters + 1):
        current = model.with_active_co_pairs(active)
        report = solve(current)
        new = find_coauthor_violations(model, report.assignment, active)
        iterations.append(IterationStat(
            index=index,
            violations_added=len(new),
            objective=report.objective.total,
            wall_time=time.perf_counter() - start,
        ))
        if not new:
            status = "optimal" if report.status == "optimal" else "gap_reached"
            break
        if mip_gap_abs is not None:
            true_total = replay_breakdown(model, report.assignment, co_pairs=model.co_master).total
            if report.objective.total - true_total <= mip_gap_abs:
                status = "gap_reached"
                break
        if index == max_iters:
            status = "iteration_limit"
            break
        if deadline is not None and time.perf_counter() > deadline:
            status = "time_limit"
            break
        active.update(new)

    assert report is not None
    true_breakdown = replay_breakdown(model, report.assignment, co_pairs=model.co_master)
    return SolveReport(
        assignment=report.assignment,
        objective=true_breakdown,
        upper_bound=report.objective.total,
        status=status,
        iterations=iterations,
        seed=seed,
    )


def solve_multiphase(
    corpus: Corpus,
    scores: ScoreMatrix,
    conflicts: ConflictSet,
    filtered_bids: FilteredBids,
    params: MatchParams,
    phases: Sequence[Mapping[str, int] | tuple[int, int, int]],
    backend: str | BackendFn = "exact",
    *,
    seed: int = 0,
    combo_limit: int | None = DEFAULT_COMBO_LIMIT,
) -> list[SolveReport]:
    """Decompose the matching into sequential phases that fix prior picks.

    Phase settings must sum to the single-phase quotas. Fixed assignments
    keep consuming the same reviewer budgets (capacities are not raised), so
    the combined assignment stays feasible, and thus weakly worse, for the
    single-phase problem.
    """
    def gamma_of(setting, role: str) -> int:
        if isinstance(setting, Mapping):
            return int(setting.get(f"gamma_{role}", setting.get(role, 0)))
        index = {"pc": 0, "spc": 1, "ac": 2}[role]
        return int(setting[index])

    for role in ("pc", "spc", "ac"):
        total = sum(gamma_of(s, role) for s in phases)
        if total != params.gamma(role):
            raise ValueError(
                f"phase {role} quotas sum to {total}, expected {params.gamma(role)}"
            )

    solve = resolve_backend(backend, seed=seed, combo_limit=combo_limit)
    reports: list[SolveReport] = []
    fixed: tuple[tuple[str, str], ...] = ()
    cumulative = {role: 0 for role in ("pc", "spc", "ac")}
    for setting in phases:
        for role in cumulative:
            cumulative[role] += gamma_of(setting, role)
        overrides = {
            paper_id: dict(cumulative) for paper_id in corpus.papers
        }
        phase_model = build_model(
            corpus, scores, conflicts, filtered_bids, params,
            fixed=fixed,
            paper_quota_overrides=overrides,
            raise_capacity_for_fixed=False,
        )
        report = solve(phase_model)
        reports.append(report)
        fixed = report.assignment
    return reports
