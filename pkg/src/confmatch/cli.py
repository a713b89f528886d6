"""Command-line pipeline runner.

One flat JSON config file with namespaced keys (``match.*``, ``policy.*``,
``sim.*``, ``coi.*``, ``paths.*``) drives every subcommand; command-line
flags override file values, which override defaults. Unknown config keys are
rejected. Exit codes: 1 schema violation, 2 dangling reference, 3 config
error, 4 other pipeline failure.

Outputs never embed timestamps, so a rerun with the same config and seed
produces byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bids as bids_mod
from . import coi as coi_mod
from .corpus import CorpusError, DanglingReferenceError, SchemaError, load_corpus
from .lp_format import export_lp
from .model import MatchParams, ModelError, build_model
from .phases import PhasePolicy, Review, phase1_decide
from .scoring import build_score_matrix, fit_normalizers_from_annotations, identity_normalizers
from .simlab import (
    GenConfig,
    NoiseModel,
    ReviewedPaper,
    false_negative_rate,
    gibbs_estimate,
    generate_conference,
    match_metrics,
    mean_gap_over_seeds,
    missing_data_stability,
    simulate_reviews,
)
from .solver import resolve_backend, solve_with_row_generation
from .corpus import save_corpus

EXIT_SCHEMA = 1
EXIT_REFERENCE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4

DEFAULTS: dict[str, object] = {
    "match.gamma_pc": 2,
    "match.gamma_spc": 1,
    "match.gamma_ac": 1,
    "match.pc_capacity": 3,
    "match.spc_capacity_levels": [[8, -0.05], [12, -0.05], [16, -0.05], [20, -0.05], [24, -0.5]],
    "match.ac_capacity_levels": [[20, -0.05], [30, -0.05], [40, -0.05], [50, -0.05], [60, -0.5]],
    "match.reward_sen": 4.0,
    "match.target_seniority": 4,
    "match.min_seniority": 0,
    "match.p_co_1": -0.3,
    "match.p_co_2": -0.2,
    "match.reward_reg": 0.1,
    "match.p_cy": -0.05,
    "match.k": 50,
    "match.score_threshold": 0.15,
    "match.mip_gap_abs": 20.0,
    "match.cycle_mode": "per_tuple",
    "policy.reject_score_threshold": 4.5,
    "policy.reject_confidence_min": 3,
    "policy.required_phase1_reviews": 2,
    "policy.total_reviews_min": 4,
    "policy.fasttrack_reviews_min": 3,
    "sim.mu_s": 5.0,
    "sim.sigma_s": 1.0,
    "sim.sigma": 1.3,
    "sim.gamma_alpha": 1.0,
    "sim.gamma_beta": 1.0,
    "sim.papers": 6723,
    "sim.seeds": 20,
    "sim.gibbs_papers": 6000,
    "sim.gibbs_reviews": 3,
    "sim.iterations": 2000,
    "sim.burn_in": 500,
    "sim.growth_factor": 2.0,
    "sim.seed_keyword": "",
    "coi.current_year": None,
    "paths.data": "",
}


class ConfigError(Exception):
    pass


class RunConfig:
    """Flat, validated configuration with defaults baked in."""

    def __init__(self, values: dict[str, object] | None = None):
        self.values = dict(DEFAULTS)
        if values:
            for key, value in values.items():
                if key not in DEFAULTS:
                    raise ConfigError(f"unknown config key {key!r}")
                self.values[key] = value

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls(raw)

    def to_dict(self) -> dict[str, object]:
        return {key: self.values[key] for key in sorted(self.values)}

    def match_params(self) -> MatchParams:
        v = self.values
        try:
            return MatchParams(
                gamma_pc=int(v["match.gamma_pc"]),
                gamma_spc=int(v["match.gamma_spc"]),
                gamma_ac=int(v["match.gamma_ac"]),
                pc_capacity=int(v["match.pc_capacity"]),
                capacity_levels={
                    "spc": tuple((int(c), float(p)) for c, p in v["match.spc_capacity_levels"]),
                    "ac": tuple((int(c), float(p)) for c, p in v["match.ac_capacity_levels"]),
                },
                reward_sen=float(v["match.reward_sen"]),
                target_seniority=int(v["match.target_seniority"]),
                min_seniority=int(v["match.min_seniority"]),
                p_co={1: float(v["match.p_co_1"]), 2: float(v["match.p_co_2"])},
                reward_reg=float(v["match.reward_reg"]),
                p_cy=float(v["match.p_cy"]),
                k=int(v["match.k"]),
                score_threshold=float(v["match.score_threshold"]),
                mip_gap_abs=float(v["match.mip_gap_abs"]),
                cycle_mode=str(v["match.cycle_mode"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad match parameters: {exc}")

    def policy(self) -> PhasePolicy:
        v = self.values
        return PhasePolicy(
            reject_score_threshold=float(v["policy.reject_score_threshold"]),
            reject_confidence_min=int(v["policy.reject_confidence_min"]),
            required_phase1_reviews=int(v["policy.required_phase1_reviews"]),
            total_reviews_min=int(v["policy.total_reviews_min"]),
            fasttrack_reviews_min=int(v["policy.fasttrack_reviews_min"]),
        )

    def noise(self) -> NoiseModel:
        v = self.values
        return NoiseModel(
            mu_s=float(v["sim.mu_s"]),
            sigma_s=float(v["sim.sigma_s"]),
            sigma=float(v["sim.sigma"]),
            gamma_alpha=float(v["sim.gamma_alpha"]),
            gamma_beta=float(v["sim.gamma_beta"]),
        )

    def current_year(self) -> int:
        year = self.values["coi.current_year"]
        if year is None:
            raise ConfigError("coi.current_year is required (set it in the config or --current-year)")
        return int(year)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _load_reviews(path: Path) -> dict[str, list[Review]]:
    reviews: dict[str, list[Review]] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            review = Review(
                paper_id=row["paper_id"].strip(),
                reviewer_id=row["reviewer_id"].strip(),
                score=float(row["score"]),
                confidence=int(row["confidence"]),
                phase=int(row.get("phase", 1) or 1),
                pre_rebuttal=(row.get("pre_rebuttal", "1").strip() not in ("0", "false", "False")),
            )
            reviews.setdefault(review.paper_id, []).append(review)
    return reviews


def _load_suppressions(path: Path) -> list[tuple[str, str, str]]:
    out = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            out.append((row["reviewer_id"].strip(), row["kind"].strip(), row["value"].strip()))
    return out


def _pipeline_to_scores(corpus, config: RunConfig, suppress_file: str | None, annotations: str | None):
    suppressed = _load_suppressions(Path(suppress_file)) if suppress_file else ()
    conflicts = coi_mod.infer_conflicts(corpus, config.current_year(), suppressed)
    filtered = bids_mod.filter_bids(corpus)
    if annotations:
        rows = []
        with Path(annotations).open(newline="", encoding="utf-8") as handle:
            for row in csv.DictReader(handle):
                rows.append((row["component"].strip(), float(row["raw"]), float(row["y"])))
        normalizers = fit_normalizers_from_annotations(rows)
    else:
        normalizers = identity_normalizers()
    scores = build_score_matrix(corpus, conflicts, filtered, normalizers)
    return conflicts, filtered, scores


def _write_conflict_outputs(out_dir: Path, corpus, conflicts, suspicion) -> None:
    _write_csv(
        out_dir / "conflicts.csv",
        ["paper_id", "reviewer_id", "reason"],
        [[p, r, reason] for (p, r), reason in sorted(conflicts.reasons.items())],
    )
    _write_csv(
        out_dir / "suspicion_report.csv",
        ["person_id", "criteria"],
        [[person, ";".join(sorted(criteria))] for person, criteria in sorted(suspicion.criteria.items())],
    )


def _write_bid_outputs(out_dir: Path, filtered) -> None:
    _write_csv(
        out_dir / "filtered_bids.csv",
        ["reviewer_id", "paper_id", "level"],
        [[r, p, level] for (r, p), level in sorted(filtered.bids.items())],
    )
    _write_csv(
        out_dir / "bid_audit.csv",
        ["reviewer_id", "action", "detail"],
        [[a.reviewer_id, a.action, a.detail] for a in filtered.audit],
    )


def _write_score_outputs(out_dir: Path, scores) -> None:
    _write_csv(
        out_dir / "scores.csv",
        ["paper_id", "reviewer_id", "sam", "tpms_norm", "acl_norm", "base", "bid", "aggscore"],
        [
            [p, r, repr(e.sam),
             "" if e.tpms_norm is None else repr(e.tpms_norm),
             "" if e.acl_norm is None else repr(e.acl_norm),
             repr(e.base), e.bid_level, repr(e.aggscore)]
            for (p, r), e in sorted(scores.entries.items())
        ],
    )


def cmd_validate(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    print(
        f"ok: {len(corpus.papers)} papers, {len(corpus.reviewers)} reviewers, "
        f"{len(corpus.bids)} bids, {len(corpus.taxonomy.keywords)} keywords, "
        f"{len(corpus.regions)} regions"
    )
    return 0


def cmd_conflicts(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suspicion = coi_mod.flag_suspicious_declarations(corpus)
    suppressed = _load_suppressions(Path(args.suppress)) if args.suppress else ()
    conflicts = coi_mod.infer_conflicts(corpus, config.current_year(), suppressed)
    _write_conflict_outputs(out_dir, corpus, conflicts, suspicion)
    stats = coi_mod.conflict_stats(conflicts, total_papers=len(corpus.papers))
    _write_json(out_dir / "conflict_stats.json", stats)
    print(f"{len(conflicts)} conflicts ({stats['trivial_count']} trivial)")
    return 0


def cmd_bids(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    filtered = bids_mod.filter_bids(corpus)
    _write_bid_outputs(out_dir, filtered)
    print(f"{len(filtered.bids)} bids kept, {len(filtered.audit)} audit entries")
    return 0


def cmd_score(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _, _, scores = _pipeline_to_scores(corpus, config, args.suppress, args.annotations)
    _write_score_outputs(out_dir, scores)
    print(f"{len(scores.entries)} scored pairs")
    return 0


def _load_prior_assignment(path: Path) -> list[tuple[str, str]]:
    pairs = []
    with path.open(newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            pairs.append((row["paper_id"].strip(), row["reviewer_id"].strip()))
    return pairs


def cmd_match(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suspicion = coi_mod.flag_suspicious_declarations(corpus)
    conflicts, filtered, scores = _pipeline_to_scores(
        corpus, config, args.suppress, args.annotations
    )
    params = config.match_params()
    fixed = _load_prior_assignment(Path(args.prior)) if args.prior else ()
    model = build_model(
        corpus, scores, conflicts, filtered, params,
        fixed=fixed,
        raise_capacity_for_fixed=True,
        defer_coauthor_terms=True,
    )
    gap = args.gap if args.gap is not None else params.mip_gap_abs
    report = solve_with_row_generation(
        model,
        backend=args.backend,
        max_iters=args.max_iters,
        mip_gap_abs=(None if args.backend == "exact" else gap),
        seed=args.seed,
        time_limit=args.time_limit,
    )

    _write_conflict_outputs(out_dir, corpus, conflicts, suspicion)
    _write_bid_outputs(out_dir, filtered)
    _write_score_outputs(out_dir, scores)
    roles = {r.id: r.role for r in corpus.reviewers.values()}
    phase = args.phase
    _write_csv(
        out_dir / "assignment.csv",
        ["paper_id", "reviewer_id", "role", "phase"],
        [[p, r, roles[r], phase] for p, r in report.assignment],
    )
    _write_json(out_dir / "solve_report.json", report.to_json_dict())
    if args.export_lp:
        export_lp(model.with_active_co_pairs(model.co_master), out_dir / "model.lp")
    print(
        f"assigned {len(report.assignment)} pairs, objective {report.objective.total:.6f} "
        f"(bound {report.upper_bound:.6f}, status {report.status})"
    )
    return 0


def cmd_decide(args, config: RunConfig) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reviews = _load_reviews(Path(args.reviews))
    fasttrack: set[str] = set()
    if args.data:
        corpus = load_corpus(args.data)
        fasttrack = {p.id for p in corpus.papers.values() if p.track == "fasttrack"}
        for paper_id in corpus.papers:
            reviews.setdefault(paper_id, [])
    outcome = phase1_decide(reviews, config.policy(), fasttrack)
    rows = []
    for paper_id in sorted(outcome.rejected | outcome.promoted):
        if paper_id in outcome.rejected:
            rows.append([paper_id, "reject", "phase1"])
        else:
            rows.append([paper_id, "promote", outcome.promotion_reason[paper_id]])
    _write_csv(out_dir / "decisions.csv", ["paper_id", "decision", "reason"], rows)
    print(f"{len(outcome.rejected)} rejected, {len(outcome.promoted)} promoted")
    return 0


def _load_cohort(path: Path) -> list[ReviewedPaper]:
    cohort = []
    with path.open(newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            cohort.append(ReviewedPaper(
                paper_id=row["paper_id"].strip(),
                scores=tuple(float(x) for x in row["scores"].split(";") if x.strip()),
                confidences=tuple(int(x) for x in row["confidences"].split(";") if x.strip()),
                accepted=row["accepted"].strip() in ("1", "true", "True"),
            ))
    return cohort


def cmd_simulate(args, config: RunConfig) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    noise = config.noise()
    policy = config.policy()
    v = config.values
    report: dict[str, object] = {"experiment": args.experiment}

    if args.experiment == "gap":
        seeds = [args.seed + n for n in range(int(v["sim.seeds"]))]
        result = mean_gap_over_seeds(int(v["sim.papers"]), noise, seeds, policy=policy)
        report.update(result)
    elif args.experiment == "gibbs":
        rng_world, _ = simulate_reviews(
            int(v["sim.gibbs_papers"]), noise,
            reviewers_per_phase=int(v["sim.gibbs_reviews"]),
            policy=PhasePolicy(reject_score_threshold=float("-inf")),
            seed=args.seed,
        )
        groups = [list(row) for row in rng_world.phase1_scores]
        result = gibbs_estimate(
            groups, noise,
            iterations=int(v["sim.iterations"]),
            burn_in=int(v["sim.burn_in"]),
            seed=args.seed + 1,
        )
        report.update({
            "sigma_true": noise.sigma,
            "sigma_estimate": result["sigma"],
            "sigma_std": result["sigma_std"],
        })
    elif args.experiment == "false_negative":
        if not args.cohort:
            raise ConfigError("--cohort FILE is required for the false_negative experiment")
        result = false_negative_rate(_load_cohort(Path(args.cohort)), policy)
        report.update({"rate": result["rate"], "per_paper": result["per_paper"]})
    elif args.experiment == "generate":
        corpus = load_corpus(args.data)
        seed_keyword = str(v["sim.seed_keyword"]) or args.seed_keyword
        if not seed_keyword:
            raise ConfigError("sim.seed_keyword (or --seed-keyword) is required")
        snapshots = generate_conference(
            corpus,
            GenConfig(seed_keyword=seed_keyword,
                      growth_factor=float(v["sim.growth_factor"]),
                      seed=args.seed),
        )
        sizes = []
        for n, snapshot in enumerate(snapshots):
            target = out_dir / "snapshots" / f"snap_{n:03d}"
            save_corpus(snapshot, target)
            sizes.append({"papers": len(snapshot.papers), "reviewers": len(snapshot.reviewers)})
        report.update({"snapshots": sizes})
    elif args.experiment == "metrics":
        corpus = load_corpus(args.data)
        conflicts, filtered, scores = _pipeline_to_scores(corpus, config, args.suppress, None)
        pairs = _load_prior_assignment(Path(args.assignment))
        model = build_model(corpus, scores, conflicts, filtered, config.match_params())
        report.update(match_metrics(pairs, scores, model))
        report["missing_data"] = missing_data_stability(scores)
    else:
        raise ConfigError(f"unknown experiment {args.experiment!r}")

    _write_json(out_dir / "sim_report.json", report)
    print(json.dumps({k: report[k] for k in sorted(report) if k not in ("per_paper", "gaps", "scores")},
                     sort_keys=True))
    return 0


def cmd_report(args, config: RunConfig) -> int:
    corpus = load_corpus(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    conflicts, filtered, scores = _pipeline_to_scores(corpus, config, args.suppress, None)
    pairs = _load_prior_assignment(Path(args.assignment))
    model = build_model(corpus, scores, conflicts, filtered, config.match_params())
    payload = {
        "metrics": match_metrics(pairs, scores, model),
        "conflicts": coi_mod.conflict_stats(
            conflicts, total_papers=len(corpus.papers)
        ),
    }
    try:
        payload["missing_data"] = missing_data_stability(scores)
    except ValueError:
        payload["missing_data"] = None
    _write_json(out_dir / "report.json", payload)
    print("report written")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="confmatch")
    parser.add_argument("--config", help="JSON config file with namespaced keys")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker cap (the pipeline currently runs single-process)")
    parser.add_argument("--out-dir", default="out")
    parser.add_argument("--current-year", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate)
    p.add_argument("--data", required=True)

    p = add("conflicts", cmd_conflicts)
    p.add_argument("--data", required=True)
    p.add_argument("--suppress")

    p = add("bids", cmd_bids)
    p.add_argument("--data", required=True)

    p = add("score", cmd_score)
    p.add_argument("--data", required=True)
    p.add_argument("--suppress")
    p.add_argument("--annotations")

    p = add("match", cmd_match)
    p.add_argument("--data", required=True)
    p.add_argument("--suppress")
    p.add_argument("--annotations")
    p.add_argument("--backend", choices=("exact", "heuristic"), default="heuristic")
    p.add_argument("--max-iters", type=int, default=10)
    p.add_argument("--gap", type=float, default=None)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--export-lp", action="store_true")
    p.add_argument("--phase", type=int, default=1)
    p.add_argument("--prior", help="assignment.csv from a previous phase")

    p = add("decide", cmd_decide)
    p.add_argument("--reviews", required=True)
    p.add_argument("--data")

    p = add("simulate", cmd_simulate)
    p.add_argument("--experiment", required=True,
                   choices=("gap", "gibbs", "false_negative", "generate", "metrics"))
    p.add_argument("--data")
    p.add_argument("--cohort")
    p.add_argument("--assignment")
    p.add_argument("--suppress")
    p.add_argument("--seed-keyword", default="")

    p = add("report", cmd_report)
    p.add_argument("--data", required=True)
    p.add_argument("--assignment", required=True)
    p.add_argument("--suppress")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.from_file(args.config) if args.config else RunConfig()
        if args.current_year is not None:
            config.values["coi.current_year"] = args.current_year
        return args.fn(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DanglingReferenceError as exc:
        print(f"reference error: {exc}", file=sys.stderr)
        return EXIT_REFERENCE
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except CorpusError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
