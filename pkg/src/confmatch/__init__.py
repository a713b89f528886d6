"""Reviewer-paper matching pipeline for large conferences."""

from .bids import FilteredBids, filter_bids, positive_weight
from .coi import (
    ConflictSet,
    SuspicionReport,
    conflict_stats,
    flag_suspicious_declarations,
    infer_conflicts,
)
from .corpus import (
    Bid,
    CoauthorEdge,
    CoauthorGraph,
    Corpus,
    CorpusError,
    DanglingReferenceError,
    KeywordTaxonomy,
    Paper,
    PersonMeta,
    Reviewer,
    SchemaError,
    build_corpus,
    load_corpus,
    normalize_domain,
    save_corpus,
    seniority_level,
    subset_corpus,
)
from .lp_format import ParsedLP, export_lp, lp_structure, parse_lp, serialize_lp
from .model import (
    HardConstraintViolation,
    InfeasibleModelError,
    MatchParams,
    Model,
    ObjectiveBreakdown,
    bidding_cycles,
    build_model,
    candidate_pairs,
    evaluate_objective,
    model_stats,
    reviewer_distances,
)
from .phases import (
    PhaseOutcome,
    PhasePolicy,
    Review,
    phase1_decide,
    phase2_requirements,
    run_two_phase,
)
from .scoring import (
    BID_EXPONENTS,
    ExpertiseIndex,
    Normalizer,
    ScoreEntry,
    ScoreMatrix,
    aggscore,
    base_score,
    build_score_matrix,
    cleanup,
    cooccurrence,
    densify,
    fit_normalizer,
    sam_score,
)
from .simlab import (
    GenConfig,
    NoiseModel,
    ReviewedPaper,
    SimWorld,
    false_negative_rate,
    generate_conference,
    gibbs_estimate,
    match_metrics,
    mean_gap_over_seeds,
    missing_data_stability,
    pair_rejection_probability,
    simulate_reviews,
)
from .solver import (
    ExhaustiveLimitError,
    SolveReport,
    solve_exact,
    solve_heuristic,
    solve_multiphase,
    solve_with_row_generation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
