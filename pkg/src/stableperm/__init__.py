"""Stable permutations of one-sided preference systems.

A preference system gives every agent a strict ranking of all others; a
permutation is stable when no two mutually unmatched agents prefer each
other to their assigned successors.  This package provides the sequential
proposal algorithm computing the canonical stable permutation, brute-force
and exact-rational oracles, Monte Carlo analytics for stability
probabilities and rank distributions, and a deterministic experiment
harness with a CLI.
"""
from ._kernels import backend as kernel_backend
from .analytics import (
    MAX_POLYNOMIAL_PAIRS,
    McEstimate,
    PairSets,
    RankDistributionEstimate,
    RankPolynomial,
    conditional_stable_probability,
    joint_rank_polynomial,
    mc_rank_distribution,
    mc_stable_probability,
    pair_sets,
)
from .core import (
    AgentId,
    CapExceededError,
    InstanceError,
    Permutation,
    PreferenceSystem,
    Rng,
    cycle_decomposition,
    format_instance,
    generate_instance,
    invert,
    mix64,
    parse_instance,
    rank_of,
)
from .harness import (
    CSV_COLUMNS,
    OUTPUT_NAMES,
    ExperimentConfig,
    StatLine,
    SummaryStats,
    TrialRecord,
    format_cycle_spectrum,
    read_records,
    run_experiment,
    run_trial,
    summarize,
    summary_path,
    write_output,
)
from .oracle import (
    ENUMERATION_MAX_N,
    PROFILE_MAX_N,
    ClauseResult,
    ExactProbability,
    StableSet,
    StructureReport,
    enumerate_profiles,
    enumerate_stable,
    exact_rank_distribution,
    stable_permutations,
    verify_structure,
)
from .proposal import (
    OrderPolicy,
    ProposalEvent,
    ProposalOutcome,
    run_proposals,
    verify_terminal_sets,
)
from .stability import (
    CycleOrientation,
    Orientation,
    RankPair,
    StabilityReport,
    classify_pi0_like,
    cycle_orientation,
    is_stable,
    is_tan_stable,
    ranks,
)

__version__ = "0.1.0"

__all__ = [
    "AgentId",
    "CapExceededError",
    "ClauseResult",
    "CSV_COLUMNS",
    "CycleOrientation",
    "ENUMERATION_MAX_N",
    "ExactProbability",
    "ExperimentConfig",
    "InstanceError",
    "MAX_POLYNOMIAL_PAIRS",
    "McEstimate",
    "OrderPolicy",
    "Orientation",
    "OUTPUT_NAMES",
    "PairSets",
    "Permutation",
    "PreferenceSystem",
    "PROFILE_MAX_N",
    "ProposalEvent",
    "ProposalOutcome",
    "RankDistributionEstimate",
    "RankPair",
    "RankPolynomial",
    "Rng",
    "StableSet",
    "StabilityReport",
    "StatLine",
    "StructureReport",
    "SummaryStats",
    "TrialRecord",
    "classify_pi0_like",
    "conditional_stable_probability",
    "cycle_decomposition",
    "cycle_orientation",
    "enumerate_profiles",
    "enumerate_stable",
    "exact_rank_distribution",
    "format_cycle_spectrum",
    "format_instance",
    "generate_instance",
    "invert",
    "is_stable",
    "is_tan_stable",
    "joint_rank_polynomial",
    "kernel_backend",
    "mc_rank_distribution",
    "mc_stable_probability",
    "mix64",
    "pair_sets",
    "parse_instance",
    "rank_of",
    "ranks",
    "read_records",
    "run_experiment",
    "run_proposals",
    "run_trial",
    "stable_permutations",
    "summarize",
    "summary_path",
    "verify_structure",
    "verify_terminal_sets",
    "write_output",
]
