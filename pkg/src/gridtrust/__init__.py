"""Reputation-based trust evaluation for grid environments.

Direct experience is blended with credibility-weighted recommendations from
the evaluator's own domain and from other domains. Recommenders whose
rankings diverge from consensus (Kendall rank correlation) are quarantined.
"""

from gridtrust.credibility import (
    Credibility,
    CredibilityWeights,
    InsufficientOverlap,
    OrderedPairSet,
    activity,
    credibility,
    kendall_similarity,
    popularity,
    spearman_similarity,
    symmetric_difference_distance,
    to_ordered_pairs,
)
from gridtrust.engine import (
    AggregationWeights,
    EngineParams,
    RatingScale,
    Stance,
    Thresholds,
    TrustScore,
    Verdict,
    classify,
    decay,
    evaluate,
    indirect_trust,
    initial_direct_trust,
    tau_for_elapsed,
    total_reputation,
    update_after_transaction,
)
from gridtrust.errors import ConfigError, GridTrustError, OrderingError
from gridtrust.ledger import InteractionRecord, Ledger, RatingVector, ReputationRecord
from gridtrust.purge import (
    InsufficientPopulation,
    PurgePolicy,
    QuarantineEntry,
    QuarantineRegistry,
    consensus_similarity,
    detect_untrustworthy,
    filter_reports,
)
from gridtrust.topology import RelationKind, Topology, classify_relationship, recommenders_of

__version__ = "0.1.0"

__all__ = [
    "AggregationWeights",
    "ConfigError",
    "Credibility",
    "CredibilityWeights",
    "EngineParams",
    "GridTrustError",
    "InsufficientOverlap",
    "InsufficientPopulation",
    "InteractionRecord",
    "Ledger",
    "OrderedPairSet",
    "OrderingError",
    "PurgePolicy",
    "QuarantineEntry",
    "QuarantineRegistry",
    "RatingScale",
    "RatingVector",
    "RelationKind",
    "ReputationRecord",
    "Stance",
    "Thresholds",
    "Topology",
    "TrustScore",
    "Verdict",
    "activity",
    "classify",
    "classify_relationship",
    "consensus_similarity",
    "credibility",
    "decay",
    "detect_untrustworthy",
    "evaluate",
    "filter_reports",
    "indirect_trust",
    "initial_direct_trust",
    "kendall_similarity",
    "popularity",
    "recommenders_of",
    "spearman_similarity",
    "symmetric_difference_distance",
    "tau_for_elapsed",
    "to_ordered_pairs",
    "total_reputation",
    "update_after_transaction",
]
