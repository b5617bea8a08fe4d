"""Trust aggregation, time decay and threshold classification.

The total reputation of a subject as seen by an evaluator is

    total = w1 * direct + w2 * same_domain + w3 * other_domain

where the two indirect terms are credibility-weighted means of what the
evaluator's recommenders report about the subject.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from gridtrust.credibility import (
    WEIGHT_TOLERANCE,
    Credibility,
    CredibilityWeights,
    InsufficientOverlap,
    WindowActivity,
    credibility,
    kendall_similarity,
)
from gridtrust.errors import ConfigError
from gridtrust.ledger import Ledger, RatingVector, ReputationRecord
from gridtrust.purge import QuarantineRegistry, filter_reports
from gridtrust.topology import RelationKind, Topology, classify_relationship, other_domain_pool, same_domain_pool


class Stance(enum.Enum):
    PARANOID = "paranoid"
    TRUSTING = "trusting"


class Verdict(enum.Enum):
    TRUSTWORTHY = "trustworthy"
    UNTRUSTWORTHY = "untrustworthy"

    def __bool__(self) -> bool:
        return self is Verdict.TRUSTWORTHY


class DecayMode(enum.Enum):
    # stale values relax toward the unknown-state default
    INTENT = "intent"
    # final + (final - initial) * tau, as printed
    LITERAL = "literal"


@dataclass(frozen=True)
class RatingScale:
    mu: float = 3.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigError([("scale.mu", f"mu must be positive, got {self.mu}")])


@dataclass(frozen=True)
class AggregationWeights:
    w1: float = 0.5
    w2: float = 0.3
    w3: float = 0.2

    def __post_init__(self):
        problems = []
        if min(self.w1, self.w2, self.w3) < 0:
            problems.append(("weights.w_nonnegative", f"aggregation weights must be non-negative, got {self.astuple()}"))
        if abs(self.w1 + self.w2 + self.w3 - 1.0) > WEIGHT_TOLERANCE:
            problems.append(("weights.w_sum", f"w1+w2+w3 must equal 1, got {self.w1 + self.w2 + self.w3:g}"))
        if not self.w1 > self.w2 > self.w3:
            problems.append(("weights.w_order", f"weights must satisfy w1 > w2 > w3, got {self.astuple()}"))
        if problems:
            raise ConfigError(problems)

    def astuple(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)


@dataclass(frozen=True)
class Thresholds:
    eta: float = 2.2
    xi: float = 1.8
    stance: Stance = Stance.PARANOID

    def __post_init__(self):
        if not 0.0 <= self.xi < self.eta:
            raise ConfigError([("thresholds.eta_xi", f"thresholds must satisfy 0 <= xi < eta, got xi={self.xi}, eta={self.eta}")])


@dataclass(frozen=True)
class RecommenderReport:
    entity: str
    credibility: Credibility
    reported: float
    kind: RelationKind


@dataclass(frozen=True)
class TrustScore:
    total: float
    dt: float
    itsd: float
    itod: float
    contributing_recommenders: tuple[RecommenderReport, ...] = ()


@dataclass(frozen=True)
class EngineParams:
    """Everything ``evaluate`` needs besides the topology and the ledger."""

    scale: RatingScale = field(default_factory=RatingScale)
    weights: AggregationWeights = field(default_factory=AggregationWeights)
    cred: CredibilityWeights = field(default_factory=CredibilityWeights)
    cred_other: CredibilityWeights | None = None
    thresholds: Thresholds = field(default_factory=Thresholds)
    alpha: float = 0.5
    activity_window: float = 1.0
    decay_mode: DecayMode = DecayMode.INTENT

    def __post_init__(self):
        problems = []
        if self.thresholds.eta > self.scale.mu:
            problems.append(("thresholds.eta_mu", f"eta={self.thresholds.eta} exceeds mu={self.scale.mu}"))
        if not 0.0 <= self.alpha <= 1.0:
            problems.append(("engine.alpha", f"learning rate must lie in [0, 1], got {self.alpha}"))
        if not self.activity_window > 0:
            problems.append(("engine.activity_window", f"activity window must be positive, got {self.activity_window}"))
        if problems:
            raise ConfigError(problems)

    @property
    def mu(self) -> float:
        return self.scale.mu

    @property
    def default(self) -> float:
        return initial_direct_trust(self.scale)


def initial_direct_trust(scale: RatingScale) -> float:
    """Newcomers start at the midpoint of the scale."""
    return scale.mu / 2


def tau_for_elapsed(delta_months: float) -> float:
    if delta_months < 0:
        raise ValueError(f"elapsed time must be non-negative, got {delta_months}")
    if delta_months < 1:
        return 1.0
    if delta_months < 2:
        return 0.75
    if delta_months < 3:
        return 0.5
    return 0.0


def decay(
    rec: ReputationRecord,
    now: float,
    default: float,
    mode: DecayMode = DecayMode.INTENT,
    mu: float = 3.0,
) -> float:
    """Reputation value of ``rec`` as it should be reported at ``now``."""
    if now < rec.last_updated:
        raise ValueError(f"now={now} precedes last update t={rec.last_updated}")
    tau = tau_for_elapsed(now - rec.last_updated)
    if mode is DecayMode.LITERAL:
        value = rec.value + (rec.value - rec.initial_value) * tau
    else:
        value = default + (rec.value - default) * tau
    return min(max(value, 0.0), mu)


def indirect_trust(reports: Sequence[tuple[float, float]], mu: float = 3.0) -> float:
    """Credibility-weighted mean of ``(reputation, credibility)`` reports.

    With no reports or zero total credibility the neutral midpoint is returned.
    """
    weight = sum(c for _, c in reports)
    if weight <= 0:
        return mu / 2
    return sum(r * c for r, c in reports) / weight


def total_reputation(dt: float, itsd: float, itod: float, w: AggregationWeights) -> TrustScore:
    if not isinstance(w, AggregationWeights):
        raise ConfigError([("weights", f"expected AggregationWeights, got {type(w).__name__}")])
    total = w.w1 * dt + w.w2 * itsd + w.w3 * itod
    # a convex combination cannot leave the hull of its inputs; guards rounding only
    total = min(max(total, min(dt, itsd, itod)), max(dt, itsd, itod))
    return TrustScore(total=total, dt=dt, itsd=itsd, itod=itod)


def classify(score: TrustScore | float, th: Thresholds) -> Verdict:
    total = score.total if isinstance(score, TrustScore) else score
    if total >= th.eta:
        return Verdict.TRUSTWORTHY
    if total <= th.xi:
        return Verdict.UNTRUSTWORTHY
    return Verdict.TRUSTWORTHY if th.stance is Stance.TRUSTING else Verdict.UNTRUSTWORTHY


def update_after_transaction(
    store: Ledger,
    evaluator: str,
    subject: str,
    outcome_rating: float,
    now: float,
    alpha: float = 0.5,
    mu: float | None = None,
) -> ReputationRecord:
    """Blend ``outcome_rating`` into the evaluator's stored reputation of ``subject``."""
    mu = store.mu if mu is None else mu
    if not 0.0 <= outcome_rating <= mu:
        raise ValueError(f"outcome rating {outcome_rating} outside [0, {mu}]")
    prev = store.reputation(evaluator, subject)
    if prev is None:
        previous = initial = mu / 2
    else:
        previous, initial = prev.value, prev.initial_value
    value = (1 - alpha) * previous + alpha * outcome_rating
    rec = ReputationRecord(evaluator, subject, min(max(value, 0.0), mu), initial, now)
    store.record_reputation(rec)
    return rec


Similarity = Callable[[RatingVector, RatingVector], float]


def evaluate(
    topology: Topology,
    ledger: Ledger,
    evaluator: str,
    subject: str,
    params: EngineParams,
    registry: QuarantineRegistry | None = None,
    similarity: Similarity = kendall_similarity,
    now: float | None = None,
) -> TrustScore:
    """Total reputation of ``subject`` from ``evaluator``'s point of view at ``now``.

    Reports from recommenders quarantined in ``registry`` are dropped before
    aggregation. Similarity is measured between the evaluator's own ratings
    and each recommender's; too little overlap counts as neutral (0.0).
    """
    if evaluator == subject:
        raise ValueError("evaluator and subject must differ")
    now = ledger.last_time if now is None else now
    mu, default = params.mu, params.default

    own = ledger.reputation(evaluator, subject, now)
    dt = decay(own, now, default, params.decay_mode, mu) if own is not None else default

    same = same_domain_pool(topology, evaluator, subject)
    pool = same | other_domain_pool(topology, evaluator, subject)
    window = WindowActivity.from_ledger(ledger, (max(0.0, now - params.activity_window), now))
    pool_total = window.pool_total(pool)
    own_vector = ledger.rating_vector_of(evaluator, None, now)

    reports: list[RecommenderReport] = []
    for r in topology.sort(pool):
        rec = ledger.reputation(r, subject, now)
        if rec is None:
            continue
        try:
            sim = similarity(own_vector, ledger.rating_vector_of(r, None, now))
        except InsufficientOverlap:
            sim = 0.0
        weights = params.cred if r in same or params.cred_other is None else params.cred_other
        cred = credibility(sim, window.activity(r, pool, pool_total), window.popularity(r), weights)
        reported = decay(rec, now, default, params.decay_mode, mu)
        reports.append(RecommenderReport(r, cred, reported, classify_relationship(topology, evaluator, r)))

    if registry is not None:
        reports = filter_reports(reports, registry, now, key=lambda rep: rep.entity)

    itsd = indirect_trust([(rep.reported, rep.credibility.value) for rep in reports if rep.entity in same], mu)
    itod = indirect_trust([(rep.reported, rep.credibility.value) for rep in reports if rep.entity not in same], mu)
    score = total_reputation(dt, itsd, itod, params.weights)
    return TrustScore(score.total, dt, itsd, itod, tuple(reports))
