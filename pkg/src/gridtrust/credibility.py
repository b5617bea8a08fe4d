"""Recommendation credibility: rank similarity, activity and popularity.

Similarity between two raters is measured on the subjects both have rated.
Each rating vector is turned into the set of ordered pairs ``(a, b)`` with
``score(a) > score(b)``; the number of pairs present in exactly one set gives
the Kendall-style similarity ``1 - 2 d / (n (n - 1))``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from gridtrust.errors import ConfigError, GridTrustError
from gridtrust.ledger import InteractionRecord, Ledger, RatingVector

WEIGHT_TOLERANCE = 1e-9


class InsufficientOverlap(GridTrustError):
    """Two rating vectors share fewer than two subjects."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"need at least 2 commonly rated subjects, got {n}")


@dataclass(frozen=True)
class OrderedPairSet:
    pairs: frozenset[tuple[str, str]]
    subjects: frozenset[str]

    @property
    def universe_size(self) -> int:
        return len(self.subjects)


@dataclass(frozen=True)
class CredibilityWeights:
    v1: float = 0.5
    v2: float = 0.3
    v3: float = 0.2

    def __post_init__(self):
        problems = []
        if min(self.v1, self.v2, self.v3) < 0:
            problems.append(("credibility.v_nonnegative", f"credibility weights must be non-negative, got {self.astuple()}"))
        if abs(self.v1 + self.v2 + self.v3 - 1.0) > WEIGHT_TOLERANCE:
            problems.append(("credibility.v_sum", f"v1+v2+v3 must equal 1, got {self.v1 + self.v2 + self.v3:g}"))
        if problems:
            raise ConfigError(problems)

    def astuple(self) -> tuple[float, float, float]:
        return (self.v1, self.v2, self.v3)


@dataclass(frozen=True)
class Credibility:
    """Clamped credibility ``value`` plus the raw (similarity, activity, popularity)."""

    value: float
    components: tuple[float, float, float]


def to_ordered_pairs(v: RatingVector, subjects: Iterable[str]) -> OrderedPairSet:
    subjects = frozenset(subjects)
    missing = subjects - v.scores.keys()
    if missing:
        raise ValueError(f"subjects not rated by {v.rater!r}: {sorted(missing)}")
    scores = v.scores
    pairs = set()
    for a, b in combinations(sorted(subjects), 2):
        if scores[a] > scores[b]:
            pairs.add((a, b))
        elif scores[b] > scores[a]:
            pairs.add((b, a))
    return OrderedPairSet(frozenset(pairs), subjects)


def symmetric_difference_distance(s1: OrderedPairSet, s2: OrderedPairSet) -> int:
    if s1.subjects != s2.subjects:
        raise ValueError("ordered pair sets are defined over different subjects")
    return len(s1.pairs ^ s2.pairs)


def common_subjects(a: RatingVector, b: RatingVector) -> frozenset[str]:
    return frozenset(a.scores.keys() & b.scores.keys())


def kendall_similarity(a: RatingVector, b: RatingVector) -> float:
    """Rank similarity in [-1, 1] over the commonly rated subjects.

    Raises InsufficientOverlap when fewer than two subjects are shared.
    """
    common = common_subjects(a, b)
    n = len(common)
    if n < 2:
        raise InsufficientOverlap(n)
    d = symmetric_difference_distance(to_ordered_pairs(a, common), to_ordered_pairs(b, common))
    # int / int is correctly rounded, so equal rationals give equal floats
    return (n * (n - 1) - 2 * d) / (n * (n - 1))


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman_similarity(a: RatingVector, b: RatingVector) -> float:
    """``1 - 6 sum(d_i^2) / (n (n^2 - 1))`` on average ranks of the common subjects."""
    common = sorted(common_subjects(a, b))
    n = len(common)
    if n < 2:
        raise InsufficientOverlap(n)
    ra = _average_ranks([a.scores[s] for s in common])
    rb = _average_ranks([b.scores[s] for s in common])
    d2 = sum((x - y) ** 2 for x, y in zip(ra, rb))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


class WindowActivity:
    """Interaction counts over one time window.

    Only accepted interactions count; a rejected request was never performed.
    Built once and queried for many recommenders.
    """

    def __init__(self, records: Iterable[InteractionRecord]):
        self.total = 0
        self.party: Counter[str] = Counter()
        self.provided: Counter[str] = Counter()
        self._pairs: Counter[tuple[str, str]] = Counter()
        for rec in records:
            if not rec.accepted:
                continue
            self.total += 1
            self.party[rec.initiator] += 1
            self.party[rec.provider] += 1
            self.provided[rec.provider] += 1
            self._pairs[(rec.initiator, rec.provider)] += 1

    @classmethod
    def from_ledger(cls, ledger: Ledger, window: tuple[float, float]) -> "WindowActivity":
        return cls(ledger.interactions_in_window(*window))

    def pool_total(self, pool: Iterable[str]) -> int:
        """Number of interactions with at least one party in ``pool``."""
        pool = set(pool)
        return sum(c for (i, p), c in self._pairs.items() if i in pool or p in pool)

    def activity(self, recommender: str, pool: Iterable[str], pool_total: int | None = None) -> float:
        denom = self.pool_total(pool) if pool_total is None else pool_total
        return self.party[recommender] / denom if denom else 0.0

    def popularity(self, recommender: str) -> float:
        return self.provided[recommender] / self.total if self.total else 0.0


def activity(ledger: Ledger, recommender: str, window: tuple[float, float], all_recommenders: Iterable[str]) -> float:
    """Share of the pool's interactions in ``window`` that ``recommender`` took part in."""
    return WindowActivity.from_ledger(ledger, window).activity(recommender, all_recommenders)


def popularity(ledger: Ledger, recommender: str, window: tuple[float, float]) -> float:
    """Share of all interactions in ``window`` where ``recommender`` was the provider."""
    return WindowActivity.from_ledger(ledger, window).popularity(recommender)


def credibility(sim: float, act: float, pop: float, v: CredibilityWeights) -> Credibility:
    if not isinstance(v, CredibilityWeights):
        raise ConfigError([("credibility.v", f"expected CredibilityWeights, got {type(v).__name__}")])
    raw = v.v1 * sim + v.v2 * act + v.v3 * pop
    return Credibility(min(max(raw, 0.0), 1.0), (sim, act, pop))
