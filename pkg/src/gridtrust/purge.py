"""Consensus-outlier detection and time-boxed quarantine of recommenders."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

from gridtrust.credibility import common_subjects, kendall_similarity
from gridtrust.errors import ConfigError, GridTrustError
from gridtrust.ledger import Ledger, RatingVector

QUARANTINE_COLUMNS = ("entity", "flagged_at", "release_at", "evidence")

Similarity = Callable[[RatingVector, RatingVector], float]
R = TypeVar("R")


class InsufficientPopulation(GridTrustError):
    """Too few recommenders to form a consensus; detection was skipped."""

    def __init__(self, size: int):
        self.size = size
        super().__init__(f"consensus needs at least 3 recommenders, got {size}")


@dataclass(frozen=True)
class PurgePolicy:
    theta: float = 0.0
    min_overlap: int = 3
    quarantine_months: float = 3.0

    def __post_init__(self):
        problems = []
        if not -1.0 <= self.theta <= 1.0:
            problems.append(("purge.theta", f"similarity threshold must lie in [-1, 1], got {self.theta}"))
        if self.min_overlap < 2:
            problems.append(("purge.min_overlap", f"min_overlap must be at least 2, got {self.min_overlap}"))
        if not self.quarantine_months > 0:
            problems.append(("purge.quarantine_months", f"quarantine_months must be positive, got {self.quarantine_months}"))
        if problems:
            raise ConfigError(problems)


@dataclass(frozen=True)
class QuarantineEntry:
    entity: str
    flagged_at: float
    release_at: float
    evidence: float

    def active(self, t: float) -> bool:
        return self.flagged_at <= t < self.release_at


class QuarantineRegistry:
    """Append-only list of quarantine entries; an entity may be re-flagged after release."""

    def __init__(self, entries: Iterable[QuarantineEntry] = ()):
        self.entries: list[QuarantineEntry] = list(entries)

    def active_entry(self, entity: str, t: float) -> QuarantineEntry | None:
        for entry in reversed(self.entries):
            if entry.entity == entity and entry.active(t):
                return entry
        return None

    def is_quarantined(self, entity: str, t: float) -> bool:
        return self.active_entry(entity, t) is not None

    def flagged(self) -> set[str]:
        """Every entity that has ever been quarantined."""
        return {e.entity for e in self.entries}

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(QUARANTINE_COLUMNS)
            for e in self.entries:
                writer.writerow([e.entity, repr(e.flagged_at), repr(e.release_at), repr(e.evidence)])

    @classmethod
    def from_csv(cls, path: str | Path) -> "QuarantineRegistry":
        with open(path, newline="") as fh:
            return cls(
                QuarantineEntry(row["entity"], float(row["flagged_at"]), float(row["release_at"]), float(row["evidence"]))
                for row in csv.DictReader(fh)
            )

    def __len__(self) -> int:
        return len(self.entries)


def _mean_similarity(
    cand: RatingVector, peers: Sequence[RatingVector], min_overlap: int, similarity: Similarity
) -> float:
    sims = [similarity(cand, p) for p in peers if len(common_subjects(cand, p)) >= min_overlap]
    return sum(sims) / len(sims) if sims else 0.0


def consensus_similarity(
    ledger: Ledger,
    candidate: str,
    peers: Iterable[str],
    as_of: float,
    min_overlap: int = 2,
    similarity: Similarity = kendall_similarity,
) -> float:
    """Mean similarity of ``candidate``'s ratings to each peer's; 0.0 if no peer overlaps enough."""
    peers = list(peers)
    if not peers:
        raise ValueError("peers must be non-empty")
    if candidate in peers:
        raise ValueError(f"candidate {candidate!r} is listed among its own peers")
    cand = ledger.rating_vector_of(candidate, None, as_of)
    vectors = [ledger.rating_vector_of(p, None, as_of) for p in sorted(peers)]
    return _mean_similarity(cand, vectors, min_overlap, similarity)


def _factions(ids: list[str], agree: dict[tuple[str, str], bool]) -> list[set[str]]:
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), ok in agree.items():
        if ok:
            parent[find(a)] = find(b)
    groups: dict[str, set[str]] = {}
    for i in ids:
        groups.setdefault(find(i), set()).add(i)
    return list(groups.values())


def consensus_scores(
    ledger: Ledger,
    recommenders: Iterable[str],
    policy: PurgePolicy,
    now: float,
    similarity: Similarity = kendall_similarity,
) -> tuple[dict[str, float], dict[tuple[str, str], float | None]]:
    """Consensus similarity for every recommender plus the pairwise table it came from."""
    ids = sorted(set(recommenders))
    vectors = {r: ledger.rating_vector_of(r, None, now) for r in ids}
    pairwise: dict[tuple[str, str], float | None] = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if len(common_subjects(vectors[a], vectors[b])) >= policy.min_overlap:
                pairwise[(a, b)] = similarity(vectors[a], vectors[b])
            else:
                pairwise[(a, b)] = None
    scores = {}
    for a in ids:
        sims = [s for (x, y), s in pairwise.items() if a in (x, y) and s is not None]
        scores[a] = sum(sims) / len(sims) if sims else 0.0
    return scores, pairwise


def _detect(ids, ledger, policy, now, similarity):
    scores, pairwise = consensus_scores(ledger, ids, policy, now, similarity)
    flagged = {r for r in ids if scores[r] < policy.theta}
    if 2 * len(flagged) < len(ids):
        return flagged, scores
    agree = {pair: s is not None and s > policy.theta for pair, s in pairwise.items()}
    factions = sorted(_factions(ids, agree), key=len, reverse=True)
    if len(factions) > 1 and len(factions[0]) == len(factions[1]):
        return set(), scores
    return flagged - factions[0], scores


def detect_untrustworthy(
    ledger: Ledger,
    recommenders: Iterable[str],
    policy: PurgePolicy,
    now: float,
    similarity: Similarity = kendall_similarity,
) -> set[str]:
    """Recommenders whose mean similarity to the rest falls below ``policy.theta``.

    When at least half the population falls below the threshold there is no
    majority to act as reference. The recommenders are then grouped into
    factions of mutual agreement and only those outside a unique largest
    faction are flagged; if the largest faction is tied nobody is flagged.

    Raises InsufficientPopulation with fewer than three recommenders.
    """
    ids = sorted(set(recommenders))
    if len(ids) < 3:
        raise InsufficientPopulation(len(ids))
    return _detect(ids, ledger, policy, now, similarity)[0]


def quarantine(
    registry: QuarantineRegistry, entity: str, evidence: float, policy: PurgePolicy, now: float
) -> QuarantineEntry:
    """Quarantine ``entity`` from ``now``; returns the existing entry if it is already active."""
    existing = registry.active_entry(entity, now)
    if existing is not None:
        return existing
    entry = QuarantineEntry(entity, now, now + policy.quarantine_months, evidence)
    registry.entries.append(entry)
    return entry


def purge(
    ledger: Ledger,
    registry: QuarantineRegistry,
    recommenders: Iterable[str],
    policy: PurgePolicy,
    now: float,
    similarity: Similarity = kendall_similarity,
) -> set[str]:
    """Detect outliers among ``recommenders`` and quarantine them. Returns the detected set."""
    ids = sorted(set(recommenders))
    if len(ids) < 3:
        return set()
    flagged, scores = _detect(ids, ledger, policy, now, similarity)
    for entity in sorted(flagged):
        quarantine(registry, entity, scores[entity], policy, now)
    return flagged


def filter_reports(reports: Sequence[R], registry: QuarantineRegistry, now: float, key: Callable[[R], str] | None = None) -> list[R]:
    """Drop reports whose recommender is quarantined at ``now``; survivors keep their order.

    Reports are ``(recommender, ...)`` tuples unless ``key`` says otherwise.
    """
    key = key or (lambda r: r[0])
    return [r for r in reports if not registry.is_quarantined(key(r), now)]
