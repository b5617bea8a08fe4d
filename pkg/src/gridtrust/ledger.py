"""Append-only interaction ledger and reputation history.

The ledger is the single source of truth for who interacted with whom and
when (activity and popularity are computed from it) and for the reputation
values each entity has stored about the others.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from gridtrust.errors import OrderingError

LEDGER_COLUMNS = ("time", "initiator", "provider", "rating", "accepted")


@dataclass(frozen=True)
class InteractionRecord:
    initiator: str
    provider: str
    time: float
    outcome_rating: float
    accepted: bool = True

    def __post_init__(self):
        if self.initiator == self.provider:
            raise ValueError(f"initiator and provider must differ (both {self.initiator!r})")
        if self.time < 0:
            raise ValueError(f"negative timestamp {self.time}")
        if self.outcome_rating < 0:
            raise ValueError(f"negative rating {self.outcome_rating}")


@dataclass(frozen=True)
class ReputationRecord:
    """What ``evaluator`` currently believes about ``subject``.

    ``initial_value`` is the value the record started from before its first
    update and is never changed afterwards.
    """

    evaluator: str
    subject: str
    value: float
    initial_value: float
    last_updated: float


@dataclass(frozen=True)
class RatingVector:
    rater: str
    scores: Mapping[str, float]
    as_of: float

    def __post_init__(self):
        if self.rater in self.scores:
            raise ValueError(f"rater {self.rater!r} cannot score itself")

    def restrict(self, subjects: Iterable[str]) -> "RatingVector":
        keep = set(subjects)
        return RatingVector(self.rater, {k: v for k, v in self.scores.items() if k in keep}, self.as_of)

    def __len__(self) -> int:
        return len(self.scores)


class Ledger:
    """Interaction log plus per-(evaluator, subject) reputation history.

    Both logs are append-only. ``mu`` bounds every rating and reputation.
    """

    def __init__(self, mu: float = 3.0):
        self.mu = mu
        self._records: list[InteractionRecord] = []
        self._times: list[float] = []
        # rater -> subject -> records ordered by last_updated
        self._reputations: dict[str, dict[str, list[ReputationRecord]]] = {}

    # -- interactions -------------------------------------------------------

    def record_interaction(self, rec: InteractionRecord) -> None:
        if self._times and rec.time < self._times[-1]:
            raise OrderingError(f"record at t={rec.time} precedes last recorded time t={self._times[-1]}")
        if rec.outcome_rating > self.mu:
            raise ValueError(f"rating {rec.outcome_rating} exceeds maximum {self.mu}")
        self._records.append(rec)
        self._times.append(rec.time)

    def interactions_in_window(self, start: float, end: float) -> list[InteractionRecord]:
        """Records with ``start <= time < end`` in ledger order."""
        if start > end:
            raise ValueError(f"window start {start} is after end {end}")
        lo = bisect.bisect_left(self._times, start)
        hi = bisect.bisect_left(self._times, end)
        return self._records[lo:hi]

    @property
    def last_time(self) -> float:
        return self._times[-1] if self._times else 0.0

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[InteractionRecord]:
        return iter(self._records)

    # -- reputations --------------------------------------------------------

    def record_reputation(self, rec: ReputationRecord) -> None:
        history = self._reputations.setdefault(rec.evaluator, {}).setdefault(rec.subject, [])
        if history and rec.last_updated < history[-1].last_updated:
            raise OrderingError(
                f"reputation of {rec.subject!r} by {rec.evaluator!r} at t={rec.last_updated} "
                f"precedes t={history[-1].last_updated}"
            )
        if not 0.0 <= rec.value <= self.mu or not 0.0 <= rec.initial_value <= self.mu:
            raise ValueError(f"reputation outside [0, {self.mu}]: {rec}")
        history.append(rec)

    def reputation(self, evaluator: str, subject: str, as_of: float | None = None) -> ReputationRecord | None:
        """Latest record stored by ``evaluator`` about ``subject`` at or before ``as_of``."""
        history = self._reputations.get(evaluator, {}).get(subject)
        if not history:
            return None
        if as_of is None:
            return history[-1]
        for rec in reversed(history):
            if rec.last_updated <= as_of:
                return rec
        return None

    def rating_vector_of(self, rater: str, subjects: Iterable[str] | None, as_of: float) -> RatingVector:
        """Most recent stored reputation of ``rater`` for each subject it has evaluated.

        Subjects the rater never evaluated are absent, not zero. ``subjects=None``
        means no filter.
        """
        rated = self._reputations.get(rater, {})
        wanted = rated.keys() if subjects is None else [s for s in subjects if s in rated]
        scores = {}
        for subject in wanted:
            if subject == rater:
                continue
            rec = self.reputation(rater, subject, as_of)
            if rec is not None:
                scores[subject] = rec.value
        return RatingVector(rater, scores, as_of)

    def reputation_history(self) -> Iterator[ReputationRecord]:
        for by_subject in self._reputations.values():
            for history in by_subject.values():
                yield from history

    # -- export -------------------------------------------------------------

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(LEDGER_COLUMNS)
            for r in self._records:
                writer.writerow([repr(r.time), r.initiator, r.provider, repr(r.outcome_rating), str(r.accepted).lower()])

    @classmethod
    def from_csv(cls, path: str | Path, mu: float = 3.0) -> "Ledger":
        ledger = cls(mu)
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                ledger.record_interaction(
                    InteractionRecord(
                        initiator=row["initiator"],
                        provider=row["provider"],
                        time=float(row["time"]),
                        outcome_rating=float(row["rating"]),
                        accepted=row["accepted"].strip().lower() in ("true", "1", "yes"),
                    )
                )
        return ledger
