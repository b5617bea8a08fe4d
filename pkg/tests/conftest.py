import pytest

from gridtrust.ledger import Ledger, ReputationRecord
from gridtrust.topology import Topology

ACCEPTANCE_RESULTS: list[str] = []

FIFTEEN = {
    "G1": {"D1": ["A", "B", "C", "D"], "D2": ["E", "F", "G", "H"]},
    "G2": {"D3": ["I", "J", "K", "L"], "D4": ["M", "N", "O"]},
}


@pytest.fixture
def fifteen():
    return Topology.from_nested(FIFTEEN)


def ledger_from_vectors(vectors, mu=3.0, t=0.0):
    """Ledger whose stored reputations are exactly ``{rater: {subject: value}}``."""
    ledger = Ledger(mu)
    for rater, scores in vectors.items():
        for subject, value in scores.items():
            ledger.record_reputation(ReputationRecord(rater, subject, value, mu / 2, t))
    return ledger


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
