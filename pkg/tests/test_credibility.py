import itertools
import math

import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from gridtrust.credibility import (
    Credibility,
    CredibilityWeights,
    InsufficientOverlap,
    activity,
    credibility,
    kendall_similarity,
    popularity,
    spearman_similarity,
    symmetric_difference_distance,
    to_ordered_pairs,
)
from gridtrust.errors import ConfigError
from gridtrust.ledger import InteractionRecord, Ledger, RatingVector


def vec(scores, rater="r"):
    return RatingVector(rater, dict(scores), 0.0)


def from_order(order, rater="r"):
    """Rating vector ranking ``order`` best first."""
    n = len(order)
    return vec({s: float(n - k) for k, s in enumerate(order)}, rater)


def brute_distance(order1, order2):
    """Directed pairs (a above b) present in exactly one of two rankings."""
    above1 = {(a, b) for a, b in itertools.permutations(order1, 2) if order1.index(a) < order1.index(b)}
    above2 = {(a, b) for a, b in itertools.permutations(order2, 2) if order2.index(a) < order2.index(b)}
    return sum(((a, b) in above1) != ((a, b) in above2) for a, b in itertools.permutations(order1, 2))


# -- ordered pairs -------------------------------------------------------------


def test_ordered_pairs_strict():
    s = to_ordered_pairs(vec({"P": 0.9, "Q": 0.5, "R": 0.1}), {"P", "Q", "R"})
    assert s.pairs == {("P", "Q"), ("P", "R"), ("Q", "R")}
    assert s.universe_size == 3


def test_ordered_pairs_ties_and_singletons():
    assert to_ordered_pairs(vec({"P": 1.0, "Q": 1.0, "R": 1.0}), {"P", "Q", "R"}).pairs == frozenset()
    single = to_ordered_pairs(vec({"P": 1.0}), {"P"})
    assert single.pairs == frozenset() and single.universe_size == 1


def test_ordered_pairs_missing_subject():
    with pytest.raises(ValueError):
        to_ordered_pairs(vec({"P": 1.0}), {"P", "Q"})


def test_distance_examples():
    subjects = {"P", "Q", "R"}
    pqr = to_ordered_pairs(from_order("PQR"), subjects)
    assert symmetric_difference_distance(pqr, pqr) == 0
    assert symmetric_difference_distance(pqr, to_ordered_pairs(from_order("RQP"), subjects)) == 6
    prq = to_ordered_pairs(from_order("PRQ"), subjects)
    assert brute_distance("PQR", "PRQ") == 2
    assert symmetric_difference_distance(pqr, prq) == 2


def test_distance_needs_same_universe():
    a = to_ordered_pairs(from_order("PQ"), {"P", "Q"})
    b = to_ordered_pairs(from_order("PR"), {"P", "R"})
    with pytest.raises(ValueError):
        symmetric_difference_distance(a, b)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_distance_matches_brute_force_exhaustive(n):
    letters = "PQRS"[:n]
    for o1 in itertools.permutations(letters):
        for o2 in itertools.permutations(letters):
            got = symmetric_difference_distance(to_ordered_pairs(from_order(o1), letters), to_ordered_pairs(from_order(o2), letters))
            assert got == brute_distance(o1, o2)


# -- similarity ----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_kendall_identical_is_one(n):
    order = [f"s{i}" for i in range(n)]
    assert kendall_similarity(from_order(order, "a"), from_order(order, "b")) == 1.0


def test_kendall_spot_values():
    assert kendall_similarity(from_order("PQR"), from_order("RQP")) == -1.0
    # brute force: d = 2 on n = 3, so (6 - 2*2) / 6, correctly rounded
    d = brute_distance("PQR", "PRQ")
    assert kendall_similarity(from_order("PQR"), from_order("PRQ")) == (6 - 2 * d) / 6 == 1 / 3


def test_kendall_uses_common_subjects_only():
    a = vec({"P": 3, "Q": 2, "R": 1, "X": 9})
    b = vec({"P": 3, "Q": 2, "R": 1, "Y": 0})
    assert kendall_similarity(a, b) == 1.0


def test_insufficient_overlap():
    with pytest.raises(InsufficientOverlap):
        kendall_similarity(vec({"P": 1}), vec({"P": 2, "Q": 1}))
    with pytest.raises(InsufficientOverlap):
        spearman_similarity(vec({"P": 1}), vec({"Q": 1}))


def test_spearman_spot_values():
    assert spearman_similarity(from_order("PQR"), from_order("PQR")) == 1.0
    assert spearman_similarity(from_order("PQR"), from_order("RQP")) == -1.0
    # ranks (1,2,3) vs (1,3,2): squared rank distance counted by hand
    d2 = sum((i - j) ** 2 for i, j in zip((1, 2, 3), (1, 3, 2)))
    assert d2 == 2
    assert spearman_similarity(from_order("PQR"), from_order("PRQ")) == pytest.approx(1 - 6 * d2 / 24) == 0.5


def test_spearman_average_ranks_for_ties():
    # x ranks (1.5, 1.5, 3), y ranks (1, 2, 3): sum d^2 = 0.5
    x, y = vec({"P": 1, "Q": 1, "R": 2}), vec({"P": 1, "Q": 2, "R": 3})
    assert spearman_similarity(x, y) == pytest.approx(1 - 6 * 0.5 / 24)


strict_pair = st.integers(2, 9).flatmap(
    lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n)))
)


@given(strict_pair)
def test_strict_orders_match_scipy(pair):
    p, q = pair
    names = [f"s{i}" for i in range(len(p))]
    a, b = vec(dict(zip(names, p))), vec(dict(zip(names, q)))
    tau = scipy.stats.kendalltau(p, q).statistic
    rho = scipy.stats.spearmanr(p, q).statistic
    assert kendall_similarity(a, b) == pytest.approx(tau, abs=1e-12)
    assert spearman_similarity(a, b) == pytest.approx(rho, abs=1e-12)


@given(strict_pair)
def test_reversal_negates_kendall(pair):
    p, q = pair
    names = [f"s{i}" for i in range(len(p))]
    a, b = vec(dict(zip(names, p))), vec(dict(zip(names, q)))
    rev = vec({k: -v for k, v in b.scores.items()})
    assert kendall_similarity(a, rev) == -kendall_similarity(a, b)


tied_pair = st.integers(2, 8).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 3), min_size=n, max_size=n), st.lists(st.integers(0, 3), min_size=n, max_size=n))
)


@given(tied_pair)
def test_similarities_symmetric_and_bounded(pair):
    x, y = pair
    names = [f"s{i}" for i in range(len(x))]
    a, b = vec(dict(zip(names, x))), vec(dict(zip(names, y)))
    for sim in (kendall_similarity, spearman_similarity):
        assert sim(a, b) == sim(b, a)
        assert -1.0 <= sim(a, b) <= 1.0
    assert kendall_similarity(a, a) == 1.0


# -- activity / popularity -----------------------------------------------------


def build_ledger(pairs, accepted=None):
    ledger = Ledger()
    for k, (i, p) in enumerate(pairs):
        ok = True if accepted is None else accepted[k]
        ledger.record_interaction(InteractionRecord(i, p, 0.0, 1.0, ok))
    return ledger


def test_activity_fraction_of_pool_interactions():
    # 20 interactions touching the pool {R, S}; R takes part in 5
    pairs = [("R", "X")] * 3 + [("Y", "R")] * 2 + [("S", "X")] * 15 + [("X", "Y")] * 7
    ledger = build_ledger(pairs)
    assert activity(ledger, "R", (0.0, 1.0), {"R", "S"}) == 0.25
    assert activity(ledger, "Z", (0.0, 1.0), {"R", "S", "Z"}) == 0.0
    assert activity(ledger, "S", (0.0, 1.0), {"S", "Z"}) == 1.0


def test_activity_empty_window_and_rejections():
    ledger = build_ledger([("R", "X"), ("S", "X")], accepted=[False, True])
    assert activity(ledger, "R", (0.0, 1.0), {"R", "S"}) == 0.0
    assert activity(ledger, "R", (5.0, 6.0), {"R", "S"}) == 0.0
    assert popularity(ledger, "X", (0.0, 1.0)) == 1.0


def test_popularity_examples():
    pairs = [("A", "P")] * 3 + [("A", "B")] * 9
    ledger = build_ledger(pairs)
    assert popularity(ledger, "P", (0.0, 1.0)) == 0.25
    assert popularity(ledger, "A", (0.0, 1.0)) == 0.0
    assert popularity(ledger, "P", (2.0, 3.0)) == 0.0


# -- credibility ---------------------------------------------------------------


def test_credibility_examples():
    v = CredibilityWeights(0.5, 0.3, 0.2)
    c = credibility(1.0, 0.25, 0.25, v)
    assert c.value == pytest.approx(0.625)
    assert c.components == (1.0, 0.25, 0.25)
    low = credibility(-1.0, 0.0, 0.0, v)
    assert low.value == 0.0 and low.components == (-1.0, 0.0, 0.0)
    assert credibility(1.0, 1.0, 1.0, v).value == pytest.approx(1.0)


@pytest.mark.parametrize("weights", [(0.5, 0.3, 0.3), (1.2, -0.1, -0.1)])
def test_credibility_weight_constraints(weights):
    with pytest.raises(ConfigError):
        CredibilityWeights(*weights)


unit = st.floats(0, 1, allow_nan=False)
signed = st.floats(-1, 1, allow_nan=False)


@st.composite
def cred_weights(draw):
    a, b = sorted((draw(unit), draw(unit)))
    return CredibilityWeights(a, b - a, 1 - b)


@given(cred_weights(), signed, unit, unit, st.floats(0, 0.5), st.integers(0, 2))
def test_credibility_bounded_and_monotone(v, sim, act, pop, bump, which):
    base = credibility(sim, act, pop, v)
    assert 0.0 <= base.value <= 1.0
    args = [sim, act, pop]
    args[which] = min(args[which] + bump, 1.0)
    assert credibility(*args, v).value >= base.value - 1e-12
    assert isinstance(base, Credibility) and not math.isnan(base.value)
