"""Brute-force reference for the ordered-pair similarity.

The oracle walks every unordered pair of common subjects once and compares
signs directly, with no pair sets involved. Pairs tied in both vectors count
as agreement, pairs tied in only one count as half a disagreement, which is
what the symmetric difference of strict-order pair sets measures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from gridtrust.credibility import kendall_similarity
from gridtrust.ledger import RatingVector


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def pair_count_similarity(x: Mapping[str, float], y: Mapping[str, float]) -> float:
    """``(concordant - discordant + tied_in_both) / (n (n - 1) / 2)`` over common keys."""
    common = sorted(x.keys() & y.keys())
    n = len(common)
    if n < 2:
        raise ValueError("need at least two common subjects")
    concordant = discordant = both_tied = 0
    for i in range(n):
        for j in range(i + 1, n):
            a, b = common[i], common[j]
            sx, sy = _sign(x[a] - x[b]), _sign(y[a] - y[b])
            if sx == 0 and sy == 0:
                both_tied += 1
            elif sx * sy > 0:
                concordant += 1
            elif sx * sy < 0:
                discordant += 1
    return (concordant - discordant + both_tied) / (n * (n - 1) // 2)


@dataclass
class OracleResult:
    passed: int = 0
    failed: int = 0

    def check(self, x: dict, y: dict) -> None:
        got = kendall_similarity(RatingVector("x", x, 0.0), RatingVector("y", y, 0.0))
        if got == pair_count_similarity(x, y):
            self.passed += 1
        else:
            self.failed += 1


def run_kendall_oracle(n_max: int = 8, cases: int = 200, seed: int = 0, exhaustive_max: int = 5) -> OracleResult:
    """Compare ``kendall_similarity`` with the pair-counting oracle.

    Every pair of strict orders is checked for n <= ``exhaustive_max``;
    ``cases`` random strict-order pairs are drawn for each larger n up to
    ``n_max``, plus ``cases`` random vectors with ties.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    result = OracleResult()
    for n in range(2, min(n_max, exhaustive_max) + 1):
        names = [f"s{i}" for i in range(n)]
        perms = list(itertools.permutations(range(n)))
        for p in perms:
            x = dict(zip(names, p))
            for q in perms:
                result.check(x, dict(zip(names, q)))
    for n in range(exhaustive_max + 1, n_max + 1):
        names = [f"s{i}" for i in range(n)]
        for _ in range(cases):
            result.check(dict(zip(names, rng.permutation(n).tolist())), dict(zip(names, rng.permutation(n).tolist())))
    for _ in range(cases):
        n = int(rng.integers(2, max(n_max, 2) + 1))
        names = [f"s{i}" for i in range(n)]
        levels = int(rng.integers(1, n + 1))
        x = dict(zip(names, rng.integers(0, levels, n).tolist()))
        y = dict(zip(names, rng.integers(0, levels, n).tolist()))
        result.check(x, y)
    return result
