"""Shared brute-force oracles, kept independent of the library internals."""

from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest


def brute_force_matching(gt, pred, threshold):
    """Maximum one-to-one matching size by exhaustive search (small inputs)."""
    gt, pred = list(gt), list(pred)
    if not gt or not pred:
        return 0
    short, long_ = (gt, pred) if len(gt) <= len(pred) else (pred, gt)
    best = 0
    for perm in permutations(range(len(long_)), len(short)):
        count = sum(
            1
            for i, j in enumerate(perm)
            if abs(short[i] - long_[j]) <= threshold
        )
        best = max(best, count)
    return best


def brute_force_assignment(matrix):
    """Optimal total of an injective row-to-column assignment, maximizing."""
    matrix = np.asarray(matrix, dtype=float)
    n, m = matrix.shape
    if n <= m:
        return max(
            sum(matrix[i, perm[i]] for i in range(n))
            for perm in permutations(range(m), n)
        )
    return max(
        sum(matrix[perm[j], j] for j in range(m))
        for perm in permutations(range(n), m)
    )


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240817))
