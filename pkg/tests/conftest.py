"""Shared fixtures and independent brute-force helpers used as test oracles."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from freqset.model import ItemCatalog, PairFrequencyMatrix, TransactionDb
from freqset.pairs import count_pairs

# Seven transactions over four items; small enough to verify every number by
# hand. The most frequent 3-set is {1,2,4} (twice), while the best min-pair
# 3-set is {1,2,3}, so the two notions of "best" disagree on purpose.
SMALL_DB_LINES = [
    "1,2,4",
    "1,2,4",
    "1,2,3",
    "1,3",
    "1,3",
    "2,3",
    "2,3,4",
]


@pytest.fixture
def small_db():
    from freqset.ingest import parse_item_lines

    return parse_item_lines(SMALL_DB_LINES)


@pytest.fixture
def small_matrix(small_db):
    return count_pairs(small_db)


def random_db(rng: np.random.Generator, k: int, n_tx: int, p: float) -> TransactionDb:
    """Bernoulli(p) inclusion per item per transaction; empty rows allowed."""
    rows = []
    for _ in range(n_tx):
        mask = rng.random(k) < p
        rows.append(tuple(int(i) for i in np.nonzero(mask)[0]))
    catalog = ItemCatalog(str(i) for i in range(k))
    return TransactionDb(catalog, rows)


def random_matrix(rng: np.random.Generator, k: int, db_size: int) -> PairFrequencyMatrix:
    counts = rng.integers(0, db_size + 1, size=k * (k - 1) // 2).astype(np.uint64)
    return PairFrequencyMatrix(k, db_size, counts)


def recount_pairs_naive(db: TransactionDb) -> dict[tuple[int, int], int]:
    """Reference pair counter: nested loops, no shared code with the fast path."""
    counts: dict[tuple[int, int], int] = {}
    for tx in db.transactions:
        for i, j in combinations(tx, 2):
            counts[(i, j)] = counts.get((i, j), 0) + 1
    return counts


def max_clique_size_bruteforce(graph) -> int:
    """Exhaustive maximum clique size via subset DP. Only sensible for k <= 20."""
    k = graph.k
    if k == 0:
        return 0
    adj = [graph.neighbors_mask(v) for v in range(k)]
    is_clique_mask = bytearray(1 << k)
    is_clique_mask[0] = 1
    best = 0
    for m in range(1, 1 << k):
        low = m & -m
        v = low.bit_length() - 1
        rest = m ^ low
        if is_clique_mask[rest] and (rest & ~adj[v]) == 0:
            is_clique_mask[m] = 1
            size = m.bit_count()
            if size > best:
                best = size
    return best
