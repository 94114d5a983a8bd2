"""Exact ground truth, computed independently of the mining pipeline.

``frequency_of_set`` scans transactions directly. ``most_frequent_nset_exact``
enumerates every n-subset of every transaction, so its answer is the true
top-1 regardless of what the pair-based method reports.
``objective_bruteforce`` exhausts all n-sets of items against the pair matrix
to maximize the min-pair objective the miner optimizes.

Both enumerators take an explicit candidate budget and refuse up front when
the instance would exceed it.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .errors import (
    EmptyDatabase,
    InvalidItem,
    NTooLarge,
    OracleBudgetExceeded,
    SetTooSmall,
)
from .model import PairFrequencyMatrix, TransactionDb

DEFAULT_ORACLE_BUDGET = 10_000_000


def frequency_of_set(db: TransactionDb, items: Iterable[int]) -> int:
    """Number of transactions containing every item of ``items``."""
    wanted = frozenset(items)
    if not wanted:
        raise SetTooSmall("frequency of the empty set is not defined here")
    k = len(db.catalog)
    for item in wanted:
        if not 0 <= item < k:
            raise InvalidItem(f"item id {item} out of range for {k} items")
    return sum(1 for tx in db.transactions if wanted.issubset(tx))


def most_frequent_nset_exact(
    db: TransactionDb, n: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[int, list[tuple[int, ...]]]:
    """True maximum frequency over all n-sets, with every maximizer.

    Enumerates the n-subsets of each transaction, so only sets that occur at
    least once are candidates; returns (0, []) when no transaction has n
    items. The candidate total (before deduplication) is checked against
    ``budget`` first.
    """
    if db.db_size == 0:
        raise EmptyDatabase("empty database")
    if n < 1:
        raise SetTooSmall("set size must be at least 1")

    work = sum(comb(len(tx), n) for tx in db.transactions if len(tx) >= n)
    if work > budget:
        raise OracleBudgetExceeded(f"{work} candidate subsets exceed the budget of {budget}")
    if work == 0:
        return 0, []

    # duplicate transactions contribute identical subsets; enumerate once
    groups = Counter(db.transactions)
    rows: list[tuple[int, ...]] = []
    weights: list[int] = []
    for tx, mult in groups.items():
        if len(tx) < n:
            continue
        before = len(rows)
        rows.extend(combinations(tx, n))
        weights.extend([mult] * (len(rows) - before))

    k = len(db.catalog)
    dtype = np.int16 if k <= np.iinfo(np.int16).max else np.int32
    arr = np.asarray(rows, dtype=dtype)
    w = np.asarray(weights, dtype=np.float64)
    if k**n < 2**63:
        # rows are sorted tuples, so a base-k scalar key is a faithful stand-in
        keys = arr[:, 0].astype(np.int64)
        for col in range(1, n):
            keys = keys * k + arr[:, col]
        uniq_keys, first_pos, inverse = np.unique(keys, return_index=True, return_inverse=True)
        totals = np.bincount(inverse, weights=w)
        best = int(totals.max())
        winner_rows = arr[first_pos[totals == best]]
    else:
        uniq, inverse = np.unique(arr, axis=0, return_inverse=True)
        totals = np.bincount(inverse.reshape(-1), weights=w)
        best = int(totals.max())
        winner_rows = uniq[totals == best]
    winners = sorted(tuple(int(v) for v in row) for row in winner_rows)
    return best, winners


def objective_bruteforce(
    matrix: PairFrequencyMatrix, n: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> tuple[int, list[tuple[int, ...]]]:
    """Exhaustive maximum of the min-pair count over all n-sets of items.

    Returns the best count and every optimal n-set in lexicographic order.
    """
    if n < 2:
        raise SetTooSmall("the min-pair objective needs sets of at least 2 items")
    k = matrix.k
    if n > k:
        raise NTooLarge(f"requested n={n} with only {k} items")
    total = comb(k, n)
    if total > budget:
        raise OracleBudgetExceeded(f"{total} candidate sets exceed the budget of {budget}")

    counts = matrix.counts.tolist()
    best = -1
    winners: list[tuple[int, ...]] = []
    for combo in combinations(range(k), n):
        lowest: int | None = None
        for a in range(n - 1):
            i = combo[a]
            base = i * (2 * k - i - 1) // 2 - i - 1
            for b in range(a + 1, n):
                c = counts[base + combo[b]]
                if lowest is None or c < lowest:
                    lowest = c
            if lowest is not None and lowest < best:
                break
        else:
            if lowest is None:
                continue
            if lowest > best:
                best = lowest
                winners = [combo]
            elif lowest == best:
                winners.append(combo)
    return best, winners
