"""Co-occurrence counting over all item pairs.

One pass over the database; each transaction of length m contributes its
m*(m-1)/2 pairs. Counting is vectorized by grouping transactions of equal
length and accumulating flat triangular indices with ``np.bincount``.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from typing import IO, Iterable, NamedTuple

import numpy as np

from .errors import BudgetExceeded, EmptyDatabase, SetTooSmall
from .model import PairFrequencyMatrix, TransactionDb

DEFAULT_ENTRY_BUDGET = 2**31

# Cap on flat pair indices materialized per chunk, keeps peak memory flat.
_CHUNK_CELLS = 4_000_000


class PairStat(NamedTuple):
    count: int
    relative: float


def count_pairs(db: TransactionDb, entry_budget: int = DEFAULT_ENTRY_BUDGET) -> PairFrequencyMatrix:
    """Count, for every item pair, how many transactions contain both items.

    The dense triangular layout needs k*(k-1)//2 slots; the call is rejected
    up front when that exceeds ``entry_budget``.
    """
    if db.db_size == 0:
        raise EmptyDatabase("cannot count pairs of an empty database")
    k = len(db.catalog)
    n_entries = k * (k - 1) // 2
    if n_entries > entry_budget:
        raise BudgetExceeded(f"{n_entries} pair slots exceed the entry budget of {entry_budget}")
    counts = np.zeros(n_entries, dtype=np.uint64)

    by_len: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for tx in db.transactions:
        if len(tx) >= 2:
            by_len[len(tx)].append(tx)

    for length in sorted(by_len):
        txs = by_len[length]
        iu, ju = np.triu_indices(length, k=1)
        pairs_per_tx = length * (length - 1) // 2
        chunk = max(1, _CHUNK_CELLS // pairs_per_tx)
        for start in range(0, len(txs), chunk):
            block = np.asarray(txs[start : start + chunk], dtype=np.int64)
            lo = block[:, iu]
            hi = block[:, ju]
            flat = lo * (2 * k - lo - 1) // 2 + (hi - lo - 1)
            counts += np.bincount(flat.ravel(), minlength=n_entries).astype(np.uint64)

    return PairFrequencyMatrix(k, db.db_size, counts)


def min_pair_frequency(matrix: PairFrequencyMatrix, items: Iterable[int]) -> PairStat:
    """Minimum co-occurrence over all pairs inside ``items``.

    This is the quantity the miner maximizes; for a pair it equals the pair's
    own count.
    """
    ids = sorted(set(items))
    if len(ids) < 2:
        raise SetTooSmall("min pair frequency needs at least two items")
    best = min(matrix.count(i, j) for i, j in combinations(ids, 2))
    return PairStat(best, best / matrix.db_size)


def dump_pairs_csv(matrix: PairFrequencyMatrix, out: IO[str]) -> None:
    """Write ``i,j,count,rel`` rows for every pair with a nonzero count."""
    out.write("i,j,count,rel\n")
    k = matrix.k
    db = matrix.db_size
    flat = matrix.counts
    idx = 0
    for i in range(k):
        for j in range(i + 1, k):
            c = int(flat[idx])
            idx += 1
            if c:
                out.write(f"{i},{j},{c},{c / db}\n")
