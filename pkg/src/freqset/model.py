"""Core domain types: item catalog, transaction database, pair-frequency matrix.

Items are interned strings with dense 0-based ids. All pair statistics live in
a flat upper-triangular array indexed by ``pair_index``; relative frequencies
are derived on demand and, where exactness matters, as ``Fraction`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import EmptyDatabase, InvalidItem, InvalidPair


def pair_index(i: int, j: int, k: int) -> int:
    """Map the unordered pair {i, j} to its slot in a k-item triangular array.

    Bijective onto ``0 .. k*(k-1)//2 - 1``; argument order does not matter.
    """
    if i == j:
        raise InvalidPair(f"self-pair ({i}, {i})")
    if not (0 <= i < k and 0 <= j < k):
        raise InvalidPair(f"pair ({i}, {j}) out of range for k={k}")
    if i > j:
        i, j = j, i
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


class ItemCatalog:
    """Interned item tokens with dense ids assigned in first-seen order."""

    __slots__ = ("_names", "_index")

    def __init__(self, tokens: Iterable[str] = ()) -> None:
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        for token in tokens:
            self.intern(token)

    def intern(self, token: str) -> int:
        """Return the id of ``token``, assigning the next free id if unseen."""
        token = token.strip()
        if not token:
            raise InvalidItem("empty item token")
        existing = self._index.get(token)
        if existing is not None:
            return existing
        new_id = len(self._names)
        self._names.append(token)
        self._index[token] = new_id
        return new_id

    def id_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise InvalidItem(f"unknown item token {token!r}") from None

    def name_of(self, item_id: int) -> str:
        if not 0 <= item_id < len(self._names):
            raise InvalidItem(f"item id {item_id} out of range")
        return self._names[item_id]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __repr__(self) -> str:
        return f"ItemCatalog({len(self._names)} items)"


class TransactionDb:
    """An item catalog plus transactions stored as sorted tuples of distinct ids."""

    __slots__ = ("catalog", "transactions")

    def __init__(self, catalog: ItemCatalog, transactions: Iterable[Sequence[int]]) -> None:
        k = len(catalog)
        rows: list[tuple[int, ...]] = []
        for tx in transactions:
            row = tuple(sorted(set(tx)))
            if row and (row[0] < 0 or row[-1] >= k):
                raise InvalidItem(f"transaction contains ids outside 0..{k - 1}: {row}")
            rows.append(row)
        self.catalog = catalog
        self.transactions = tuple(rows)

    @classmethod
    def from_token_lists(cls, token_lists: Iterable[Iterable[str]]) -> "TransactionDb":
        catalog = ItemCatalog()
        rows = [[catalog.intern(tok) for tok in toks] for toks in token_lists]
        return cls(catalog, rows)

    @property
    def db_size(self) -> int:
        """Number of transactions, duplicates included."""
        return len(self.transactions)

    def tokens_of(self, items: Iterable[int]) -> tuple[str, ...]:
        """Map item ids back to their tokens, sorted by id."""
        return tuple(self.catalog.name_of(i) for i in sorted(items))

    def __len__(self) -> int:
        return len(self.transactions)

    def __repr__(self) -> str:
        return f"TransactionDb({self.db_size} transactions, {len(self.catalog)} items)"


class PairFrequencyMatrix:
    """Upper-triangular co-occurrence counts for all item pairs.

    Storage is exactly ``k*(k-1)//2`` unsigned 64-bit counts regardless of the
    number of transactions behind them. Queries are symmetric in (i, j).
    """

    __slots__ = ("k", "db_size", "_counts")

    def __init__(self, k: int, db_size: int, counts: np.ndarray) -> None:
        if db_size < 1:
            raise EmptyDatabase("a pair-frequency matrix needs at least one transaction")
        expected = k * (k - 1) // 2
        arr = np.ascontiguousarray(counts, dtype=np.uint64)
        if arr.shape != (expected,):
            raise InvalidPair(f"expected {expected} pair counts for k={k}, got shape {arr.shape}")
        if arr.size and int(arr.max()) > db_size:
            raise InvalidPair("a pair count exceeds the number of transactions")
        arr.setflags(write=False)
        self.k = k
        self.db_size = db_size
        self._counts = arr

    @classmethod
    def from_pair_counts(
        cls, k: int, db_size: int, pair_counts: Mapping[tuple[int, int], int]
    ) -> "PairFrequencyMatrix":
        counts = np.zeros(k * (k - 1) // 2, dtype=np.uint64)
        for (i, j), c in pair_counts.items():
            counts[pair_index(i, j, k)] = c
        return cls(k, db_size, counts)

    @property
    def counts(self) -> np.ndarray:
        """Read-only flat view of the triangular counts."""
        return self._counts

    def count(self, i: int, j: int) -> int:
        """Co-occurrence count of the pair {i, j}."""
        return int(self._counts[pair_index(i, j, self.k)])

    def rel(self, i: int, j: int) -> float:
        """Relative co-occurrence frequency of {i, j} as a float."""
        return self.count(i, j) / self.db_size

    def rel_exact(self, i: int, j: int) -> Fraction:
        """Relative co-occurrence frequency of {i, j} as an exact rational."""
        return Fraction(self.count(i, j), self.db_size)

    def __repr__(self) -> str:
        return f"PairFrequencyMatrix(k={self.k}, db_size={self.db_size})"


@dataclass(frozen=True)
class TraceEntry:
    """One bisection step: the probed threshold and what the clique backend found."""

    iteration: int
    t: Fraction
    clique_size: int
    success: bool


@dataclass(frozen=True)
class MineOutcome:
    """Result of a mining run.

    ``itemset`` is the reported N-set, ``clique`` the full vertex set the last
    successful probe found, ``t_best`` the highest threshold that succeeded.
    """

    itemset: tuple[int, ...]
    clique: tuple[int, ...]
    t_best: Fraction
    trace: tuple[TraceEntry, ...]
    solver: str

    def to_json_dict(self, catalog: ItemCatalog | None = None) -> dict:
        """JSON-ready dict; ids are mapped back to tokens when a catalog is given."""

        def names(ids: Iterable[int]):
            if catalog is None:
                return [int(i) for i in ids]
            return [catalog.name_of(i) for i in ids]

        return {
            "itemset": names(self.itemset),
            "t_best": float(self.t_best),
            "clique": names(self.clique),
            "trace": [
                {
                    "i": entry.iteration,
                    "t": float(entry.t),
                    "clique_size": entry.clique_size,
                    "success": entry.success,
                }
                for entry in self.trace
            ],
            "solver": self.solver,
        }
