"""Synthetic benchmark databases with one planted frequent set.

A generated database contains the planted n-set repeated a fixed number of
times, a collection of distinct random distractor n-sets each repeated a
bounded random number of times, and per-transaction uniform filler items that
pad every transaction to the same size. The planted repetition count exceeds
the distractor bound, so the planted set is the intended winner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import InvalidGenConfig
from .model import ItemCatalog, TransactionDb

PLANTED_REPS_DEFAULT = 200
DISTRACTOR_COUNT_DEFAULT = 99

PRESET_NAMES = ("config1", "config2", "config3", "config4")

# the planted set of the large comparison database, as item ids
PLANTED_COMPARISON_SET = tuple(range(20))


@dataclass(frozen=True)
class GenConfig:
    """Shape of one synthetic database.

    ``i_size`` items, every transaction exactly ``t_size`` items, planted set
    of size ``n`` repeated ``planted_reps`` times, ``distractor_count``
    distinct random n-sets repeated uniformly between 1 and ``k_max`` times.
    """

    i_size: int
    n: int
    t_size: int
    k_max: int
    planted_reps: int = PLANTED_REPS_DEFAULT
    distractor_count: int = DISTRACTOR_COUNT_DEFAULT
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.n <= self.t_size <= self.i_size:
            raise InvalidGenConfig(
                f"need 1 <= n <= t_size <= i_size, got n={self.n}, "
                f"t_size={self.t_size}, i_size={self.i_size}"
            )
        if self.k_max < 1:
            raise InvalidGenConfig("k_max must be at least 1")
        if self.planted_reps <= self.k_max:
            raise InvalidGenConfig(
                f"planted_reps={self.planted_reps} must exceed k_max={self.k_max}, "
                "otherwise a distractor can out-repeat the planted set"
            )
        if self.distractor_count < 0:
            raise InvalidGenConfig("distractor_count cannot be negative")

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


def preset(name: str, i_size: int, n: int, seed: int = 0) -> GenConfig:
    """Named benchmark families; each fixes transaction size and k_max.

    config1: t_size = n,          k_max = 180
    config2: t_size = n,          k_max = 110
    config3: t_size = 15,         k_max = 180  (requires n <= 15)
    config4: t_size = ceil(3n/2), k_max = 180
    """
    if name == "config1":
        t_size, k_max = n, 180
    elif name == "config2":
        t_size, k_max = n, 110
    elif name == "config3":
        t_size, k_max = 15, 180
    elif name == "config4":
        t_size, k_max = (3 * n + 1) // 2, 180
    else:
        raise InvalidGenConfig(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    return GenConfig(i_size=i_size, n=n, t_size=t_size, k_max=k_max, seed=seed)


def _distinct_nsets(rng: np.random.Generator, k: int, n: int, count: int, taken: set) -> list:
    sets: list[tuple[int, ...]] = []
    attempts = 0
    limit = 200 * (count + 1)
    while len(sets) < count:
        attempts += 1
        if attempts > limit:
            raise InvalidGenConfig(
                f"could not draw {count} distinct {n}-sets from {k} items; "
                "the item universe is too small for this configuration"
            )
        cand = tuple(sorted(rng.choice(k, size=n, replace=False).tolist()))
        if cand in taken:
            continue
        taken.add(cand)
        sets.append(cand)
    return sets


def generate(config: GenConfig) -> tuple[TransactionDb, tuple[int, ...]]:
    """Build the database described by ``config``; returns (db, planted ids).

    Fully deterministic in the seed: cores, repetition counts, filler, and
    the final shuffle all come from one seeded generator.
    """
    rng = np.random.default_rng(config.seed)
    k = config.i_size
    planted = tuple(sorted(rng.choice(k, size=config.n, replace=False).tolist()))
    taken = {planted}
    distractors = _distinct_nsets(rng, k, config.n, config.distractor_count, taken)

    cores = [planted] + distractors
    reps = [config.planted_reps]
    if distractors:
        reps += rng.integers(1, config.k_max + 1, size=len(distractors)).tolist()

    fill = config.t_size - config.n
    all_items = np.arange(k)
    rows: list[tuple[int, ...]] = []
    for core, rep in zip(cores, reps):
        if fill == 0:
            rows.extend([core] * rep)
            continue
        complement = np.setdiff1d(all_items, np.asarray(core, dtype=np.int64))
        for _ in range(rep):
            extra = rng.choice(complement, size=fill, replace=False)
            rows.append(tuple(sorted(core + tuple(int(e) for e in extra))))

    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    catalog = ItemCatalog(str(i + 1) for i in range(k))
    return TransactionDb(catalog, rows), planted


def generate_planted_comparison(seed: int = 0, scale: int = 1) -> TransactionDb:
    """Large mixed database: random 22-item transactions plus a planted 20-set.

    At scale 1: 24,000 uniform-random 22-sets over 250 items and 1,000 copies
    of the planted set (items with ids 0..19). ``scale`` multiplies both
    counts; item universe and transaction width stay fixed.
    """
    if scale < 1:
        raise InvalidGenConfig("scale must be at least 1")
    rng = np.random.default_rng(seed)
    k, width = 250, 22
    n_random = 24_000 * scale
    n_planted = 1_000 * scale

    rows: list[tuple[int, ...]] = []
    block = 16_384
    remaining = n_random
    while remaining:
        m = min(block, remaining)
        keys = rng.random((m, k))
        idx = np.argpartition(keys, width, axis=1)[:, :width]
        idx.sort(axis=1)
        rows.extend(map(tuple, idx.tolist()))
        remaining -= m

    rows.extend([PLANTED_COMPARISON_SET] * n_planted)
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    catalog = ItemCatalog(str(i + 1) for i in range(k))
    return TransactionDb(catalog, rows)


def write_item_lines(db: TransactionDb, path: str | Path) -> None:
    """Write the database in the comma-separated format ``parse_item_lines`` reads."""
    with open(path, "w", encoding="utf-8") as fh:
        for tx in db.transactions:
            fh.write(",".join(db.catalog.name_of(i) for i in tx))
            fh.write("\n")


def write_sidecar(path: str | Path, planted: tuple[int, ...], db: TransactionDb) -> None:
    """Write ground-truth metadata next to a generated file (JSON)."""
    doc = {
        "planted": [int(i) for i in planted],
        "planted_tokens": [db.catalog.name_of(i) for i in planted],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
