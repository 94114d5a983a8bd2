"""Benchmark harness: accuracy grids over synthetic databases plus a scaling run.

A trial generates one database, runs the full pipeline, and judges the mined
set. Success means the mined set's true frequency equals the true maximum
n-set frequency (frequency ties count as success); when the exact check would
blow its enumeration budget, the judge falls back to comparing against the
planted set and flags the row as not oracle-verified.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from statistics import median
from typing import IO, Iterable, Sequence

from .datagen import PLANTED_COMPARISON_SET, generate, generate_planted_comparison, preset
from .driver import MineRequest, mine
from .errors import FreqsetError, NoCliqueFound, OracleBudgetExceeded
from .oracle import DEFAULT_ORACLE_BUDGET, frequency_of_set, most_frequent_nset_exact
from .pairs import count_pairs

CSV_COLUMNS = (
    "config",
    "i",
    "n",
    "trial",
    "seed",
    "success",
    "oracle_verified",
    "t_best",
    "count_ms",
    "optimize_ms",
)


@dataclass(frozen=True)
class TrialRecord:
    """One generated database, mined once and judged."""

    config: str
    i: int
    n: int
    trial: int
    seed: int
    success: bool
    oracle_verified: bool
    t_best: float | None
    count_ms: float
    optimize_ms: float


@dataclass(frozen=True)
class CellResult:
    """Aggregate of all trials sharing (i, n)."""

    config: str
    i: int
    n: int
    successes: int
    trials: int
    mean_count_ms: float
    mean_optimize_ms: float


def run_trial(
    config_name: str,
    i_size: int,
    n: int,
    trial: int,
    base_seed: int,
    solver: str = "exact",
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
    r: int = 10,
) -> TrialRecord:
    """Generate, mine, and judge a single database; never raises on a mining miss."""
    seed = base_seed + trial
    config = preset(config_name, i_size, n, seed=seed)
    db, planted = generate(config)

    t0 = time.perf_counter()
    matrix = count_pairs(db)
    count_ms = (time.perf_counter() - t0) * 1000.0

    t_best: float | None = None
    mined: tuple[int, ...] | None = None
    t0 = time.perf_counter()
    try:
        outcome = mine(matrix, MineRequest(n=n, r=r, solver=solver, seed=seed))
        mined = outcome.itemset
        t_best = float(outcome.t_best)
    except NoCliqueFound:
        pass
    optimize_ms = (time.perf_counter() - t0) * 1000.0

    success, verified = judge_trial(db, n, mined, planted, oracle_budget)
    return TrialRecord(
        config=config_name,
        i=i_size,
        n=n,
        trial=trial,
        seed=seed,
        success=success,
        oracle_verified=verified,
        t_best=t_best,
        count_ms=count_ms,
        optimize_ms=optimize_ms,
    )


def judge_trial(
    db,
    n: int,
    mined: tuple[int, ...] | None,
    planted: tuple[int, ...],
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
) -> tuple[bool, bool]:
    """(success, oracle_verified) for one mined set.

    Success requires the mined set to tie the true maximum frequency. With the
    oracle over budget the fallback is exact identity with the planted set.
    """
    if mined is None:
        return False, False
    try:
        max_count, _ = most_frequent_nset_exact(db, n, budget=oracle_budget)
    except OracleBudgetExceeded:
        return tuple(sorted(mined)) == tuple(sorted(planted)), False
    return frequency_of_set(db, mined) == max_count, True


def _trial_task(args: tuple) -> TrialRecord:
    return run_trial(*args)


def run_grid(
    config_name: str,
    i_sizes: Sequence[int],
    n_values: Sequence[int],
    trials: int = 10,
    base_seed: int = 0,
    solver: str = "exact",
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
    r: int = 10,
    workers: int = 1,
) -> list[TrialRecord]:
    """All trials of the (i_sizes x n_values) grid, sorted by (i, n, trial).

    Infeasible cells (the preset rejects the shape) are skipped rather than
    fatal. ``workers`` > 1 runs trials in separate processes; results are
    identical either way because every trial is seeded independently.
    """
    tasks = []
    for i_size in i_sizes:
        for n in n_values:
            try:
                preset(config_name, i_size, n)
            except FreqsetError:
                continue
            for trial in range(trials):
                tasks.append((config_name, i_size, n, trial, base_seed, solver, oracle_budget, r))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trial_task, tasks, chunksize=1))
    else:
        records = [_trial_task(t) for t in tasks]
    records.sort(key=lambda rec: (rec.i, rec.n, rec.trial))
    return records


def aggregate_cells(records: Iterable[TrialRecord]) -> list[CellResult]:
    by_cell: dict[tuple[str, int, int], list[TrialRecord]] = {}
    for rec in records:
        by_cell.setdefault((rec.config, rec.i, rec.n), []).append(rec)
    cells = []
    for (config, i_size, n), recs in sorted(by_cell.items()):
        cells.append(
            CellResult(
                config=config,
                i=i_size,
                n=n,
                successes=sum(r.success for r in recs),
                trials=len(recs),
                mean_count_ms=sum(r.count_ms for r in recs) / len(recs),
                mean_optimize_ms=sum(r.optimize_ms for r in recs) / len(recs),
            )
        )
    return cells


def _write_provenance(out: IO[str], meta: dict, prefix: str) -> None:
    for key in sorted(meta):
        out.write(f"{prefix} {key}={meta[key]}\n")


def write_records_csv(records: Sequence[TrialRecord], out: IO[str], meta: dict) -> None:
    """Per-trial CSV with '#'-prefixed provenance header lines."""
    _write_provenance(out, meta, "#")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = asdict(rec)
        writer.writerow(
            [
                row["config"],
                row["i"],
                row["n"],
                row["trial"],
                row["seed"],
                int(row["success"]),
                int(row["oracle_verified"]),
                "" if row["t_best"] is None else repr(row["t_best"]),
                f"{row['count_ms']:.3f}",
                f"{row['optimize_ms']:.3f}",
            ]
        )


def write_grid_markdown(
    cells: Sequence[CellResult],
    out: IO[str],
    meta: dict,
    i_sizes: Sequence[int],
    n_values: Sequence[int],
) -> None:
    """Success-count grid, one row per item-universe size, one column per n."""
    _write_provenance(out, meta, ">")
    out.write("\n")
    by_key = {(c.i, c.n): c for c in cells}
    header = "| I \\ N | " + " | ".join(str(n) for n in n_values) + " |"
    sep = "|" + "---|" * (len(n_values) + 1)
    out.write(header + "\n")
    out.write(sep + "\n")
    for i_size in i_sizes:
        row = [f"| {i_size} "]
        for n in n_values:
            cell = by_key.get((i_size, n))
            row.append(f"| {cell.successes}/{cell.trials} " if cell else "| - ")
        out.write("".join(row) + "|\n")
    out.write("\n")


def run_scaling(
    scales: Sequence[int],
    base_seed: int = 0,
    solver: str = "exact",
    r: int = 10,
    repeats: int = 3,
) -> dict:
    """Time the pipeline on the comparison database at several scales.

    Per scale: generate once, then time counting and mining ``repeats`` times
    and keep the medians. Reports per-scale correctness (mined == planted) and
    the timing ratios of every scale against the first.
    """
    results = []
    for scale in scales:
        t0 = time.perf_counter()
        db = generate_planted_comparison(seed=base_seed, scale=scale)
        gen_ms = (time.perf_counter() - t0) * 1000.0

        count_times = []
        matrix = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            matrix = count_pairs(db)
            count_times.append((time.perf_counter() - t0) * 1000.0)
        assert matrix is not None

        optimize_times = []
        outcome = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            outcome = mine(matrix, MineRequest(n=20, r=r, solver=solver, seed=base_seed))
            optimize_times.append((time.perf_counter() - t0) * 1000.0)
        assert outcome is not None

        results.append(
            {
                "scale": scale,
                "transactions": db.db_size,
                "gen_ms": round(gen_ms, 3),
                "count_ms": round(median(count_times), 3),
                "optimize_ms": round(median(optimize_times), 3),
                "correct": outcome.itemset == PLANTED_COMPARISON_SET,
                "t_best": float(outcome.t_best),
            }
        )

    report = {"solver": solver, "r": r, "repeats": repeats, "seed": base_seed, "scales": results}
    if len(results) >= 2:
        first = results[0]
        report["ratios_vs_first"] = [
            {
                "scale": res["scale"],
                "count_ratio": round(res["count_ms"] / first["count_ms"], 3),
                "optimize_ratio": round(res["optimize_ms"] / first["optimize_ms"], 3),
            }
            for res in results[1:]
        ]
    return report


def scaling_report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
