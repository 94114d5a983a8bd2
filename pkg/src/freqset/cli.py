"""Command line interface.

Subcommands: ``mine`` (run the pipeline on a transaction file), ``gen``
(write a synthetic database plus ground-truth sidecar), ``bench`` (accuracy
grid with CSV and markdown reports), ``scaling`` (timing ratios on the large
comparison database).

Exit codes: 0 on success, 1 on usage, IO, or configuration errors, 2 when
mining completes but finds no clique of the requested size.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict

from . import __version__
from .bench import (
    aggregate_cells,
    run_grid,
    run_scaling,
    scaling_report_json,
    write_grid_markdown,
    write_records_csv,
)
from .datagen import PRESET_NAMES, GenConfig, generate, preset, write_item_lines, write_sidecar
from .driver import SOLVER_NAMES, MineRequest, mine
from .errors import FreqsetError, NoCliqueFound
from .ingest import FORMATS, read_transactions
from .oracle import DEFAULT_ORACLE_BUDGET
from .pairs import count_pairs

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_CLIQUE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqset",
        description="Most-frequent fixed-size itemset search over transaction databases.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="mine the most frequent n-set from a transaction file")
    p_mine.add_argument("input", nargs="?", help="path to the transaction file")
    p_mine.add_argument("--input", dest="input_flag", help="alternative spelling of the input path")
    p_mine.add_argument("--n", type=int, required=True, help="target itemset size (>= 2)")
    p_mine.add_argument("--format", choices=FORMATS, default="items")
    p_mine.add_argument("--r", type=int, default=10, help="bisection rounds (default 10)")
    p_mine.add_argument("--solver", choices=SOLVER_NAMES, default="exact")
    p_mine.add_argument("--seed", type=int, default=0, help="seed for the qubo backend")
    p_mine.add_argument("--quiet", action="store_true", help="suppress progress messages")
    p_mine.set_defaults(func=cmd_mine)

    p_gen = sub.add_parser("gen", help="generate a synthetic database with a planted set")
    p_gen.add_argument("--out", required=True, help="output transaction file")
    p_gen.add_argument("--preset", choices=PRESET_NAMES, help="named configuration family")
    p_gen.add_argument("--i-size", type=int, required=True, help="item universe size")
    p_gen.add_argument("--n", type=int, required=True, help="planted set size")
    p_gen.add_argument("--t-size", type=int, help="transaction size (explicit mode)")
    p_gen.add_argument("--k-max", type=int, help="max distractor repetitions (explicit mode)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--quiet", action="store_true")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run an accuracy grid over synthetic databases")
    p_bench.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p_bench.add_argument(
        "--i-sizes", required=True, help="comma-separated item universe sizes, e.g. 25,50,100"
    )
    p_bench.add_argument(
        "--n-values", required=True, help="comma-separated target sizes, e.g. 4,6,8"
    )
    p_bench.add_argument("--trials", type=int, default=10, help="databases per cell (default 10)")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--solver", choices=SOLVER_NAMES, default="exact")
    p_bench.add_argument("--r", type=int, default=10)
    p_bench.add_argument("--oracle-budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--report", required=True, help="report base path; writes .csv and .md")
    p_bench.add_argument("--quiet", action="store_true")
    p_bench.set_defaults(func=cmd_bench)

    p_scale = sub.add_parser("scaling", help="time the pipeline at growing database sizes")
    p_scale.add_argument("--scales", default="1,4", help="comma-separated scale factors")
    p_scale.add_argument("--seed", type=int, default=0)
    p_scale.add_argument("--solver", choices=SOLVER_NAMES, default="exact")
    p_scale.add_argument("--r", type=int, default=10)
    p_scale.add_argument("--repeats", type=int, default=3)
    p_scale.add_argument("--report", help="optional path for the JSON report")
    p_scale.add_argument("--quiet", action="store_true")
    p_scale.set_defaults(func=cmd_scaling)

    # stdout is always machine-readable; the flag exists so scripts may state it
    for p in (p_mine, p_gen, p_bench, p_scale):
        p.add_argument("--json", action="store_true", help="emit JSON on stdout (the default)")

    return parser


def _say(args, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _parse_int_list(text: str, label: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise FreqsetError(f"bad {label} list {text!r}") from exc
    if not values:
        raise FreqsetError(f"empty {label} list")
    return values


def cmd_mine(args) -> int:
    if (args.input is None) == (args.input_flag is None):
        raise FreqsetError("give the input path either positionally or via --input, not both")
    path = args.input if args.input is not None else args.input_flag
    t0 = time.perf_counter()
    db = read_transactions(path, args.format)
    ingest_ms = (time.perf_counter() - t0) * 1000.0
    _say(args, f"parsed {db.db_size} transactions over {len(db.catalog)} items")

    t0 = time.perf_counter()
    matrix = count_pairs(db)
    count_ms = (time.perf_counter() - t0) * 1000.0
    _say(args, f"counted {matrix.counts.size} pair slots")

    request = MineRequest(n=args.n, r=args.r, solver=args.solver, seed=args.seed)
    t0 = time.perf_counter()
    try:
        outcome = mine(matrix, request)
    except NoCliqueFound as exc:
        doc = {
            "error": str(exc),
            "trace": [
                {"i": e.iteration, "t": float(e.t), "clique_size": e.clique_size, "success": e.success}
                for e in exc.trace
            ],
        }
        print(json.dumps(doc, indent=2))
        return EXIT_NO_CLIQUE
    optimize_ms = (time.perf_counter() - t0) * 1000.0

    doc = outcome.to_json_dict(db.catalog)
    doc["timings"] = {
        "ingest_ms": round(ingest_ms, 3),
        "count_ms": round(count_ms, 3),
        "optimize_ms": round(optimize_ms, 3),
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.preset:
        config = preset(args.preset, args.i_size, args.n, seed=args.seed)
    else:
        if args.t_size is None or args.k_max is None:
            raise FreqsetError("explicit mode needs --t-size and --k-max (or use --preset)")
        config = GenConfig(
            i_size=args.i_size, n=args.n, t_size=args.t_size, k_max=args.k_max, seed=args.seed
        )
    db, planted = generate(config)
    write_item_lines(db, args.out)
    sidecar = f"{args.out}.meta.json"
    write_sidecar(sidecar, planted, db)
    _say(args, f"wrote {db.db_size} transactions to {args.out} (ground truth in {sidecar})")
    summary = {
        "out": args.out,
        "sidecar": sidecar,
        "transactions": db.db_size,
        "items": len(db.catalog),
        "planted": [int(i) for i in planted],
        "config": asdict(config),
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_bench(args) -> int:
    i_sizes = _parse_int_list(args.i_sizes, "i-sizes")
    n_values = _parse_int_list(args.n_values, "n-values")
    records = run_grid(
        args.preset,
        i_sizes,
        n_values,
        trials=args.trials,
        base_seed=args.seed,
        solver=args.solver,
        oracle_budget=args.oracle_budget,
        r=args.r,
        workers=args.workers,
    )
    meta = {
        "tool": f"freqset {__version__}",
        "preset": args.preset,
        "solver": args.solver,
        "trials": args.trials,
        "seed": args.seed,
        "r": args.r,
        "success_criterion": "mined set ties the true maximum n-set frequency",
        "fallback_criterion": "planted-set identity when the exact check is over budget",
    }
    if args.preset == "config1":
        meta["config1_note"] = "reconstructed parameters"
    csv_path = f"{args.report}.csv"
    md_path = f"{args.report}.md"
    with open(csv_path, "w", encoding="utf-8") as fh:
        write_records_csv(records, fh, meta)
    cells = aggregate_cells(records)
    with open(md_path, "w", encoding="utf-8") as fh:
        write_grid_markdown(cells, fh, meta, i_sizes, n_values)
    _say(args, f"wrote {csv_path} and {md_path}")
    summary = {
        "cells": [
            {"i": c.i, "n": c.n, "successes": c.successes, "trials": c.trials} for c in cells
        ],
        "csv": csv_path,
        "markdown": md_path,
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_scaling(args) -> int:
    scales = _parse_int_list(args.scales, "scales")
    report = run_scaling(
        scales, base_seed=args.seed, solver=args.solver, r=args.r, repeats=args.repeats
    )
    text = scaling_report_json(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
        _say(args, f"wrote {args.report}")
    print(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for the no-clique outcome
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except NoCliqueFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CLIQUE
    except FreqsetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
