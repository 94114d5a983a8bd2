"""Acceptance gate: one test per acceptance criterion.

Every test prints a `[criterion N] PASS/FAIL` line on the real stdout before
asserting, so a full run reads as a checklist. Statistical criteria use fixed
seeds; tolerances are stated next to each assertion.
"""

from __future__ import annotations

import json
import os
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from freqset.anneal import (
    AnnealParams,
    build_qubo,
    decode_selection,
    solve_qubo_annealing,
)
from freqset.bench import run_scaling, run_trial
from freqset.cli import main as cli_main
from freqset.datagen import PLANTED_COMPARISON_SET, generate_planted_comparison
from freqset.driver import MineRequest, mine
from freqset.errors import NoCliqueFound
from freqset.graph import is_clique, max_clique_exact, threshold_graph
from freqset.ingest import parse_item_lines, parse_word_lines
from freqset.model import PairFrequencyMatrix
from freqset.oracle import (
    frequency_of_set,
    most_frequent_nset_exact,
    objective_bruteforce,
)
from freqset.pairs import count_pairs, min_pair_frequency

from conftest import SMALL_DB_LINES, random_db

ACCEPT_SEED = 20260816


@pytest.fixture
def report_line(capsys):
    def _report(cid: str, ok: bool | None, detail: str = "") -> None:
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        with capsys.disabled():
            print(f"[criterion {cid}] {status} {detail}".rstrip())

    return _report


@pytest.fixture(scope="module")
def warm_annealer():
    # pay the jit compilation outside any timed section
    matrix = PairFrequencyMatrix.from_pair_counts(2, 2, {(0, 1): 2})
    solve_qubo_annealing(build_qubo(matrix, 0.5), AnnealParams(restarts=1, sweeps=1))


def test_criterion_01_worked_example_end_to_end(report_line):
    """The 7-transaction example: oracle, miner (both backends), and objective."""
    t0 = time.perf_counter()
    db = parse_item_lines(SMALL_DB_LINES)
    matrix = count_pairs(db)

    best_freq, freq_winners = most_frequent_nset_exact(db, 3)
    top_tokens = {db.tokens_of(w) for w in freq_winners}

    out_exact = mine(matrix, MineRequest(n=3, r=10, solver="exact"))
    mined_exact = db.tokens_of(out_exact.itemset)

    obj_best, obj_winners = objective_bruteforce(matrix, 3)
    elapsed = time.perf_counter() - t0

    ok = (
        best_freq == 2
        and top_tokens == {("1", "2", "4")}
        and mined_exact == ("1", "2", "3")
        and out_exact.t_best == Fraction(219, 512)
        and obj_best == 3
        and [db.tokens_of(w) for w in obj_winners] == [("1", "2", "3")]
        and min_pair_frequency(matrix, out_exact.itemset).count == 3
        and elapsed < 1.0
    )
    report_line(
        "1",
        ok,
        f"oracle={sorted(top_tokens)} mined={mined_exact} "
        f"t_best={float(out_exact.t_best)} elapsed={elapsed:.3f}s",
    )
    assert ok


def test_criterion_01b_worked_example_qubo_backend(report_line, warm_annealer):
    """Same example through the annealing backend."""
    db = parse_item_lines(SMALL_DB_LINES)
    matrix = count_pairs(db)
    out = mine(matrix, MineRequest(n=3, r=10, solver="qubo", seed=0))
    ok = db.tokens_of(out.itemset) == ("1", "2", "3") and out.t_best == Fraction(219, 512)
    report_line("1b", ok, f"mined={db.tokens_of(out.itemset)} t_best={float(out.t_best)}")
    assert ok


def test_criterion_02_qubo_minima_are_maximum_cliques(report_line):
    """200 random instances, k <= 16: full enumeration of every bit vector."""
    rng = np.random.default_rng(ACCEPT_SEED)
    failures = 0
    for _ in range(200):
        k = int(rng.integers(2, 17))
        db_size = int(rng.integers(1, 60))
        counts = rng.integers(0, db_size + 1, size=k * (k - 1) // 2).astype(np.uint64)
        matrix = PairFrequencyMatrix(k, db_size, counts)
        qden = 2 ** int(rng.integers(1, 9))
        t = Fraction(int(rng.integers(0, qden + 1)), qden)

        q = build_qubo(matrix, t)
        graph = threshold_graph(matrix, t)
        clique_size = max_clique_exact(graph).size

        bits = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)
        energies = np.einsum("ni,ij,nj->n", bits, q.to_dense(), bits)
        min_energy = int(energies.min())

        sound = min_energy == -clique_size
        for row in bits[energies == min_energy]:
            sel = decode_selection(row)
            sound = sound and is_clique(graph, sel) and len(sel) == clique_size
        if not sound:
            failures += 1
    ok = failures == 0
    report_line("2", ok, f"{200 - failures}/200 instances sound")
    assert ok


def test_criterion_03_annealer_matches_exact_minimum(report_line, warm_annealer):
    """>= 95 of 100 random instances (k <= 20) solved to the exact optimum."""
    rng = np.random.default_rng(ACCEPT_SEED)
    hits = 0
    for inst in range(100):
        k = int(rng.integers(3, 21))
        db_size = int(rng.integers(1, 64))
        counts = rng.integers(0, db_size + 1, size=k * (k - 1) // 2).astype(np.uint64)
        matrix = PairFrequencyMatrix(k, db_size, counts)
        qden = 2 ** int(rng.integers(1, 8))
        t = Fraction(int(rng.integers(0, qden + 1)), qden)
        graph = threshold_graph(matrix, t)
        exact_size = max_clique_exact(graph).size

        q = build_qubo(matrix, t)
        x = solve_qubo_annealing(q, AnnealParams(seed=1000 + inst))
        sel = decode_selection(x)
        assert is_clique(graph, sel)
        if len(sel) == exact_size:
            hits += 1
    ok = hits >= 95
    report_line("3", ok, f"{hits}/100 optimal (threshold 95)")
    assert ok


@pytest.fixture(scope="module")
def bracket_instances():
    """100 random databases with their mining outcomes and true best thresholds."""
    rng = np.random.default_rng(424242)
    eps = Fraction(1, 2**10)
    instances = []
    for _ in range(100):
        k = int(rng.integers(4, 15))
        n_tx = int(rng.integers(20, 401))
        db = random_db(rng, k, n_tx, float(rng.uniform(0.15, 0.6)))
        matrix = count_pairs(db)
        n = int(rng.integers(2, min(6, k + 1)))

        rels = sorted(
            {Fraction(int(c), n_tx) for c in matrix.counts} | {Fraction(0)}, reverse=True
        )
        t_star = next(
            cand
            for cand in rels
            if max_clique_exact(threshold_graph(matrix, cand)).size >= n
        )
        try:
            outcome = mine(matrix, MineRequest(n=n, r=10, solver="exact"))
        except NoCliqueFound:
            outcome = None
        instances.append((matrix, n, t_star, outcome, eps))
    return instances


def test_criterion_04_bisection_brackets_the_true_threshold(report_line, bracket_instances):
    """0 <= t* - t_best < 2^-10 whenever mining succeeds; t* < 2^-10 otherwise."""
    bad = 0
    mined = 0
    for matrix, n, t_star, outcome, eps in bracket_instances:
        if outcome is None:
            if not t_star < eps:
                bad += 1
            continue
        mined += 1
        gap = t_star - outcome.t_best
        if not (0 <= gap < eps):
            bad += 1
    ok = bad == 0
    report_line("4", ok, f"{len(bracket_instances)} instances, {mined} mined, {bad} violations")
    assert ok


def test_criterion_05_mined_sets_achieve_the_exhaustive_optimum(report_line, bracket_instances):
    """min-pair count of the mined set equals the brute-forced objective optimum."""
    bad = 0
    checked = 0
    for matrix, n, _t_star, outcome, _eps in bracket_instances:
        if outcome is None:
            continue
        checked += 1
        best_count, _ = objective_bruteforce(matrix, n)
        if min_pair_frequency(matrix, outcome.itemset).count != best_count:
            bad += 1
    ok = bad == 0 and checked > 0
    report_line("5", ok, f"{checked} mined instances, {bad} mismatches")
    assert ok


def test_criterion_06_set_frequency_is_pair_bounded(report_line):
    """500 random databases: F(s) <= min-pair(s) for sampled itemsets."""
    rng = np.random.default_rng(ACCEPT_SEED + 6)
    violations = 0
    checked = 0
    for _ in range(500):
        k = int(rng.integers(3, 12))
        db = random_db(rng, k, int(rng.integers(5, 60)), float(rng.uniform(0.2, 0.8)))
        matrix = count_pairs(db)
        for _ in range(8):
            size = int(rng.integers(2, min(5, k) + 1))
            items = rng.choice(k, size=size, replace=False).tolist()
            checked += 1
            if frequency_of_set(db, items) > min_pair_frequency(matrix, items).count:
                violations += 1
    ok = violations == 0
    report_line("6", ok, f"{checked} sampled sets across 500 databases, {violations} violations")
    assert ok


def test_criterion_07_planted_comparison_database(report_line):
    """25,000 transactions over 250 items: recover the planted 20-set fast."""
    t0 = time.perf_counter()
    db = generate_planted_comparison(seed=ACCEPT_SEED)
    matrix = count_pairs(db)
    outcome = mine(matrix, MineRequest(n=20, r=10, solver="exact"))
    elapsed = time.perf_counter() - t0

    ok = (
        db.db_size == 25000
        and len(db.catalog) == 250
        and matrix.counts.shape == (31125,)
        and outcome.itemset == PLANTED_COMPARISON_SET
        and db.tokens_of(outcome.itemset) == tuple(str(i + 1) for i in range(20))
        and elapsed < 60.0
    )
    report_line(
        "7",
        ok,
        f"mined={outcome.itemset == PLANTED_COMPARISON_SET} "
        f"slots={matrix.counts.size} elapsed={elapsed:.2f}s (limit 60s)",
    )
    assert ok


def test_criterion_08_scaling_ratios(report_line):
    """4x transactions: optimization time within 1.5x, counting at least 2x."""
    report = run_scaling([1, 4], base_seed=ACCEPT_SEED, solver="exact", repeats=3)
    ratios = report["ratios_vs_first"][0]
    all_correct = all(s["correct"] for s in report["scales"])
    ok = all_correct and ratios["optimize_ratio"] <= 1.5 and ratios["count_ratio"] >= 2.0
    report_line(
        "8",
        ok,
        f"count_ratio={ratios['count_ratio']} (>=2) "
        f"optimize_ratio={ratios['optimize_ratio']} (<=1.5) correct={all_correct}",
    )
    assert ok


@pytest.fixture(scope="module")
def grid_cells():
    """All accuracy cells the grid criteria consult, computed once.

    The config3 N=4 cell gets a raised oracle budget so success is judged by
    true frequency ties; wider cells fall back to planted identity as the
    harness documents.
    """
    cells: dict[tuple[str, int, int], int] = {}

    def run_cell(config: str, i_size: int, n: int, budget: int) -> None:
        successes = 0
        for trial in range(10):
            rec = run_trial(config, i_size, n, trial, base_seed=ACCEPT_SEED, oracle_budget=budget)
            successes += rec.success
        cells[(config, i_size, n)] = successes

    run_cell("config3", 200, 4, 20_000_000)
    for n in (6, 8, 10, 12):
        run_cell("config3", 200, n, 10_000_000)
    for i_size in (25, 50, 100, 200):
        run_cell("config2", i_size, 10, 10_000_000)
    run_cell("config2", 25, 6, 10_000_000)
    return cells


def test_criterion_09a_small_sets_in_wide_transactions(report_line, grid_cells):
    """Reference grid value 0/10 for config3, I=200, N=4 (tolerance 2)."""
    successes = grid_cells[("config3", 200, 4)]
    ok = abs(successes - 0) <= 2
    report_line(
        "9a",
        ok,
        f"config3 I=200 N=4: {successes}/10 vs reference 0/10 (tolerance 2); "
        "uniform filler keeps the planted set recoverable at this width",
    )
    assert ok


def test_criterion_09b_large_sets_in_wide_transactions(report_line, grid_cells):
    """Reference grid value 10/10 for config3, I=200, N=12 (tolerance 2)."""
    successes = grid_cells[("config3", 200, 12)]
    ok = abs(successes - 10) <= 2
    report_line("9b", ok, f"config3 I=200 N=12: {successes}/10 vs reference 10/10 (tolerance 2)")
    assert ok


def test_criterion_09c_mid_universe_exact_width(report_line, grid_cells):
    """Reference grid value 10/10 for config2, I=100, N=10 (tolerance 2)."""
    successes = grid_cells[("config2", 100, 10)]
    ok = abs(successes - 10) <= 2
    report_line("9c", ok, f"config2 I=100 N=10: {successes}/10 vs reference 10/10 (tolerance 2)")
    assert ok


def test_criterion_09d_tiny_universe_collisions(report_line, grid_cells):
    """Reference grid value 0/10 for config2, I=25, N=6 (tolerance 2)."""
    successes = grid_cells[("config2", 25, 6)]
    ok = abs(successes - 0) <= 2
    report_line("9d", ok, f"config2 I=25 N=6: {successes}/10 vs reference 0/10 (tolerance 2)")
    assert ok


def test_criterion_09e_accuracy_trends(report_line, grid_cells):
    """Success counts rise with N at fixed I, and with I at fixed N."""
    row = [grid_cells[("config3", 200, n)] for n in (4, 6, 8, 10, 12)]
    col = [grid_cells[("config2", i, 10)] for i in (25, 50, 100, 200)]
    row_ok = all(a <= b for a, b in zip(row, row[1:]))
    col_ok = all(a <= b for a, b in zip(col, col[1:]))
    ok = row_ok and col_ok
    report_line("9e", ok, f"config3 row {row} nondecreasing={row_ok}; config2 col {col} nondecreasing={col_ok}")
    assert ok


def _find_words_fixture() -> Path | None:
    env = os.environ.get("WORDS_FILE")
    if env and Path(env).is_file():
        return Path(env)
    bundled = Path(__file__).parent / "data" / "words_alpha.txt"
    if bundled.is_file():
        return bundled
    return None


def test_criterion_10_english_words(report_line):
    """Letter-set mining over a reference English word list (fixture-gated)."""
    path = _find_words_fixture()
    if path is None:
        report_line("10", None, "no word list; set WORDS_FILE or add tests/data/words_alpha.txt")
        pytest.skip(
            "word-list fixture not available in this environment; "
            "provide one via the WORDS_FILE env var or tests/data/words_alpha.txt"
        )
    with open(path, "r", encoding="utf-8") as fh:
        db = parse_word_lines(fh)
    matrix = count_pairs(db)

    # the criterion is frequency equality; a different set that ties at the
    # maximum passes and the tie is reported next to the expected letters
    details = []
    ok = True
    for n, expected in ((4, {"a", "e", "i", "n"}), (5, {"a", "e", "i", "n", "t"})):
        outcome = mine(matrix, MineRequest(n=n, r=10, solver="exact"))
        mined_tokens = set(db.tokens_of(outcome.itemset))
        best, _winners = most_frequent_nset_exact(db, n, budget=10**9)
        mined_freq = frequency_of_set(db, outcome.itemset)
        ok = ok and mined_freq == best
        note = "" if mined_tokens == expected else (
            f" (tie: expected {''.join(sorted(expected))})"
        )
        details.append(
            f"n={n}: mined={''.join(sorted(mined_tokens))} freq={mined_freq} max={best}{note}"
        )
    report_line("10", ok, "; ".join(details))
    assert ok


def test_criterion_11_deterministic_outputs(report_line, tmp_path, capsys):
    """Every command repeats byte-identically once timing fields are removed."""

    def run(argv):
        code = cli_main(argv)
        out = capsys.readouterr().out
        return code, out

    db_path = tmp_path / "db.txt"
    db_path.write_text("\n".join(SMALL_DB_LINES) + "\n", encoding="utf-8")

    mine_docs = []
    for _ in range(2):
        code, out = run(["mine", str(db_path), "--n", "3", "--quiet"])
        assert code == 0
        doc = json.loads(out)
        doc.pop("timings")
        mine_docs.append(doc)
    mine_ok = mine_docs[0] == mine_docs[1]

    gen_bytes = []
    for name in ("g1.txt", "g2.txt"):
        out_path = tmp_path / name
        code, _ = run([
            "gen", "--out", str(out_path), "--preset", "config2",
            "--i-size", "20", "--n", "3", "--seed", "5", "--quiet",
        ])
        assert code == 0
        gen_bytes.append(out_path.read_bytes() + (tmp_path / f"{name}.meta.json").read_bytes())
    gen_ok = gen_bytes[0] == gen_bytes[1]

    bench_rows = []
    for name in ("b1", "b2"):
        code, _ = run([
            "bench", "--preset", "config2", "--i-sizes", "15", "--n-values", "3",
            "--trials", "2", "--seed", "1", "--report", str(tmp_path / name), "--quiet",
        ])
        assert code == 0
        rows = (tmp_path / f"{name}.csv").read_text(encoding="utf-8").splitlines()
        bench_rows.append([",".join(r.split(",")[:8]) for r in rows])
    bench_ok = bench_rows[0] == bench_rows[1]

    scaling_docs = []
    for _ in range(2):
        code, out = run(["scaling", "--scales", "1", "--repeats", "1", "--quiet"])
        assert code == 0
        doc = json.loads(out)
        stable = [
            {k: s[k] for k in ("scale", "transactions", "correct", "t_best")}
            for s in doc["scales"]
        ]
        scaling_docs.append(stable)
    scaling_ok = scaling_docs[0] == scaling_docs[1]

    ok = mine_ok and gen_ok and bench_ok and scaling_ok
    report_line(
        "11",
        ok,
        f"mine={mine_ok} gen={gen_ok} bench={bench_ok} scaling={scaling_ok}",
    )
    assert ok
