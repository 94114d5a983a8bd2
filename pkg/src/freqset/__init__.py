"""Most-frequent fixed-size itemset search driven by pair co-occurrence counts.

Pipeline: parse a transaction database, count how often every item pair
co-occurs, then bisect a relative-frequency threshold. Each bisection step
asks a maximum-clique backend whether the graph of pairs at or above the
threshold still contains a clique of the target size; the highest threshold
that succeeds determines the reported itemset. Backends: an exact
branch-and-bound solver and a QUBO formulation minimized by simulated
annealing (``freqset.anneal``, imported lazily to keep startup light).
"""

from .datagen import (
    GenConfig,
    generate,
    generate_planted_comparison,
    preset,
    write_item_lines,
)
from .driver import BisectionState, MineRequest, make_solver, mine, select_n_subset
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyDatabase,
    EmptyGraph,
    FreqsetError,
    InvalidGenConfig,
    InvalidItem,
    InvalidPair,
    InvalidThreshold,
    InvalidVertex,
    NoCliqueFound,
    NTooLarge,
    OracleBudgetExceeded,
    SetTooSmall,
)
from .graph import (
    CliqueResult,
    CliqueSolver,
    ExactCliqueSolver,
    ThresholdGraph,
    is_clique,
    max_clique_exact,
    threshold_graph,
)
from .ingest import parse_item_lines, parse_word_lines, read_transactions
from .model import (
    ItemCatalog,
    MineOutcome,
    PairFrequencyMatrix,
    TraceEntry,
    TransactionDb,
    pair_index,
)
from .oracle import frequency_of_set, most_frequent_nset_exact, objective_bruteforce
from .pairs import PairStat, count_pairs, dump_pairs_csv, min_pair_frequency

__version__ = "0.1.0"

__all__ = [
    "BisectionState",
    "BudgetExceeded",
    "CliqueResult",
    "CliqueSolver",
    "DimensionMismatch",
    "EmptyDatabase",
    "EmptyGraph",
    "ExactCliqueSolver",
    "FreqsetError",
    "GenConfig",
    "InvalidGenConfig",
    "InvalidItem",
    "InvalidPair",
    "InvalidThreshold",
    "InvalidVertex",
    "ItemCatalog",
    "MineOutcome",
    "MineRequest",
    "NTooLarge",
    "NoCliqueFound",
    "OracleBudgetExceeded",
    "PairFrequencyMatrix",
    "PairStat",
    "SetTooSmall",
    "ThresholdGraph",
    "TraceEntry",
    "TransactionDb",
    "count_pairs",
    "dump_pairs_csv",
    "frequency_of_set",
    "generate",
    "generate_planted_comparison",
    "is_clique",
    "make_solver",
    "max_clique_exact",
    "mine",
    "min_pair_frequency",
    "most_frequent_nset_exact",
    "objective_bruteforce",
    "pair_index",
    "parse_item_lines",
    "parse_word_lines",
    "preset",
    "read_transactions",
    "select_n_subset",
    "threshold_graph",
    "write_item_lines",
]
