"""Threshold bisection over clique queries: the full mining loop.

Round i probes a dyadic threshold t with denominator 2^(i+1). A clique of at
least n vertices at t means the answer lies at t or above, so the next probe
moves up by the next geometric step; otherwise it moves down. After r rounds
the retained threshold is within 2^-r of the best achievable one, and the
last stored clique supplies the reported n-set.

The loop consumes only the pair matrix. Original transactions are never
touched after counting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoCliqueFound, NTooLarge, SetTooSmall
from .graph import CliqueResult, CliqueSolver, ExactCliqueSolver, threshold_graph
from .model import MineOutcome, PairFrequencyMatrix, TraceEntry

SOLVER_NAMES = ("exact", "qubo")


@dataclass(frozen=True)
class MineRequest:
    """Parameters of one mining run."""

    n: int
    r: int = 10
    solver: str = "exact"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise SetTooSmall("the target set size must be at least 2")
        if self.r < 1:
            raise ValueError("the number of bisection rounds must be at least 1")
        if self.solver not in SOLVER_NAMES:
            raise ValueError(f"unknown solver {self.solver!r}; expected one of {SOLVER_NAMES}")


@dataclass
class BisectionState:
    """Exact bisection position: the threshold is num / 2^power.

    After iteration i the denominator exponent is i+1, so thresholds never
    pass through floating point on their way to the comparison.
    """

    num: int = 1
    power: int = 1
    iteration: int = 0
    solution: CliqueResult | None = None
    t_best: Fraction | None = None
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def t(self) -> Fraction:
        return Fraction(self.num, 2**self.power)

    def record(self, entry: TraceEntry, found: CliqueResult) -> None:
        self.trace.append(entry)
        self.iteration = entry.iteration
        if entry.success:
            self.solution = found
            self.t_best = entry.t
            self.num = self.num * 2 + 1
        else:
            self.num = self.num * 2 - 1
        self.power = entry.iteration + 1


def select_n_subset(vertices, n: int) -> tuple[int, ...]:
    """Deterministic n-subset of a clique: the n smallest vertex ids."""
    vs = sorted(vertices)
    if len(vs) < n:
        raise SetTooSmall(f"a clique of {len(vs)} vertices cannot yield a {n}-set")
    return tuple(vs[:n])


def make_solver(request: MineRequest) -> CliqueSolver:
    """Instantiate the backend named in the request; the qubo import is lazy."""
    if request.solver == "exact":
        return ExactCliqueSolver()
    from .anneal import AnnealingCliqueSolver, AnnealParams

    return AnnealingCliqueSolver(AnnealParams(seed=request.seed))


def mine(
    matrix: PairFrequencyMatrix,
    request: MineRequest,
    solver: CliqueSolver | None = None,
) -> MineOutcome:
    """Run the full bisection and return the mined n-set with its trace.

    Raises NTooLarge when fewer than n items exist, and NoCliqueFound (with
    the trace attached) when no probed threshold admits an n-clique.
    """
    if request.n > matrix.k:
        raise NTooLarge(f"requested n={request.n} with only {matrix.k} items")
    if solver is None:
        solver = make_solver(request)

    state = BisectionState()
    for i in range(1, request.r + 1):
        t = state.t
        graph = threshold_graph(matrix, t)
        found = solver.solve(graph)
        success = found.size >= request.n
        state.record(TraceEntry(i, t, found.size, success), found)

    if state.solution is None or state.t_best is None:
        raise NoCliqueFound(
            f"no clique of size >= {request.n} at any probed threshold",
            state.trace,
        )
    return MineOutcome(
        itemset=select_n_subset(state.solution.vertices, request.n),
        clique=tuple(state.solution.vertices),
        t_best=state.t_best,
        trace=tuple(state.trace),
        solver=getattr(solver, "name", request.solver),
    )
