"""QUBO encoding of the clique query and a simulated-annealing minimizer.

One binary variable per item. Every diagonal entry is -1, so selecting a
vertex is rewarded; an off-diagonal entry is k+1 exactly when the pair sits
below the frequency threshold. A single violated pair then outweighs the
reward of selecting all k vertices, which forces every energy minimum to be a
clique of the threshold graph, with energy -(clique size).

The annealer does single-bit-flip Metropolis sweeps under a geometric
temperature schedule, restarted from independent random states. All
randomness is drawn up front from seeded numpy generators so a run is a pure
function of (matrix, threshold, params).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, ClassVar

import numpy as np
from numba import njit

from .errors import DimensionMismatch
from .graph import CliqueResult, ThresholdGraph, _kept_mask, exact_threshold
from .model import PairFrequencyMatrix


class QMatrix:
    """Upper-triangular QUBO coefficients with the diagonal included.

    Entries are integers in {-1, 0, k+1}; storage is k*(k+1)//2 values.
    """

    __slots__ = ("k", "_entries", "_csr")

    def __init__(self, k: int, entries: np.ndarray) -> None:
        if k < 1:
            raise DimensionMismatch("a QUBO needs at least one variable")
        expected = k * (k + 1) // 2
        arr = np.ascontiguousarray(entries, dtype=np.int64)
        if arr.shape != (expected,):
            raise DimensionMismatch(f"expected {expected} entries for k={k}, got shape {arr.shape}")
        arr.setflags(write=False)
        self.k = k
        self._entries = arr
        self._csr: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def penalty(self) -> int:
        return self.k + 1

    def index(self, i: int, j: int) -> int:
        """Flat slot of entry (i, j) with i <= j, diagonal included."""
        if i > j:
            i, j = j, i
        if not 0 <= i <= j < self.k:
            raise DimensionMismatch(f"entry ({i}, {j}) out of range for k={self.k}")
        return i * self.k - i * (i - 1) // 2 + (j - i)

    def entry(self, i: int, j: int) -> int:
        return int(self._entries[self.index(i, j)])

    def to_dense(self) -> np.ndarray:
        """Dense (k, k) upper-triangular matrix, zeros below the diagonal."""
        k = self.k
        dense = np.zeros((k, k), dtype=np.int64)
        iu, ju = np.triu_indices(k)
        dense[iu, ju] = self._entries
        return dense

    def penalty_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric adjacency of penalized pairs in CSR form (indptr, indices)."""
        if self._csr is None:
            k = self.k
            dense = self.to_dense()
            sym = (dense == self.penalty)
            sym |= sym.T
            degrees = sym.sum(axis=1)
            indptr = np.zeros(k + 1, dtype=np.int64)
            np.cumsum(degrees, out=indptr[1:])
            indices = np.nonzero(sym)[1].astype(np.int64)
            self._csr = (indptr, indices)
        return self._csr

    def __repr__(self) -> str:
        return f"QMatrix(k={self.k})"


def build_qubo(matrix: PairFrequencyMatrix, t) -> QMatrix:
    """QUBO whose minima are the maximum cliques of Graph(t) over ``matrix``."""
    frac = exact_threshold(t)
    k = matrix.k
    entries = np.zeros(k * (k + 1) // 2, dtype=np.int64)
    diag_slots = np.array([i * k - i * (i - 1) // 2 for i in range(k)], dtype=np.int64)
    entries[diag_slots] = -1
    if k >= 2:
        below = ~_kept_mask(matrix.counts, matrix.db_size, frac)
        flat = np.nonzero(below)[0]
        if flat.size:
            row_starts = np.array([i * (2 * k - i - 1) // 2 for i in range(k + 1)], dtype=np.int64)
            rows = np.searchsorted(row_starts, flat, side="right") - 1
            # pair slot p in row i maps to QUBO slot p + i + 1 (diagonal shift)
            entries[flat + rows + 1] = k + 1
    return QMatrix(k, entries)


def build_qubo_from_graph(graph: ThresholdGraph) -> QMatrix:
    """Same encoding, but taking the kept-pair structure from an existing graph."""
    k = graph.k
    entries = np.zeros(k * (k + 1) // 2, dtype=np.int64)
    penalty = k + 1
    pos = 0
    for i in range(k):
        entries[pos] = -1
        mask = graph.neighbors_mask(i) >> (i + 1)
        for off in range(1, k - i):
            if not (mask >> (off - 1)) & 1:
                entries[pos + off] = penalty
        pos += k - i
    return QMatrix(k, entries)


def qubo_energy(q: QMatrix, x) -> int:
    """Energy x^T Q x of a binary vector under the upper-triangular convention."""
    arr = np.ascontiguousarray(x, dtype=np.int64)
    if arr.shape != (q.k,):
        raise DimensionMismatch(f"bit vector of shape {arr.shape} against k={q.k}")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit vector entries must be 0 or 1")
    dense = q.to_dense()
    return int(arr @ dense @ arr)


def decode_selection(x) -> tuple[int, ...]:
    """Indices of set bits, sorted ascending."""
    arr = np.asarray(x)
    return tuple(int(i) for i in np.nonzero(arr)[0])


def repair_selection(q: QMatrix, x) -> np.ndarray:
    """Drop offenders until the selected set carries no penalized pair.

    Each removed vertex participates in at least one violation, so every drop
    strictly lowers the energy; ties resolve to the largest vertex id.
    """
    arr = np.array(x, dtype=np.int8, copy=True).reshape(-1)
    if arr.shape != (q.k,):
        raise DimensionMismatch(f"bit vector of shape {arr.shape} against k={q.k}")
    arr = (arr != 0).astype(np.int8)
    dense = q.to_dense()
    pen = (dense == q.penalty)
    pen = pen | pen.T
    while True:
        sel = np.nonzero(arr)[0]
        if sel.size == 0:
            return arr
        viol = pen[np.ix_(sel, sel)].sum(axis=1)
        worst = int(viol.max())
        if worst == 0:
            return arr
        drop = int(sel[viol == worst].max())
        arr[drop] = 0


@dataclass(frozen=True)
class AnnealParams:
    """Restart-based single-flip schedule; defaults are sized for k up to ~250.

    ``initial_temp`` of None resolves to k+1 at solve time, matching the
    penalty scale so early sweeps can cross any barrier.
    """

    restarts: int = 32
    sweeps: int = 2000
    initial_temp: float | None = None
    final_temp: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.sweeps < 1:
            raise ValueError("restarts and sweeps must be at least 1")
        if not self.final_temp > 0:
            raise ValueError("final temperature must be positive")

    def resolved_initial(self, k: int) -> float:
        t0 = float(k + 1) if self.initial_temp is None else float(self.initial_temp)
        if not t0 > self.final_temp:
            raise ValueError("initial temperature must exceed the final temperature")
        return t0


@njit(cache=True)
def _anneal_run(pen_indptr, pen_indices, penalty, init_bits, flip_idx, accept_u, temps):
    k = init_bits.size
    x = init_bits.copy()
    # viol[i] = number of currently selected penalty-partners of i,
    # maintained for every vertex, selected or not
    viol = np.zeros(k, dtype=np.int64)
    energy = 0
    pair_total = 0
    for i in range(k):
        cnt = 0
        for p in range(pen_indptr[i], pen_indptr[i + 1]):
            if x[pen_indices[p]]:
                cnt += 1
        viol[i] = cnt
        if x[i]:
            energy -= 1
            pair_total += cnt
    energy += penalty * (pair_total // 2)

    best_energy = energy
    best_x = x.copy()
    steps = flip_idx.size
    for s in range(steps):
        temp = temps[s // k]
        i = flip_idx[s]
        if x[i]:
            delta = 1 - penalty * viol[i]
        else:
            delta = penalty * viol[i] - 1
        if delta <= 0 or accept_u[s] < np.exp(-delta / temp):
            if x[i]:
                x[i] = 0
                step = -1
            else:
                x[i] = 1
                step = 1
            for p in range(pen_indptr[i], pen_indptr[i + 1]):
                viol[pen_indices[p]] += step
            energy += delta
            if energy < best_energy:
                best_energy = energy
                best_x[:] = x
    return best_energy, best_x


def solve_qubo_annealing(q: QMatrix, params: AnnealParams | None = None) -> np.ndarray:
    """Minimize the QUBO across restarts and return a repaired bit vector.

    Restart r draws all of its randomness from ``default_rng(seed + r)``; the
    best energy across restarts wins, ties going to the lowest restart index.
    The returned vector always decodes to a clique thanks to the repair pass.
    """
    if params is None:
        params = AnnealParams()
    k = q.k
    t0 = params.resolved_initial(k)
    temps = np.geomspace(t0, params.final_temp, params.sweeps)
    indptr, indices = q.penalty_csr()
    steps = params.sweeps * k

    best_energy: int | None = None
    best_x: np.ndarray | None = None
    for r in range(params.restarts):
        rng = np.random.default_rng(params.seed + r)
        init = rng.integers(0, 2, size=k, dtype=np.int8)
        flips = rng.integers(0, k, size=steps, dtype=np.int64)
        us = rng.random(steps)
        energy, x = _anneal_run(indptr, indices, k + 1, init, flips, us, temps)
        if best_energy is None or energy < best_energy:
            best_energy = int(energy)
            best_x = x.copy()
    assert best_x is not None
    return repair_selection(q, best_x)


class AnnealingCliqueSolver:
    """Clique backend that minimizes the QUBO encoding with simulated annealing."""

    name: ClassVar[str] = "qubo"
    exact: ClassVar[bool] = False

    def __init__(self, params: AnnealParams | None = None) -> None:
        self.params = params or AnnealParams()

    def solve(self, graph: ThresholdGraph) -> CliqueResult:
        q = build_qubo_from_graph(graph)
        x = solve_qubo_annealing(q, self.params)
        return CliqueResult(decode_selection(x))

    def __repr__(self) -> str:
        return f"AnnealingCliqueSolver({self.params})"


def dump_qubo(q: QMatrix, out: IO[str]) -> None:
    """Sparse text dump: one ``i j value`` line per nonzero entry, i <= j."""
    k = q.k
    entries = q.entries
    pos = 0
    for i in range(k):
        for j in range(i, k):
            value = int(entries[pos])
            pos += 1
            if value:
                out.write(f"{i} {j} {value}\n")


def estimate_qubo_storage(k: int) -> int:
    """Number of stored coefficients for a k-variable instance."""
    if k < 1:
        raise DimensionMismatch("k must be at least 1")
    return k * (k + 1) // 2
