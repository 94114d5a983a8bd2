"""Exception types shared across the package."""


class FreqsetError(Exception):
    """Base class for all package errors."""


class InvalidItem(FreqsetError):
    """Empty or otherwise unusable item token, or an out-of-range item id."""


class InvalidPair(FreqsetError):
    """Pair query with i == j, out-of-range ids, or malformed pair data."""


class EmptyDatabase(FreqsetError):
    """An operation that needs transactions received none."""


class SetTooSmall(FreqsetError):
    """An itemset is smaller than the operation requires."""


class InvalidThreshold(FreqsetError):
    """Threshold outside [0, 1] or not a finite number."""


class EmptyGraph(FreqsetError):
    """Clique query on a graph with no vertices."""


class InvalidVertex(FreqsetError):
    """Vertex id outside the graph."""


class BudgetExceeded(FreqsetError):
    """A configurable work or storage budget would be exhausted."""


class OracleBudgetExceeded(BudgetExceeded):
    """Exhaustive enumeration would exceed the candidate budget."""


class DimensionMismatch(FreqsetError):
    """Array shape does not match the expected dimension."""


class NTooLarge(FreqsetError):
    """Requested set size exceeds the number of distinct items."""


class NoCliqueFound(FreqsetError):
    """No bisection step found a clique of the requested size.

    Carries the full probe trace so callers can report what was tried.
    """

    def __init__(self, message: str, trace=()):
        super().__init__(message)
        self.trace = tuple(trace)


class InvalidGenConfig(FreqsetError):
    """Generator configuration violates its own constraints."""
