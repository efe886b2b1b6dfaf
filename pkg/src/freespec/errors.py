"""Exception types shared across the package."""


class FreespecError(Exception):
    """Base class for all errors raised by this package."""


class LoopEdgeError(FreespecError):
    """A loop edge (u, u) was supplied; simple graphs forbid loops."""

    def __init__(self, vertex: int):
        super().__init__(f"loop edge at vertex {vertex}")
        self.vertex = vertex


class RootOutOfRangeError(FreespecError):
    """The requested root index is not a vertex."""


class VertexOutOfRangeError(FreespecError):
    """An edge endpoint or source vertex is not a vertex."""


class SizeTooSmallError(FreespecError):
    """A builder was asked for a graph below its minimum size."""


class GraphFormatError(FreespecError):
    """The graph text format could not be parsed."""


class ComplexityRefusalError(FreespecError):
    """Cycle enumeration exceeded its node budget."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"cycle enumeration expanded {nodes} nodes (budget {budget})")
        self.nodes = nodes
        self.budget = budget


class BudgetExceededError(FreespecError):
    """A ball or walk computation exceeded its configured budget."""

    def __init__(self, count: int, budget: int, what: str = "items"):
        super().__init__(f"budget exceeded: {count} {what} (budget {budget})")
        self.count = count
        self.budget = budget
        self.what = what


class UnreducedWordError(FreespecError):
    """A word vertex was not in reduced form."""


class NotAdjacentError(FreespecError):
    """The two word vertices are not adjacent in the free power."""


class RadiusTooSmallError(FreespecError):
    """The ball radius is too small for the requested identity check."""


class InsufficientBaseMomentsError(FreespecError):
    """Pushforward needs more base moments than were supplied."""


class ParityError(FreespecError):
    """n*d is odd, so no d-regular graph on n vertices exists."""


class RetriesExhaustedError(FreespecError):
    """The pairing model kept producing loops or multi-edges."""

    def __init__(self, retries: int):
        super().__init__(
            f"no simple graph after {retries} retries; (n, d) may be infeasible"
        )
        self.retries = retries
