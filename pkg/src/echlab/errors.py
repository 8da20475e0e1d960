"""Exception hierarchy shared by the engine modules."""


class EchError(Exception):
    """Base class for all engine errors."""


class ResourceExhausted(EchError):
    """Raised when an exact computation runs out of memory."""


class CompositionNonzero(EchError):
    """``d_out @ d_in`` is not the zero map.

    ``witness`` is the index of a basis element of the source of ``d_in``
    whose image under the composite is nonzero.
    """

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"d_out . d_in is nonzero on basis element {witness!r}")


class NotChainMap(EchError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"map does not commute with the differentials at {witness!r}")


class GradingMismatch(EchError):
    pass


class NotSubcomplex(EchError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"differential of {witness!r} leaves the kept span")


class ExactnessFailure(EchError):
    """A computed long exact sequence is not exact (an engine bug, not a user error)."""

    def __init__(self, node, message=None):
        self.node = node
        super().__init__(message or f"sequence not exact at node {node!r}")


class NonUnitPivot(EchError):
    def __init__(self, pair, coefficient):
        self.pair = pair
        self.coefficient = coefficient
        super().__init__(f"pair {pair!r} has incidence {coefficient}, expected +-1")


class CyclicMatching(EchError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__(f"matching has a closed gradient path through {cycle!r}")


class NotStabilized(EchError):
    """A directed system did not stabilize within the given budget.

    ``towers`` carries whatever tower data was computed so the caller can
    inspect it before raising the budget.
    """

    def __init__(self, message, towers=None):
        self.towers = towers
        super().__init__(message)


class InvalidData(EchError):
    """Chain data that violates the structural requirements of the input model."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0] if self.violations else "unknown violation"
        super().__init__(str(first))
