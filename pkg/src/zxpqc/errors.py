"""Exception hierarchy shared by every module of the package."""


class ZXError(Exception):
    """Base class for all package errors."""


class MissingBinding(ZXError, KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"no value bound for parameter {self.name!r}"


class DiagramError(ZXError, ValueError):
    pass


class DanglingWire(DiagramError):
    pass


class BoundaryDegreeViolation(DiagramError):
    pass


class ArityMismatch(DiagramError):
    pass


class SchemaViolation(ZXError, ValueError):
    """Malformed JSON document; ``path`` points at the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class StaleMatch(ZXError):
    pass


class NotAGadget(ZXError):
    pass


class NotDecomposable(ZXError):
    pass


class RegionArityMismatch(ZXError, ValueError):
    pass


class NotClosed(ZXError, ValueError):
    pass


class UnsupportedPhase(ZXError):
    def __init__(self, vertex: int, phase=None):
        super().__init__(f"vertex {vertex} has non-Clifford or symbolic phase {phase}")
        self.vertex = vertex
        self.phase = phase


class TermBudgetExceeded(ZXError):
    def __init__(self, count: int, budget: int):
        super().__init__(
            f"{count} terms exceed the budget of {budget}; "
            "apply lightcone reduction first or raise the budget"
        )
        self.count = count
        self.budget = budget


class TooLarge(ZXError):
    pass


class SpecMismatch(ZXError, ValueError):
    pass


class SupportOutOfRange(ZXError, ValueError):
    pass


class EdgeNotInGraph(ZXError, ValueError):
    pass


class GraphFormatError(ZXError, ValueError):
    pass
