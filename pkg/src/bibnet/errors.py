"""Exception hierarchy shared by all bibnet modules."""

from __future__ import annotations


class BibnetError(Exception):
    """Base class for every error raised deliberately by bibnet."""


class ValidationError(BibnetError, ValueError):
    """Input violates a documented precondition."""


class ParseError(ValidationError):
    """Malformed input file.  Carries the 1-based line (and column when known)."""

    def __init__(self, message: str, path=None, line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class MissingOrderError(BibnetError):
    """A temporal check was requested on a graph without node ranks."""


class CycleError(ValidationError):
    """Graph must be acyclic but is not; ``cycle`` holds one witness cycle of labels."""

    def __init__(self, message: str, cycle: list[str]):
        self.cycle = cycle
        super().__init__(f"{message}: {' -> '.join(cycle)}")


class ConvergenceError(BibnetError):
    """Iterative solver exceeded its iteration budget."""

    def __init__(self, message: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")


class ReducibleMatrixError(ValidationError):
    """Citation matrix is not strongly connected; ``components`` lists the parts."""

    def __init__(self, message: str, components: list[list[str]]):
        self.components = components
        super().__init__(f"{message}: {components}")


class DisconnectedGraphError(ValidationError):
    """Distance metric requested over a graph that is not connected."""


class EmptyCorpusError(ValidationError):
    """No documents or no rows to analyse."""
