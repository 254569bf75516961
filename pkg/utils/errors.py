"""
Exception types raised by the engine and surfaced by the CLI.

Every class derives from ValueError so callers that only care about
"bad input" can keep catching ValueError.
"""


class ContractViolation(ValueError):
    """A query or update was called outside its documented preconditions."""


class UnreachableError(ValueError):
    """Two graph vertices are not connected."""

    def __init__(self, source: int, target: int):
        self.source = source
        self.target = target
        super().__init__(f"vertex {target} is unreachable from vertex {source}")


class CurveFormatError(ValueError):
    """A curve or graph file could not be parsed."""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class CurveLoadError(ValueError):
    """A parsed point sequence does not form a valid curve in its space."""


class UnsupportedSpaceError(ValueError):
    """The operation is only defined for another ambient space."""


class BudgetExceededError(ValueError):
    """An exact baseline would exceed the configured n·m budget."""

    def __init__(self, n: int, m: int, budget: int):
        self.n = n
        self.m = m
        self.budget = budget
        super().__init__(f"exact computation needs {n}x{m}={n * m} cells, budget is {budget}")


class CurveUnderflowError(ValueError):
    """Truncation would leave an empty curve."""


class BundleFormatError(ValueError):
    """A preprocessed bundle is malformed or was written by another format version."""
