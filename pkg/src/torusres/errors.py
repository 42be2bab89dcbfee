"""Error taxonomy shared by all modules.

Exit-code mapping used by the CLI: usage errors -> 2, verification
failures -> 1, numerical failures -> 3.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A stated precondition (resolution, truncation, interval) is violated."""


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds a configured size bound."""


class NumericalBlowupError(FloatingPointError):
    """NaN/Inf detected during time stepping."""
