"""Exception hierarchy shared by all modules."""


class QshaError(Exception):
    """Base class for every error raised by the library."""


class StructuralError(QshaError):
    """Malformed input: wrong shapes, missing entries, unknown generators."""


class ValidationError(QshaError):
    """Input is well formed but violates a mathematical invariant."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnsupportedInputError(QshaError):
    """Input outside the supported class (e.g. quivers with oriented cycles)."""


class WeightConditionError(ValidationError):
    """Vertex weights do not satisfy m_i l_ij = m_j l_ji."""


class DomainError(QshaError):
    """Operation applied outside its domain (e.g. derivative of a non-cycle)."""


class DivisibilityError(QshaError):
    """Exact division left a nonzero remainder."""


class ConsistencyError(QshaError):
    """An internal algebraic assertion failed; indicates a bug."""


class ResourceError(QshaError):
    """A size or time guard was exceeded."""
