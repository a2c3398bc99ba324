class AlgebraError(Exception):
    """Base class for every error raised by the arithmetic kernels."""


class FieldMismatchError(AlgebraError, ValueError):
    pass


class ZeroDivisionAlgebraError(AlgebraError, ZeroDivisionError):
    pass


class EmbeddingError(AlgebraError, ValueError):
    pass


class FieldTooLargeError(AlgebraError, ValueError):
    pass


class TorsionSearchError(AlgebraError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateTraceError(AlgebraError):
    pass


class PrecisionError(AlgebraError):
    pass


class DivisorDegreeError(AlgebraError):
    def __init__(self, message: str, deficit: int):
        super().__init__(message)
        self.deficit = deficit


class RamificationError(AlgebraError):
    pass


class InconsistentDataError(AlgebraError, ValueError):
    pass


class GroupClosureError(AlgebraError):
    pass


class EliminationError(AlgebraError):
    pass


class GoldenFileError(AlgebraError, ValueError):
    pass


class SingularityError(AlgebraError, ValueError):
    """A plane-model formula needs ordinary singularities or a complete singularity scan."""
