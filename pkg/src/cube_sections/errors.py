"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateSectionError(DomainError):
    """The direction has fewer than two nonzero coordinates."""


class DegeneratePieceError(ValueError):
    """A piecewise polynomial has a piece that is identically zero."""


class AccuracyError(RuntimeError):
    """A quadrature tail bound cannot be met within the truncation limit."""


class PatternViolation(RuntimeError):
    """The expected sign-change pattern of the criterion polynomials failed.

    Carries the offending sign patterns so callers can inspect what was
    actually found instead of the expected two-changes / one-change shape.
    """

    def __init__(self, message, n=None, s1_pattern=None, s2_pattern=None):
        super().__init__(message)
        self.n = n
        self.s1_pattern = s1_pattern
        self.s2_pattern = s2_pattern


class ClosedFormMismatch(RuntimeError):
    """A certified root disagrees with its known closed form."""
