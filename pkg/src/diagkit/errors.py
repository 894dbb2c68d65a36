"""Exception hierarchy shared by all diagkit modules."""


class DiagkitError(Exception):
    """Base class for all diagkit errors."""


class MixedFieldError(DiagkitError):
    """Operands carry different field tags."""


class UnsupportedField(DiagkitError):
    """The requested operation does not exist over this field (e.g. a
    square root of a non-square rational over Q)."""


class NegativeRadicand(DiagkitError):
    """sqrt_nonneg called on a negative element."""


class EndpointRoot(DiagkitError):
    """A Sturm count was requested on an interval whose endpoint is a root."""


class DegreeOverflow(DiagkitError):
    """A defining polynomial exceeded the configured degree cap
    (DIAGKIT_MAX_DEGREE)."""


class NonSquareMatrix(DiagkitError):
    """A square matrix was required."""


class SizeMismatch(DiagkitError):
    """Matrix dimensions are incompatible."""


class SingularMatrix(DiagkitError):
    """A nonsingular matrix was required."""


class NotCommuting(DiagkitError):
    """Simultaneous diagonalization requires commuting inputs."""


class NotDiagonalizableError(DiagkitError):
    """An operation required a diagonalizable matrix."""

    def __init__(self, which, detail=""):
        self.which = which
        super().__init__(f"matrix {which!r} is not diagonalizable"
                         + (f": {detail}" if detail else ""))


class InputNotDiagonalizable(DiagkitError):
    """block_image_test requires diagonalizable diagonal blocks."""


class NotSymmetric(DiagkitError):
    """A symmetric matrix was required."""


class NotUnit(DiagkitError):
    """extend_orthonormal requires a unit vector."""


class DependentInput(DiagkitError):
    """Gram-Schmidt requires linearly independent input."""


class WrongDimension(DiagkitError):
    """A subspace of a specific dimension was required."""


class PreconditionViolated(DiagkitError):
    """A structural precondition of the finalisation step failed."""

    def __init__(self, stage, detail=""):
        self.stage = stage
        super().__init__(f"precondition violated at stage {stage!r}"
                         + (f": {detail}" if detail else ""))


class SingularConjugator(DiagkitError):
    """Subspace conjugation requires a nonsingular conjugator."""


class MissingCertificate(DiagkitError):
    """min_intersection_report requires certified subspaces."""


class SingularMap(DiagkitError):
    """classify requires an invertible matrix map; use strong_classify."""
