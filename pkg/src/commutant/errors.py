"""Shared exception types."""


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class TextFormatError(ValueError):
    """Malformed text input; carries the offending location when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ExtensionRequiredError(RuntimeError):
    """A splitting needs roots that do not exist in the given field.

    Raised over the rationals when no scanned element admits a coprime
    factorization of its minimal polynomial; the offending polynomial is
    attached.
    """

    def __init__(self, polynomial, message=None):
        super().__init__(message or f"field extension required to split {polynomial}")
        self.polynomial = polynomial


class TrivialCentralizer(Exception):
    """Answer-carrying exception: the algebra's centralizer is the scalars.

    Only reachable through shapes where the certifier proves
    dim C(A) = 1 by an explicit kernel computation (odd ambient size with a
    4-dimensional algebra, plus the degenerate 2 x 2 shapes). Carries the
    block-dimension signature observed at detection time.
    """

    def __init__(self, nu, p, q, message=None):
        super().__init__(message or f"centralizer is trivial (nu={nu}, split {p}+{q})")
        self.nu = nu
        self.p = p
        self.q = q


class CertificationError(RuntimeError):
    """The deterministic witness search exhausted its budget."""


class NotConformingError(ValueError):
    """Classification input does not satisfy its structural preconditions."""


class PencilRankError(ValueError):
    """Pencil is not full-rank in the sense required for reduction."""


class DimensionUnreachableError(RuntimeError):
    """Rejection sampling could not hit the requested closure dimension."""
