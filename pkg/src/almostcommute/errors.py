"""Exception hierarchy shared by the library and the command line."""


class AlmostCommuteError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(AlmostCommuteError, ValueError):
    """Shapes are not square or do not agree."""


class DomainError(AlmostCommuteError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PreconditionError(AlmostCommuteError, ValueError):
    """Input violates a hypothesis (Hermiticity, norm cap, commutator size)."""


class GuaranteeDomainError(PreconditionError):
    """Commutator norm is too large for the error bounds to apply."""


class StructureError(AlmostCommuteError, ValueError):
    """A matrix does not respect the expected block structure."""


class NumericError(AlmostCommuteError, ArithmeticError):
    """The dense eigensolver failed."""
