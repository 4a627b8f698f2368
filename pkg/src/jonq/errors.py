"""Exception hierarchy shared by all modules.

Every error raised on purpose derives from JonqError so the CLI can map
exceptions onto its exit-code contract (1 = validation, 2 = identity
failure, 3 = resource limit).
"""


class JonqError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------- parsing


class PolyParseError(JonqError):
    """Rejected polynomial text. Carries the 0-based character position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolyParseError):
    pass


class CoefficientError(PolyParseError):
    """Coefficient literal has no value in the coefficient field."""


class InstanceFormatError(JonqError):
    """Malformed instance file. Carries the 1-based line number."""

    def __init__(self, message, line):
        super().__init__(f"{message} (line {line})")
        self.line = line


# ---------------------------------------------------------------- algebra


class MixedRingError(JonqError):
    """Operands live in different rings."""


class ValidationError(JonqError):
    """A de Jonquieres instance failed validation."""


class DegreeMismatch(ValidationError):
    pass


class NotHomogeneous(ValidationError):
    pass


class NotCoprime(ValidationError):
    pass


class NotMonoid(ValidationError):
    """A term has degree >= 2 in the last variable."""


class MonoidMissingLastVariable(ValidationError):
    """Neither f nor g involves the last variable."""


class NotInIdeal(JonqError):
    """Polynomial has a term outside (x1..xn), so no partial column exists."""


class NotDowngradable(NotInIdeal):
    """A term of the previous sequence element is free of x1..xn."""


class InternalInvariantViolation(JonqError):
    """An identity guaranteed by the underlying theory failed; this is a bug."""


class NotPrincipal(JonqError):
    """Elimination did not produce a principal ideal; this is a bug."""


# ---------------------------------------------------------------- engine


class ResourceLimit(JonqError):
    """A computation exceeded its pair or monomial-operation budget."""


class KernelBudgetExceeded(ResourceLimit):
    """Raised inside a reduction kernel; callers re-wrap with context."""


class KernelCapacityError(JonqError):
    """Input exceeds a compiled kernel's packing capacity (fall back to pure)."""
