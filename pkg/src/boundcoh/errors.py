"""Exception hierarchy shared by all modules."""


class BoundcohError(ValueError):
    """Base class; every error raised on bad input derives from this."""


class ComplexViolation(BoundcohError):
    pass


class InvalidCartanType(BoundcohError):
    pass


class SizeLimit(BoundcohError):
    pass


class JacobiViolation(BoundcohError):
    pass


class DegreeOutOfRange(BoundcohError):
    pass


class NotABicomplex(BoundcohError):
    def __init__(self, identity, cell, message=None):
        self.identity = identity
        self.cell = cell
        super().__init__(message or f"{identity} fails at {cell}")


class InvalidBetti(BoundcohError):
    pass


class DegenerateConfiguration(BoundcohError):
    pass


class DomainError(BoundcohError):
    pass


class LogDomain(DomainError):
    pass
