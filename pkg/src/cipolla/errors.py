"""Exception types shared across the package."""


class CipollaError(Exception):
    """Base class for all package errors."""


class DomainError(CipollaError, ValueError):
    pass


class PrecisionExhausted(CipollaError):
    pass


class NoConvergence(CipollaError):
    pass


class InternalInconsistency(CipollaError, AssertionError):
    """An exact identity that must hold did not; indicates a bug."""


class QuadratureFailure(CipollaError):
    pass


class OutOfRange(CipollaError, ValueError):
    pass
