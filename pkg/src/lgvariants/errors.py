"""Exception hierarchy shared by every module of the package."""


class LGError(Exception):
    """Base class for all package errors."""


class DomainError(LGError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(LGError, ValueError):
    """Inputs are individually valid but mutually inconsistent."""


class ResourceError(LGError, RuntimeError):
    """The request would need an exhaustive enumeration beyond the guard."""


class ConsistencyError(LGError, ArithmeticError):
    """A numerical identity that must hold was violated beyond tolerance."""
