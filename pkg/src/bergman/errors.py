"""Exception types shared across the package."""


class BergmanError(ValueError):
    """Base class for all validation and computation errors raised here."""


class DimensionError(BergmanError):
    """Lengths of multi-indices, weight tuples, or points do not match."""


class InvalidPolynomialError(BergmanError):
    """A polynomial violates the balanced/Hermitian/nonnegativity contract."""


class DomainError(BergmanError):
    """A point lies outside the domain required by an operation."""


class BranchCutError(BergmanError):
    """A principal-branch power was requested on the negative real axis."""


class DivergenceError(BergmanError):
    """An integral or norm diverges for the supplied data."""


class NotInSpaceError(BergmanError):
    """A profile or element fails the membership test of its target space."""


class AccuracyError(BergmanError):
    """A quadrature window or truncation cannot meet the requested tolerance."""


class ConditioningError(BergmanError):
    """A Gram matrix is too ill-conditioned to factor reliably."""
