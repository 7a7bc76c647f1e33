"""Exception hierarchy shared across the package."""


class KolmorepError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(KolmorepError):
    """Operands live on Hilbert spaces of incompatible dimension."""


class DomainError(KolmorepError):
    """An input value lies outside the operation's domain."""


class NumericalError(KolmorepError):
    """A computed quantity violates a bound it should satisfy; usually a
    broken invariant upstream."""


class PreconditionError(KolmorepError):
    """A documented precondition does not hold."""


class SizeError(KolmorepError):
    """A problem instance exceeds the enumeration cap."""


class LayoutError(KolmorepError):
    """A correlation vector does not conform to the expected layout."""


class OwnershipError(KolmorepError):
    """An event references sample points foreign to its space."""


class ConditioningError(KolmorepError):
    """Conditioning on an event of probability zero."""


class NormalizationError(KolmorepError):
    """Weights that must sum to one do not."""


class RationalizationError(KolmorepError):
    """A floating value could not be snapped to a small exact rational."""
