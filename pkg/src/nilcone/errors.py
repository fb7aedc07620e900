class NilconeError(ValueError):
    """Base class for semantic errors raised by nilcone."""


class DimensionMismatch(NilconeError):
    pass


class NotNilpotent(NilconeError):
    pass


class NotInAlgebra(NilconeError):
    """The matrix does not satisfy Q(Nu, v) + Q(u, Nv) = 0."""


class InvalidInvariants(NilconeError):
    pass


class IllDefined(NilconeError):
    """A map or form failed to descend to a quotient; signals an upstream bug."""
