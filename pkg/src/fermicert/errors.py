"""Exception hierarchy shared by all fermicert modules."""


class FermicertError(Exception):
    """Base class for all library errors."""


class ConductorLimitExceeded(FermicertError):
    """Cyclotomic conductor beyond the configured bound (10**4)."""


class InexactDivision(FermicertError):
    """Polynomial division left a nonzero remainder."""


class DimensionMismatch(FermicertError):
    """Operands live in rings with different numbers of variables."""


class ZeroPolynomial(FermicertError):
    """Operation undefined for the zero polynomial."""


class NonPositiveVector(FermicertError):
    """An exponent vector that must be positive has a nonpositive entry."""


class NotDivisible(FermicertError):
    """An exponent is not componentwise divisible by the period."""

    def __init__(self, variable, exponent):
        self.variable = variable
        self.exponent = exponent
        super().__init__(
            f"exponent {exponent} of variable {variable} is not divisible by the period"
        )


class ZeroCoordinate(FermicertError):
    """Laurent evaluation requested at a point with a zero coordinate."""


class NotBinomial(FermicertError):
    """Input does not have exactly two terms after monomial stripping."""


class InvalidOrbitIndex(FermicertError):
    """Orbit index outside 1..nu."""


class InvalidSpec(FermicertError):
    """Operator specification violates a structural invariant."""


class SizeLimitExceeded(FermicertError):
    """Requested computation exceeds the desk-scale size guard."""


class TwistInvarianceViolated(FermicertError):
    """Dispersion polynomial is not invariant under the root-of-unity twist."""

    def __init__(self, cell):
        self.cell = cell
        super().__init__(f"polynomial changes under the twist indexed by cell {cell}")


class InfiniteRange(FermicertError):
    """Graph edge offset exceeds the finite-range bound."""
