"""Exception types shared across the package."""


class A2BuildingError(Exception):
    """Base class for all package errors."""


class SingularMatrix(A2BuildingError):
    """A matrix that must be invertible is singular."""


class PrimeMismatch(A2BuildingError):
    """Two objects built over different primes were combined."""


class ZeroConstantTerm(A2BuildingError):
    """Characteristic polynomial has zero constant term (non-invertible input)."""


class SlopesNotDistinct(A2BuildingError):
    """Slope factorization requires pairwise distinct integer slopes."""


class PrecisionExhausted(A2BuildingError):
    """p-adic precision ladder ran out before an exact object was pinned down."""


class SingularSegment(A2BuildingError):
    """A segment whose type must be regular is not."""


class NotTypePreserving(A2BuildingError):
    """Group element does not preserve vertex types (det valuation not 0 mod 3)."""


class NotStronglyRegular(A2BuildingError):
    """Operation requires a strongly regular hyperbolic element."""


class FixedBasepoint(A2BuildingError):
    """Basepoint is fixed by the element; the criterion is undefined there."""


class InvalidMeasure(A2BuildingError):
    """Random-walk step distribution violates a validation rule."""


class MarginInfeasible(A2BuildingError):
    """Flag configuration too degenerate for the requested valuation margin."""


class WordCollision(A2BuildingError):
    """A reduced word evaluated to the identity isometry (definitive refutation)."""

    def __init__(self, word: str):
        super().__init__(f"reduced word {word!r} acts as the identity")
        self.word = word


class BudgetExhausted(A2BuildingError):
    """Search budget ran out before a witness was found."""


class NotStabilizing(A2BuildingError):
    """Element does not stabilize the given vertex at infinity."""


class ConfigError(A2BuildingError):
    """Run configuration failed validation."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
