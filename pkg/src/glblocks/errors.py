"""Exception hierarchy. Every validation failure is a ``BlockError``."""


class BlockError(ValueError):
    """Base class for invalid inputs to the block calculator."""


class NotTameError(BlockError):
    """An extension or twist has ramification divisible by p."""


class WildParameterError(NotTameError):
    """Only the trivial parameter on wild inertia is represented (depth zero)."""


class EllError(BlockError):
    """The auxiliary prime ell is not a prime distinct from p."""


class WeightError(BlockError):
    """Multiplicities times orbit sizes do not add up to the rank."""


class DuplicateOrbitError(BlockError):
    """The same Frobenius orbit occurs twice in one factor."""


class FrobeniusStabilityError(BlockError):
    """A multiset of characters is not a union of Frobenius orbits."""


class IncompatibleSourceError(BlockError):
    """An L-homomorphism step cannot be applied to the given group."""


class CentralizerConditionError(BlockError):
    """The centralizer isomorphism check failed where it was required."""


class OracleBoundError(BlockError):
    """The brute-force oracle was asked for more than it can enumerate."""
