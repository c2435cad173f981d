"""Exception hierarchy shared by all subpackages."""


class MerostatError(Exception):
    """Base class for every error raised by merostat."""


# exact algebra
class DimensionTooLarge(MerostatError):
    pass


class IrrationalSpectrum(MerostatError):
    """Eigenvalues are not exactly representable."""


class DegreeTooLarge(MerostatError):
    pass


# Laurent series / classification
class TruncationTooShort(MerostatError):
    """A coefficient beyond the known truncation order was requested."""


class Infeasible(MerostatError):
    """No recurrence chain with a nonzero leading coefficient exists."""


class NoIntegerEigenvalue(Infeasible):
    pass


class UnsupportedPoleOrder(MerostatError):
    pass


class PatternMismatch(MerostatError):
    pass


# spectral parameter / canonical systems
class NonSimpleRoot(MerostatError):
    pass


class ExpansionUnavailable(MerostatError):
    pass


class DeclarationError(MerostatError):
    """A declared root or pole of a meromorphic handle does not check out."""


# operator identity / numerics
class SingularOperator(MerostatError):
    pass


class NearSingular(MerostatError):
    pass


class InvalidRegion(MerostatError):
    pass


class GridTooCoarse(MerostatError):
    pass


class OutOfDomain(MerostatError):
    pass
