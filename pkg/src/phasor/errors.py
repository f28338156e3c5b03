"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`PhasorError`,
so callers (and the CLI) can separate mathematical/domain failures from bugs.
"""


class PhasorError(Exception):
    """Base class for all domain errors."""


# -- expressions ------------------------------------------------------------

class ParseError(PhasorError):
    """Syntax error in an expression; ``offset`` is the 1-based byte column."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.reason = message


class UnknownIdentifierError(ParseError):
    pass


class ArityError(ParseError):
    pass


class NonHolomorphicError(PhasorError):
    pass


class ZeroOutsideDiskError(PhasorError):
    pass


class NonUnimodularError(PhasorError):
    pass


# -- analysis ---------------------------------------------------------------

class SingularOnPathError(PhasorError):
    def __init__(self, point):
        super().__init__(f"function is zero or singular on the path near {point!r}")
        self.point = point


class RefinementExhaustedError(PhasorError):
    pass


class SingularPointError(PhasorError):
    pass


class SingularOnCircleError(PhasorError):
    pass


class TooFewValidSamplesError(PhasorError):
    pass


class PeriodicityInconsistencyError(PhasorError):
    pass


# -- flow -------------------------------------------------------------------

class StagnationError(PhasorError):
    pass


class SeedClassificationError(PhasorError):
    pass


class BoundViolationError(PhasorError):
    pass


# -- boundary value problems ------------------------------------------------

class DiscontinuousColoringError(PhasorError):
    pass


class NonzeroChromaticNumberError(PhasorError):
    def __init__(self, chrom):
        super().__init__(f"nonzero chromatic number ({chrom}); no continuous analytic extension")
        self.chrom = chrom


class ChromaticMismatchError(PhasorError):
    pass


class LocationOnBoundaryError(PhasorError):
    pass
