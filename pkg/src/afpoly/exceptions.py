"""Exception hierarchy shared by all afpoly modules."""


class AfpolyError(Exception):
    """Base class for every error raised by this package."""


class HexSystemError(AfpolyError, ValueError):
    """Invalid hexagonal-system input."""


class HexSyntaxError(HexSystemError):
    pass


class AdjacentFusionError(HexSystemError):
    """Two fusions of one hexagon point in neighbouring directions, so three
    hexagons would share a vertex."""


class OverlapError(HexSystemError):
    """Two hexagons occupy the same cell, or unfused hexagons touch."""


class DanglingReferenceError(HexSystemError):
    """A branch direction that is not followed by a child node."""


class SizeGuardError(AfpolyError):
    """The brute-force oracle refuses an instance above its size bound."""


class InvariantError(AfpolyError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
