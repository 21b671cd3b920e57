"""Exception catalog for smale-spectra.

Every error raised by the package derives from SmaleSpectraError, so callers
can catch the whole family with one clause. Individual classes carry no extra
state beyond the message; the message always names the offending object.
"""

from __future__ import annotations


class SmaleSpectraError(Exception):
    """Base class for all package errors."""


class ValidationError(SmaleSpectraError):
    """Well-formed input that violates a structural invariant."""


class BracketUndefined(SmaleSpectraError):
    """Bracket [x, y] requested for points whose coordinate-0 edges differ."""


class OverlappingOrbitSets(ValidationError):
    """Weight data requires disjoint attracting/repelling orbit sets."""


class MismatchedShift(SmaleSpectraError):
    """Operands belong to different edge shifts."""


class NotInStableClass(SmaleSpectraError):
    """Point is not forward-asymptotic to the attracting orbit set."""


class PeriodicPointExcluded(SmaleSpectraError):
    """Operation is defined only off the periodic orbit itself."""


class EmptySupport(SmaleSpectraError):
    """Constructed function or set has empty support."""


class OutsideSupport(SmaleSpectraError):
    """Point evaluation requested outside the declared support."""


class TruncationInsufficient(SmaleSpectraError):
    """Enumeration window is too small to determine the requested value."""


class NonPositiveT(SmaleSpectraError):
    """Theta trace requires t > 0."""


class NonPositiveS(SmaleSpectraError):
    """Zeta trace requires s > 0."""


class NonDiagonalLocalization(SmaleSpectraError):
    """Trace localization must be a diagonal indicator function."""


class InsufficientWindow(SmaleSpectraError):
    """Regression window spans too few shells to fit a slope."""


class UncertifiedCounts(SmaleSpectraError):
    """Shell counts are missing or not certified over the requested window."""


class ReducibleMatrix(SmaleSpectraError):
    """Adjacency matrix is not irreducible; Perron data is ill-posed."""


class ZeroMatrix(SmaleSpectraError):
    """Adjacency matrix has a zero row or column; shift is degenerate."""


class ParseError(SmaleSpectraError):
    """Configuration document is not syntactically valid."""
