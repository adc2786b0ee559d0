"""Exception types shared across the package."""


class FormsenseError(Exception):
    """Base class for all package-specific errors."""


class ParseError(FormsenseError):
    """A data file could not be parsed. Carries a row number when known."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class AsymmetryError(ParseError):
    """Mirrored cells of a dissimilarity matrix disagree."""

    def __init__(self, i, j, left, right):
        self.i, self.j = i, j
        super().__init__(
            f"cells ({i},{j}) and ({j},{i}) disagree: {left!r} vs {right!r}"
        )


class NonZeroDiagonalError(ParseError):
    """A dissimilarity matrix has a non-zero (or missing) diagonal cell."""

    def __init__(self, i, value):
        self.i = i
        super().__init__(f"diagonal cell ({i},{i}) must be 0, got {value!r}")


class ValidationError(FormsenseError):
    """Input data violates a documented invariant. Carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.violations))


class StageOrderError(FormsenseError):
    """An assessment stage was used before its prerequisite completed."""


class CoverageError(StageOrderError):
    """Stage-1 completion requested while products lack comparisons."""

    def __init__(self, under_covered):
        self.under_covered = dict(under_covered)
        names = ", ".join(f"{pid} ({n})" for pid, n in sorted(under_covered.items()))
        super().__init__(f"products with fewer than 3 comparisons: {names}")


class DegenerateShapeError(FormsenseError):
    """A generated profile is geometrically invalid (wall crosses the axis
    or the outline self-intersects)."""


class AllDistancesZeroError(FormsenseError):
    """Every configured distance over observed pairs is zero; the stress
    denominator vanishes."""


class DimensionMismatchError(FormsenseError):
    """Two configurations do not share the same point count and dimension."""


class RankDeficientError(FormsenseError):
    """The regression design matrix is singular (e.g. collinear points)."""


class ZeroVectorError(FormsenseError):
    """A direction was requested from an all-zero coefficient vector."""


class InsufficientVariationError(FormsenseError):
    """A design column is constant and no regularization was requested."""
