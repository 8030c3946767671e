"""Exception types shared across the package.

Every failure mode that callers are expected to catch gets its own class;
everything else is an ordinary ValueError/TypeError from the stdlib.
"""


class VerlindeError(Exception):
    """Base class for all package-specific errors."""


class IncompatibleSeriesError(VerlindeError):
    """Two series disagree on variables or exponent denominators."""


class WindowError(VerlindeError):
    """A coefficient outside the tracked exactness window was requested,
    or an operation produced an empty window."""


class NonMonomialError(VerlindeError):
    """An operation requires the lowest-order stratum to be a single
    monomial (inversion, rational powers) and it is not."""


class RootError(VerlindeError):
    """A rational power was requested whose leading coefficient is not a
    perfect power, or whose exponent does not land on the exponent grid."""


class GridError(VerlindeError):
    """A substitution or construction produced exponents that do not lie
    on the declared exponent lattice."""


class DegenerateWeightError(VerlindeError):
    """An equivariant weight vanished identically under the chosen
    one-parameter specialization; the caller must pick a different one."""


class SupportBoundaryError(VerlindeError):
    """Series support touched the tracked window boundary, so claimed
    polynomiality in that variable cannot be certified."""


class InsufficientOrderError(VerlindeError):
    """A prediction or verification needs more terms of a universal series
    than were supplied.  The message states the order required."""
