"""Exception hierarchy for lucaskit.

Every error raised on a documented failure path derives from LucaskitError,
so callers can catch the package's failures without masking programming bugs.
"""


class LucaskitError(Exception):
    """Base class for all documented lucaskit failures."""


class ParameterError(LucaskitError):
    """A parameter is outside its documented domain (bad k, bad range, ...)."""


class RangeError(LucaskitError):
    """An index or window is outside the range an operation supports."""


class IntegralityError(LucaskitError):
    """An exact integer was expected but a non-integer value appeared.

    Raised when a closed-form evaluation produces a rational with a
    nontrivial denominator, which would mean the implementation (not the
    input) is wrong; it is surfaced loudly rather than rounded away.
    """


class ParityError(LucaskitError):
    """An operation restricted to one parity of k was called with the other."""


class ScanLimitError(LucaskitError):
    """A scan window is too small to certify the property being scanned."""


class CertificationError(LucaskitError):
    """An interval/enclosure certificate could not be established."""


class FeasibilityError(LucaskitError):
    """A bound-solving routine was handed an infeasible instance."""


class PrecisionExhaustedError(LucaskitError):
    """The adaptive precision ladder hit its ceiling without separating."""


class ReductionFailureError(LucaskitError):
    """The lattice/continued-fraction reduction could not produce a certificate."""
