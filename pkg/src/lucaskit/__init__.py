"""lucaskit: exact toolkit for order-k additive recurrences.

Covers exact evaluation of the order-k Lucas/Fibonacci sequences at any
signed index, closed forms for the negative-index companions, the census of
indices where the companion vanishes, certified characteristic-root
properties, the linear-forms-in-logarithms bound chain, and the
continued-fraction reduction step, plus a CLI that renders the reports.
"""

from .errors import (
    CertificationError,
    FeasibilityError,
    IntegralityError,
    LucaskitError,
    ParameterError,
    ParityError,
    PrecisionExhaustedError,
    RangeError,
    ReductionFailureError,
    ScanLimitError,
)

__version__ = "0.1.0"

__all__ = [
    "CertificationError",
    "FeasibilityError",
    "IntegralityError",
    "LucaskitError",
    "ParameterError",
    "ParityError",
    "PrecisionExhaustedError",
    "RangeError",
    "ReductionFailureError",
    "ScanLimitError",
    "__version__",
]
