"""Census of companion zeros: where Q_n = 0, and how that set is organized.

The zero set up to a scan limit is computed purely from the recurrence
tables and then compared against the predicted interval structure: k-2
intervals I_j = [1 + (j-1)(k+1), j*k - 2] whose total size is the triangular
count (k-1)(k-2)/2.  A census never proves anything beyond its scan limit;
reports carry the scanned range for that reason.
"""

from collections import namedtuple

from .engine import q_range
from .errors import ParameterError, ParityError, RangeError, ScanLimitError

IntervalSpec = namedtuple("IntervalSpec", ["j", "lo", "hi"])
ZeroSet = namedtuple("ZeroSet", ["k", "limit", "zeros", "matched", "sporadic"])
SignAudit = namedtuple("SignAudit", ["k", "lo", "hi", "checked", "first_violation"])


def predicted_intervals(k):
    """The k-2 predicted zero intervals; empty for k = 2, [1,1] for k = 3."""
    if k < 2:
        raise ParameterError(f"order k must be >= 2, got {k}")
    if k == 2:
        return []
    if k == 3:
        return [IntervalSpec(1, 1, 1)]
    return [IntervalSpec(j, 1 + (j - 1) * (k + 1), j * k - 2) for j in range(1, k - 1)]


def multiplicity_formula(k):
    """(k-1)(k-2)/2, the predicted total number of companion zeros."""
    if k < 2:
        raise ParameterError(f"order k must be >= 2, got {k}")
    return (k - 1) * (k - 2) // 2


def census(k, limit):
    """Exhaustive zero scan of Q_n over [0, limit], classified by interval.

    Requires limit >= k*k so every predicted interval is inside the window;
    zeros outside all predicted intervals land in `sporadic`.
    """
    if limit < k * k:
        raise ScanLimitError(f"census needs limit >= k^2 = {k * k}, got {limit}")
    intervals = predicted_intervals(k)
    zeros = [n for n, v in enumerate(q_range(k, 0, limit)) if v == 0]
    matched, sporadic = [], []
    for n in zeros:
        if any(spec.lo <= n <= spec.hi for spec in intervals):
            matched.append(n)
        else:
            sporadic.append(n)
    return ZeroSet(k, limit, zeros, matched, sporadic)


def even_sign_audit(k, n_lo, n_hi):
    """Check sign(Q_n) = +1 for even n, -1 for odd n over [n_lo, n_hi].

    Defined for even k only, and only from the index k^2 - 2k - 1 on (below
    that the zeros make the claim false).  A pass over [n_lo, n_hi] also
    certifies there is no zero anywhere in that window.
    """
    if k % 2:
        raise ParityError(f"sign audit is an even-k property, got k={k}")
    threshold = k * k - 2 * k - 1
    if n_lo < threshold:
        raise RangeError(f"sign audit needs n_lo >= k^2-2k-1 = {threshold}, got {n_lo}")
    if n_hi < n_lo:
        raise RangeError(f"bad window [{n_lo}, {n_hi}]")
    vals = q_range(k, n_lo, n_hi)
    checked = 0
    for n, v in zip(range(n_lo, n_hi + 1), vals):
        good = v > 0 if n % 2 == 0 else v < 0
        if not good:
            return SignAudit(k, n_lo, n_hi, checked, n)
        checked += 1
    return SignAudit(k, n_lo, n_hi, checked, None)
