"""Exact evaluation of order-k additive recurrences at any signed index.

lucas_at/fib_at walk the k-term sum recurrence forward and backward from the
initial window; q_at/h_at expose the negative-index companions Q_n = L_{-n},
H_n = F_{-n}.  Everything else in the package is validated against the
tables built here, so this module deliberately stays dumb: window recurrence
only, no closed forms, no floating point.
"""

from collections import deque, namedtuple

from .errors import ParameterError, RangeError


class TermTable:
    """Contiguous memo of one sequence over [lo, hi], grown on demand.

    A window of k consecutive values with running sum s steps forward via
    new = s and backward via new = 2*top - s (top = highest-index entry),
    both O(1) big-int operations per index.
    """

    def __init__(self, k, lo, seed_vals):
        if k < 2:
            raise ParameterError(f"order k must be >= 2, got {k}")
        if len(seed_vals) != k:
            raise ParameterError("seed window must hold exactly k values")
        self.k = k
        self.lo = lo
        self.vals = list(seed_vals)

    @property
    def hi(self):
        return self.lo + len(self.vals) - 1

    def _grow_hi(self, n):
        k, vals = self.k, self.vals
        s = sum(vals[-k:])
        for _ in range(n - self.hi):
            vals.append(s)
            s += vals[-1] - vals[-1 - k]

    def _grow_lo(self, n):
        # window [idx, idx+k-1]; L_{idx-1} = 2*L_{idx+k-1} - window sum
        win = deque(self.vals[: self.k])
        s = sum(win)
        ext = []
        for _ in range(self.lo - n):
            top = win.pop()
            new = 2 * top - s
            s += new - top
            win.appendleft(new)
            ext.append(new)
        ext.reverse()
        self.vals = ext + self.vals
        self.lo = n

    def at(self, n):
        if n < self.lo:
            self._grow_lo(n)
        elif n > self.hi:
            self._grow_hi(n)
        return self.vals[n - self.lo]

    def window(self, lo, hi):
        """Values at lo..hi inclusive, materializing as needed."""
        if lo > hi:
            raise RangeError(f"bad window [{lo}, {hi}]")
        self.at(lo)
        self.at(hi)
        return self.vals[lo - self.lo : hi - self.lo + 1]


_lucas_tables = {}
_fib_tables = {}


def _lucas_table(k):
    t = _lucas_tables.get(k)
    if t is None:
        t = _lucas_tables[k] = TermTable(k, 2 - k, [0] * (k - 2) + [2, 1])
    return t


def _fib_table(k):
    t = _fib_tables.get(k)
    if t is None:
        t = _fib_tables[k] = TermTable(k, 2 - k, [0] * (k - 1) + [1])
    return t


def clear_cache():
    """Drop every memoized term table."""
    _lucas_tables.clear()
    _fib_tables.clear()


def lucas_at(k, n):
    """L_n: order-k sum recurrence with L_0 = 2, L_1 = 1, zeros before."""
    return _lucas_table(k).at(n)


def fib_at(k, n):
    """F_n: order-k sum recurrence with F_1 = 1, zeros at 2-k..0."""
    return _fib_table(k).at(n)


def q_at(k, n):
    """Companion Q_n = L_{-n}; n must be >= 0."""
    if n < 0:
        raise RangeError(f"companion index must be >= 0, got {n}")
    return _lucas_table(k).at(-n)


def h_at(k, n):
    """Companion H_n = F_{-n}; n must be >= 0."""
    if n < 0:
        raise RangeError(f"companion index must be >= 0, got {n}")
    return _fib_table(k).at(-n)


def q_range(k, lo, hi):
    """List of Q_n for n = lo..hi inclusive (lo >= 0)."""
    if lo < 0:
        raise RangeError(f"companion index must be >= 0, got {lo}")
    return _lucas_table(k).window(-hi, -lo)[::-1]


def h_range(k, lo, hi):
    """List of H_n for n = lo..hi inclusive (lo >= 0)."""
    if lo < 0:
        raise RangeError(f"companion index must be >= 0, got {lo}")
    return _fib_table(k).window(-hi, -lo)[::-1]


def _q_short_table(k, n):
    q = [q_at(k, i) for i in range(min(n, k) + 1)]
    for m in range(k + 1, n + 1):
        q.append(2 * q[m - k] - q[m - k - 1])
    return q


def q_short_recurrence(k, n):
    """Q_n via the sparse rule Q_m = 2Q_{m-k} - Q_{m-k-1} (valid m >= k+1),
    seeded with the directly computed window Q_0..Q_k."""
    if n < 0:
        raise RangeError(f"companion index must be >= 0, got {n}")
    return _q_short_table(k, n)[n]


AuditReport = namedtuple("AuditReport", ["checks_passed", "first_failure"])


def identity_audit(k, n_max):
    """Scan n = 0..n_max for the doubling identities and recurrence agreement.

    Checks Q_n = 2H_{n-1} - H_n (reading H_{-1} as F_1 = 1), L_n = 2F_{n+1} - F_n,
    and q_at == q_short_recurrence.  Returns AuditReport(checks_passed,
    first_failure); first_failure is None when everything holds.
    """
    if n_max < 1:
        raise ParameterError(f"scan limit must be >= 1, got {n_max}")
    qs = q_range(k, 0, n_max)
    hs = h_range(k, 0, n_max)
    short = _q_short_table(k, n_max)
    passed = 0
    for n in range(n_max + 1):
        h_prev = hs[n - 1] if n >= 1 else fib_at(k, 1)
        if qs[n] != 2 * h_prev - hs[n]:
            return AuditReport(passed, n)
        passed += 1
        if lucas_at(k, n) != 2 * fib_at(k, n + 1) - fib_at(k, n):
            return AuditReport(passed, n)
        passed += 1
        if qs[n] != short[n]:
            return AuditReport(passed, n)
        passed += 1
    return AuditReport(passed, None)
