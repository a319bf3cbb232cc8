"""Sign + log10 carrier for numbers far beyond any float or practical int.

Values below 10**18 keep an exact integer alongside the log; comparisons use
the exact integers when both sides have them and the (sign, log10) pair
otherwise.  log10 is a double — ample for bound-chain comparisons, whose
crossovers are separated by whole units in log10.
"""

import math

_EXACT_CUTOFF = 10**18


class LogMagnitude:
    """A real number carried as (sign, log10 |x|), exact int when small."""

    __slots__ = ("sign", "log10", "exact")

    def __init__(self, sign, log10, exact=None):
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {sign}")
        self.sign = sign
        self.log10 = float("-inf") if sign == 0 else float(log10)
        self.exact = exact

    @classmethod
    def from_int(cls, n):
        n = int(n)
        if n == 0:
            return cls(0, float("-inf"), 0)
        sign = 1 if n > 0 else -1
        exact = n if abs(n) < _EXACT_CUTOFF else None
        return cls(sign, math.log10(abs(n)), exact)

    @classmethod
    def from_float(cls, x):
        if x == 0:
            return cls(0, float("-inf"), 0)
        sign = 1 if x > 0 else -1
        return cls(sign, math.log10(abs(x)))

    @classmethod
    def from_log10(cls, log10, sign=1):
        m = cls(sign, log10)
        if m.log10 < 18:
            r = round(sign * 10.0**m.log10)
            # keep an exact value only when the log clearly encodes an integer
            if r != 0 and abs(math.log10(abs(r)) - m.log10) < 1e-12:
                m.exact = r
        return m

    def _key(self):
        # orderable surrogate: sign major, signed log magnitude minor
        return (self.sign, self.sign * self.log10)

    def __eq__(self, other):
        other = _coerce(other)
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        return self._key() == other._key()

    def __lt__(self, other):
        other = _coerce(other)
        if self.exact is not None and other.exact is not None:
            return self.exact < other.exact
        return self._key() < other._key()

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return _coerce(other) < self

    def __ge__(self, other):
        return _coerce(other) <= self

    def __hash__(self):
        return hash(self._key())

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        if self.sign == 0:
            return 0.0
        if self.log10 > 307:
            return self.sign * math.inf
        return self.sign * 10.0**self.log10

    def __repr__(self):
        if self.exact is not None:
            return f"LogMagnitude({self.exact})"
        s = "-" if self.sign < 0 else ""
        return f"LogMagnitude({s}10^{self.log10:.4f})"

    def to_json(self):
        return {"sign": self.sign, "log10": self.log10, "exact": self.exact}


def _coerce(x):
    if isinstance(x, LogMagnitude):
        return x
    if isinstance(x, int):
        return LogMagnitude.from_int(x)
    if isinstance(x, float):
        return LogMagnitude.from_float(x)
    raise TypeError(f"cannot compare LogMagnitude with {type(x).__name__}")
