"""Conservative disc arithmetic over mpmath reals/complexes.

A Disc is a center plus an error radius; every operation widens the radius
by a worst-case bound for the operands' radii plus a rounding slop of a few
ulps at the working precision.  The slop makes the enclosures slightly
pessimistic, which is the safe direction: all downstream certificates
(root containment, modulus separation, band membership) only ever conclude
from "the enclosures are disjoint/contained with margin", so widening can
cost a precision doubling but never a wrong verdict.
"""

import mpmath
from mpmath import mp, mpf

from .errors import CertificationError


def _slop(mid_abs):
    # a few ulps at the current precision, scaled to the result size
    return (mid_abs + mpf(2) ** (-mp.prec)) * mpf(2) ** (4 - mp.prec)


class Disc:
    """Closed disc {w : |w - mid| <= rad}; real when mid is real (mpf)."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpmath.mpmathify(mid)
        self.rad = mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        o = _as_disc(other)
        mid = self.mid + o.mid
        return Disc(mid, self.rad + o.rad + _slop(abs(mid)))

    __radd__ = __add__

    def __neg__(self):
        return Disc(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_as_disc(other))

    def __rsub__(self, other):
        return _as_disc(other) + (-self)

    def __mul__(self, other):
        o = _as_disc(other)
        mid = self.mid * o.mid
        rad = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return Disc(mid, rad + _slop(abs(mid)))

    __rmul__ = __mul__

    def reciprocal(self):
        m = abs(self.mid)
        if m <= self.rad:
            raise CertificationError("reciprocal of a disc containing zero")
        mid = 1 / self.mid
        return Disc(mid, self.rad / (m * (m - self.rad)) + _slop(abs(mid)))

    def __truediv__(self, other):
        return self * _as_disc(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_disc(other) * self.reciprocal()

    def pow_int(self, e):
        """self**e for integer e >= 0 by disc square-and-multiply."""
        if e < 0:
            return self.pow_int(-e).reciprocal()
        result = Disc(mpf(1))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- set predicates / projections -----------------------------------
    def abs_interval(self):
        """Interval [lo, hi] guaranteed to contain |w| for w in the disc."""
        a = abs(self.mid)
        lo = a - self.rad
        return (lo if lo > 0 else mpf(0), a + self.rad)

    def contains_disc(self, other, margin=mpf("1e-6")):
        """True if other (shrunk notionally) sits strictly inside self."""
        return abs(other.mid - self.mid) + other.rad <= self.rad * (1 - margin)

    def contains_point(self, w):
        return abs(mpmath.mpmathify(w) - self.mid) <= self.rad

    def conjugate(self):
        return Disc(mpmath.conj(self.mid), self.rad)

    def real_interval(self):
        """[lo, hi] containing Re w (equals the value interval for real discs)."""
        return (mpmath.re(self.mid) - self.rad, mpmath.re(self.mid) + self.rad)

    def arg_interval(self):
        """[lo, hi] containing arg w, via the half-angle of the disc cone.

        Requires the disc to exclude zero.  The returned bounds stay within
        (-pi - d, pi + d) near the branch cut; callers that need a principal
        branch handle wrap-around themselves.
        """
        m = abs(self.mid)
        if m <= self.rad:
            raise CertificationError("argument of a disc containing zero")
        half = mpmath.asin(self.rad / m) * (1 + mpf(2) ** (10 - mp.prec))
        a = mpmath.arg(self.mid)
        return (a - half, a + half)

    def __repr__(self):
        return f"Disc({self.mid}, rad={mpmath.nstr(self.rad, 3)})"


def _as_disc(x):
    return x if isinstance(x, Disc) else Disc(x)


def intervals_disjoint(a, b):
    """True when [a0,a1] and [b0,b1] share no point."""
    return a[1] < b[0] or b[1] < a[0]


def interval_ratio_lower(num, den):
    """Certified lower bound of x/y over x in num, y in den (all > 0)."""
    if num[0] <= 0 or den[0] <= 0:
        raise CertificationError("ratio bound needs positive intervals")
    return num[0] / den[1]
