"""Validated continued fractions and the Baker-Davenport reduction.

ValidatedReal is an exact rational interval: every floor taken during a
continued-fraction expansion is certified against the interval, so the
convergents produced are provably those of any number inside it.  The
reduction step walks convergents q > 6M of tau, certifies
eps = ||mu*q|| - M*||tau*q|| > 0 at the interval's lower end, and converts
the analytic cap M into a small cap on the exponent w.  Parameter
construction for the odd-order problems pulls certified root enclosures
from `roots` and reduces the two angle parameters to the principal branch.
"""

import math
from collections import namedtuple
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import roots as roots_mod
from .errors import (
    ParameterError,
    ParityError,
    PrecisionExhaustedError,
    RangeError,
    ReductionFailureError,
)

_HALF = Fraction(1, 2)


def _to_fraction(x):
    """Exact conversion; mpf values are dyadic rationals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ParameterError("cannot convert non-finite value")
        return Fraction(x)
    if isinstance(x, mpf):
        sign, man, exp, _ = x._mpf_
        if man == 0:
            if x == 0:
                return Fraction(0)
            raise ParameterError("cannot convert non-finite value")
        val = Fraction(int(man), 1) * Fraction(2) ** exp
        return -val if sign else val
    raise ParameterError(f"unsupported numeric type {type(x).__name__}")


class ValidatedReal:
    """Exact closed interval [lo, hi] carried as rationals."""

    __slots__ = ("lo", "hi")

    def __init__(self, value, abs_error):
        err = _to_fraction(abs_error)
        if err <= 0:
            raise ParameterError("abs_error must be positive")
        mid = _to_fraction(value)
        self.lo = mid - err
        self.hi = mid + err

    @classmethod
    def from_interval(cls, lo, hi):
        self = cls.__new__(cls)
        self.lo = _to_fraction(lo)
        self.hi = _to_fraction(hi)
        if self.hi < self.lo:
            raise ParameterError("empty interval")
        return self

    @property
    def value(self):
        return (self.lo + self.hi) / 2

    @property
    def abs_error(self):
        return (self.hi - self.lo) / 2

    def certified_floor(self):
        f = self.lo.__floor__()
        if self.hi.__floor__() != f:
            raise PrecisionExhaustedError(
                "floor ambiguous: interval spans an integer boundary"
            )
        return f

    def shift(self, n):
        return ValidatedReal.from_interval(self.lo - n, self.hi - n)

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return ValidatedReal.from_interval(1 / self.hi, 1 / self.lo)

    def scale(self, n):
        if n >= 0:
            return ValidatedReal.from_interval(self.lo * n, self.hi * n)
        return ValidatedReal.from_interval(self.hi * n, self.lo * n)

    def nearest_integer_distance(self):
        """Certified interval for the distance to the nearest integer.

        The distance function is a tent map: zero at integers, peaking at
        1/2 on half-integers, monotone between; so the extrema over an
        interval are determined by the endpoints and whether an integer or
        half-integer lies inside.
        """
        lo, hi = self.lo, self.hi
        if hi - lo >= 1:
            return Fraction(0), _HALF

        def d(y):
            frac = y - math.floor(y)
            return min(frac, 1 - frac)

        d_min = Fraction(0) if math.ceil(lo) <= math.floor(hi) else min(d(lo), d(hi))
        if math.ceil(lo - _HALF) <= math.floor(hi - _HALF):
            d_max = _HALF
        else:
            d_max = max(d(lo), d(hi))
        return d_min, d_max

    def __repr__(self):
        return f"ValidatedReal({float(self.value)!r}, +/-{float(self.abs_error):.3g})"


ContinuedFraction = namedtuple("ContinuedFraction", ["quotients", "convergents"])


def _quotient_stream(x):
    """Yields (a_i, p_i, q_i); raises on ambiguity.

    A remainder interval containing zero means the input is consistent with
    an exact rational whose expansion ends here; that is flagged on the
    exception so callers can tell a structural dead end from a precision
    shortfall.
    """
    p_prev, q_prev = 1, 0
    p, q = None, None
    i = 0
    while True:
        try:
            a = x.certified_floor()
        except PrecisionExhaustedError as exc:
            # An interval straddling exactly one integer n is consistent with
            # x_i == n, i.e. with the expansion terminating here; the input is
            # then indistinguishable from that rational.  A wider straddle is
            # an ordinary precision shortfall.
            lo, hi = x.lo, x.hi
            n = math.ceil(lo)
            if math.floor(hi) == n:
                q_cand = 1 if p is None else n * q + q_prev
                exc.args = (
                    f"partial quotient a_{i} ambiguous: value indistinguishable "
                    f"from a rational with denominator {q_cand}; raise precision "
                    f"if it is irrational",
                )
                exc.rational_collapse = True
            else:
                exc.args = (f"partial quotient a_{i} ambiguous: {exc.args[0]}",)
                exc.rational_collapse = False
            exc.quotient_index = i
            raise
        if i > 0 and a < 1:
            raise ParameterError(f"nonpositive partial quotient a_{i} = {a}")
        if p is None:
            p, q = a, 1
        else:
            p, q, p_prev, q_prev = a * p + p_prev, a * q + q_prev, p, q
        yield a, p, q
        rem = x.shift(a)
        try:
            x = rem.reciprocal()
        except ZeroDivisionError:
            exc = PrecisionExhaustedError(
                f"remainder after a_{i} contains zero: value indistinguishable "
                f"from a rational with denominator {q}; raise precision if it "
                f"is irrational"
            )
            exc.quotient_index = i + 1
            exc.rational_collapse = True
            raise exc from None
        i += 1


def continued_fraction(x, q_limit):
    """Expansion of x with certified quotients, through the first q > q_limit."""
    if q_limit < 1:
        raise ParameterError(f"q_limit must be >= 1, got {q_limit}")
    quotients, convergents = [], []
    for a, p, q in _quotient_stream(x):
        quotients.append(a)
        convergents.append((p, q))
        if q > q_limit:
            return ContinuedFraction(quotients, convergents)
        if len(quotients) > 100_000:
            raise PrecisionExhaustedError("expansion did not reach q_limit")


ReductionProblem = namedtuple("ReductionProblem", ["tau", "mu", "A", "B", "M"])

ReductionResult = namedtuple(
    "ReductionResult", ["index", "q", "epsilon", "w_cap", "attempts"]
)

_MAX_ATTEMPTS = 50


def _as_validated(x, rel=Fraction(1, 10**30)):
    if isinstance(x, ValidatedReal):
        return x
    f = _to_fraction(x)
    pad = abs(f) * rel if f else rel
    return ValidatedReal.from_interval(f - pad, f + pad)


def bd_reduce(problem):
    """Baker-Davenport reduction: certified cap on w for u <= M.

    Walks convergents p/q of tau with q > 6M; at each, requires the
    certified lower end of eps = ||mu*q|| - M*||tau*q|| to be positive,
    then caps w by the largest integer strictly below log(A*q/eps)/log(B)
    (upper ends of A and the log argument, lower end of B, so the cap only
    ever errs upward).  Lemma contract: no solution with u <= M carries a
    w above w_cap.
    """
    tau, mu = problem.tau, problem.mu
    A, B = _as_validated(problem.A), _as_validated(problem.B)
    M = int(problem.M)
    if M < 1 or A.lo <= 0 or B.lo <= 1:
        raise ParameterError("need M >= 1, A > 0, B > 1")
    needed = 2 * len(str(6 * M)) + 30
    if tau.abs_error > Fraction(1, 10**needed):
        raise PrecisionExhaustedError(
            f"tau needs at most 1e-{needed} error for M = {M:.3g}"
        )
    attempts = []
    stream = _quotient_stream(tau)
    try:
        for idx, (_a, _p, q) in enumerate(stream):
            if q <= 6 * M:
                continue
            mu_dist_lo, _ = mu.scale(q).nearest_integer_distance()
            _, tau_dist_hi = tau.scale(q).nearest_integer_distance()
            eps_lo = mu_dist_lo - M * tau_dist_hi
            attempts.append({"index": idx, "q": q, "eps_lo": float(eps_lo)})
            if eps_lo > 0:
                with mp.workdps(60):
                    ratio = (mpf(A.hi.numerator) / A.hi.denominator) * q
                    ratio /= mpf(eps_lo.numerator) / eps_lo.denominator
                    x = mpmath.log(ratio) / mpmath.log(
                        mpf(B.lo.numerator) / B.lo.denominator
                    )
                    w_cap = int(mpmath.ceil(x * (1 + mpf(10) ** -40))) - 1
                return ReductionResult(idx, q, float(eps_lo), w_cap, attempts)
            if len(attempts) >= _MAX_ATTEMPTS:
                raise ReductionFailureError(
                    f"no certified eps > 0 in {_MAX_ATTEMPTS} convergents; "
                    f"trace: {attempts}"
                )
    except PrecisionExhaustedError as exc:
        if getattr(exc, "rational_collapse", False):
            raise ReductionFailureError(
                f"convergent walk ended: {exc.args[0]}; trace: {attempts}"
            ) from exc
        raise
    raise ReductionFailureError(f"convergent stream ended; trace: {attempts}")


def _disc_arg_interval(d):
    """Outward-padded argument interval of a disc, principal branch."""
    lo, hi = d.arg_interval()
    pad = mpf(2) ** (8 - mp.prec)
    return lo - pad, hi + pad


def build_odd_problem(k, M, policy=None):
    """Reduction parameters for the odd-order problem at analytic cap M.

    tau = -2*arg(s)/pi and mu = 2*arg(f(s)/(2s-1))/pi for s the smallest
    root (negative imaginary part), both on the principal branch;
    A = 20/|f(s)|; B = |second smallest|/|s|.  All four are returned as
    exact validated intervals derived from certified enclosures.
    """
    if k % 2 == 0:
        raise ParityError(f"odd-order problem needs odd k, got {k}")
    if k < 5:
        raise RangeError(f"odd-order problem needs k >= 5, got {k}")
    M = int(M)
    digits_needed = 2 * len(str(6 * M)) + 40
    policy = policy or roots_mod.default_policy(k, start_digits=max(400, digits_needed))
    if k <= roots_mod._FULL_SOLVE_MAX_K:
        sys_ = roots_mod.solve(k, policy)
        digits = sys_.digits
        small = sys_.smallest()
        second = sys_.all_roots[-3]  # next class below the smallest pair
    else:
        sel = roots_mod.smallest_classes(k, 4, policy)
        digits = sel.digits
        small, second = sel.discs[0], sel.discs[2]
    with mp.workdps(digits):
        arg_lo, arg_hi = _disc_arg_interval(small)
        tau = _div_by_pi(-2 * arg_hi, -2 * arg_lo, digits)
        fv = roots_mod.f_value(k, small)
        w = fv / (2 * small - 1)
        warg_lo, warg_hi = _disc_arg_interval(w)
        mu = _div_by_pi(2 * warg_lo, 2 * warg_hi, digits)
        f_lo = abs(fv.mid) - fv.rad
        f_hi = abs(fv.mid) + fv.rad
        if f_lo <= 0:
            raise ParameterError("weight enclosure touches zero")
        A = ValidatedReal.from_interval(
            Fraction(20) / _to_fraction(f_hi), Fraction(20) / _to_fraction(f_lo)
        )
        slo, shi = small.abs_interval()
        qlo, qhi = second.abs_interval()
        B = ValidatedReal.from_interval(
            _to_fraction(qlo) / _to_fraction(shi), _to_fraction(qhi) / _to_fraction(slo)
        )
        if B.lo <= 1:
            raise ParameterError("modulus ratio not certified > 1")
    return ReductionProblem(tau, mu, A, B, M)


def _div_by_pi(num_lo, num_hi, digits):
    """Exact interval quotient [num_lo, num_hi] / pi, outward-rounded."""
    with mp.workdps(digits + 10):
        p = _to_fraction(+mpmath.pi)
    pad = Fraction(1, 10 ** (digits + 5))
    pi_lo, pi_hi = p - pad, p + pad
    a, b = _to_fraction(num_lo), _to_fraction(num_hi)
    quotients = [a / pi_lo, a / pi_hi, b / pi_lo, b / pi_hi]
    return ValidatedReal.from_interval(min(quotients), max(quotients))


def reduce_odd_k(k, M, policy=None):
    """Composes the odd-order problem with the reduction; caps n = w - 1."""
    problem = build_odd_problem(k, M, policy)
    result = bd_reduce(problem)
    return {"k": k, "R_k": result.w_cap - 1, "result": result, "problem": problem}
