"""Tests for validated continued fractions and the convergent reduction."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lucaskit import reduction as red
from lucaskit.errors import (
    ParameterError,
    ParityError,
    PrecisionExhaustedError,
    RangeError,
    ReductionFailureError,
)

F = Fraction


def sqrt2_interval(digits=80):
    """sqrt(2) bracketed by integer square root, independent of mpmath."""
    n = math.isqrt(2 * 10 ** (2 * digits))
    return red.ValidatedReal.from_interval(
        F(n, 10**digits), F(n + 1, 10**digits)
    )


def golden_interval(digits=80):
    n = math.isqrt(5 * 10 ** (2 * digits))
    lo = (1 + F(n, 10**digits)) / 2
    hi = (1 + F(n + 1, 10**digits)) / 2
    return red.ValidatedReal.from_interval(lo, hi)


# ---------------------------------------------------------------------------
# ValidatedReal


def test_interval_construction_is_exact():
    x = red.ValidatedReal(0.5, F(1, 100))  # 0.5 is dyadic: no float fuzz
    assert x.lo == F(49, 100) and x.hi == F(51, 100)
    assert x.value == F(1, 2)
    assert x.abs_error == F(1, 100)


def test_interval_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        red.ValidatedReal(1, 0)
    with pytest.raises(ParameterError):
        red.ValidatedReal.from_interval(F(2), F(1))
    with pytest.raises(ParameterError):
        red.ValidatedReal(float("inf"), F(1, 10))


def test_certified_floor():
    assert red.ValidatedReal(F(5, 2), F(1, 10)).certified_floor() == 2
    assert red.ValidatedReal(F(-5, 2), F(1, 10)).certified_floor() == -3
    with pytest.raises(PrecisionExhaustedError):
        red.ValidatedReal(F(3), F(1, 10)).certified_floor()


def test_shift_reciprocal_scale():
    x = red.ValidatedReal.from_interval(F(2), F(4))
    assert (x.shift(1).lo, x.shift(1).hi) == (F(1), F(3))
    r = x.reciprocal()
    assert (r.lo, r.hi) == (F(1, 4), F(1, 2))
    s = x.scale(-3)
    assert (s.lo, s.hi) == (F(-12), F(-6))
    with pytest.raises(ZeroDivisionError):
        red.ValidatedReal.from_interval(F(-1), F(1)).reciprocal()


@pytest.mark.parametrize(
    "lo, hi, want",
    [
        (F(1, 5), F(3, 10), (F(1, 5), F(3, 10))),  # monotone stretch
        (F(2, 5), F(3, 5), (F(2, 5), F(1, 2))),  # half-integer inside
        (F(9, 10), F(11, 10), (F(0), F(1, 10))),  # integer inside
        (F(-3, 10), F(1, 5), (F(0), F(3, 10))),  # zero inside
        (F(0), F(2), (F(0), F(1, 2))),  # wider than one period
    ],
)
def test_nearest_integer_distance_anchors(lo, hi, want):
    x = red.ValidatedReal.from_interval(lo, hi)
    assert x.nearest_integer_distance() == want


@given(
    st.fractions(min_value=-100, max_value=100),
    st.fractions(min_value=F(1, 10**6), max_value=2),
    st.fractions(min_value=0, max_value=1),
)
def test_nearest_integer_distance_encloses_members(mid, width, t):
    x = red.ValidatedReal.from_interval(mid - width, mid + width)
    point = x.lo + (x.hi - x.lo) * t
    frac = point - math.floor(point)
    true_dist = min(frac, 1 - frac)
    d_min, d_max = x.nearest_integer_distance()
    assert d_min <= true_dist <= d_max


# ---------------------------------------------------------------------------
# continued fractions


def test_sqrt2_expansion():
    cf = red.continued_fraction(sqrt2_interval(), 600)
    assert cf.quotients == [1, 2, 2, 2, 2, 2, 2, 2, 2]
    assert cf.convergents[-1] == (1393, 985)
    # consecutive convergents satisfy the +/-1 determinant identity
    for (p0, q0), (p1, q1) in zip(cf.convergents, cf.convergents[1:]):
        assert abs(p1 * q0 - p0 * q1) == 1


def test_golden_ratio_expansion_is_all_ones():
    cf = red.continued_fraction(golden_interval(), 1000)
    assert all(a == 1 for a in cf.quotients)
    # Fibonacci convergents
    assert cf.convergents[-1][1] > 1000
    for (p, q) in cf.convergents:
        assert abs(p * p - p * q - q * q) == 1


def test_exact_rational_expansion_terminates_cleanly():
    x = red.ValidatedReal.from_interval(F(13, 30), F(13, 30))
    cf = red.continued_fraction(x, 20)
    assert cf.quotients == [0, 2, 3, 4]
    assert cf.convergents[-1] == (13, 30)


def test_exact_rational_collapse_is_flagged():
    x = red.ValidatedReal.from_interval(F(13, 30), F(13, 30))
    with pytest.raises(PrecisionExhaustedError) as info:
        red.continued_fraction(x, 100)  # needs q > 100 but the stream ends at 30
    assert info.value.rational_collapse is True
    assert "denominator 30" in str(info.value)


def test_coarse_input_exhausts_precision():
    x = red.ValidatedReal(1.4142135623, F(1, 10**9))
    with pytest.raises(PrecisionExhaustedError) as info:
        red.continued_fraction(x, 10**12)
    assert hasattr(info.value, "quotient_index")
    assert hasattr(info.value, "rational_collapse")


def test_continued_fraction_guards():
    with pytest.raises(ParameterError):
        red.continued_fraction(sqrt2_interval(), 0)


# ---------------------------------------------------------------------------
# convergent reduction


def toy_problem():
    mu = red.ValidatedReal.from_interval(F(1, 2), F(1, 2))
    return red.ReductionProblem(sqrt2_interval(), mu, 10, 2, 100)


def test_toy_reduction_frozen():
    res = red.bd_reduce(toy_problem())
    assert res.q == 985
    assert res.epsilon == pytest.approx(0.464106250137693, rel=1e-12)
    assert res.w_cap == 14
    assert len(res.attempts) == 1
    assert res.attempts[0]["q"] == 985 and res.attempts[0]["eps_lo"] > 0


def test_toy_reduction_epsilon_identity():
    # eps = ||mu q|| - M ||tau q|| with q = 985: both distances are known
    # in closed form for this toy.
    res = red.bd_reduce(toy_problem())
    tau_dist = abs(math.sqrt(2) * 985 - 1393)
    assert res.epsilon == pytest.approx(0.5 - 100 * tau_dist, rel=1e-9)


def test_toy_cap_bounds_every_small_solution():
    # Every u <= M admits some (v, w) with |u*sqrt(2) - v + 1/2| < 10*2^-w;
    # the lemma says none of them needs w above 14.
    res = red.bd_reduce(toy_problem())
    worst = 0
    for u in range(101):
        x = u * math.sqrt(2) + 0.5
        dist = abs(x - round(x))
        # largest w with dist < 10 * 2^-w
        w = math.floor(math.log2(10 / dist)) if dist else math.inf
        worst = max(worst, w)
    assert worst <= res.w_cap


def test_reduction_parameter_guards():
    tau, mu = sqrt2_interval(), red.ValidatedReal.from_interval(F(1, 2), F(1, 2))
    with pytest.raises(ParameterError):
        red.bd_reduce(red.ReductionProblem(tau, mu, 10, 2, 0))
    with pytest.raises(ParameterError):
        red.bd_reduce(red.ReductionProblem(tau, mu, -1, 2, 100))
    with pytest.raises(ParameterError):
        red.bd_reduce(red.ReductionProblem(tau, mu, 10, 1, 100))


def test_reduction_precision_guard():
    coarse = red.ValidatedReal(1.4142135623, F(1, 10**9))
    mu = red.ValidatedReal.from_interval(F(1, 2), F(1, 2))
    with pytest.raises(PrecisionExhaustedError):
        red.bd_reduce(red.ReductionProblem(coarse, mu, 10, 2, 100))


def test_degenerate_rational_tau_fails_reduction():
    # A tau indistinguishable from 13/30 cannot supply a convergent with
    # q > 600, and the collapse is reported as a reduction failure rather
    # than a precision problem.
    tau = red.ValidatedReal(F(13, 30), F(1, 10**80))
    mu = red.ValidatedReal.from_interval(F(1, 2), F(1, 2))
    with pytest.raises(ReductionFailureError):
        red.bd_reduce(red.ReductionProblem(tau, mu, 10, 2, 100))


# ---------------------------------------------------------------------------
# odd-order problem construction


def test_build_odd_problem_k5():
    p = red.build_odd_problem(5, 15 * 10**45)
    assert float(p.tau.value) == pytest.approx(1.6215886859248898, rel=1e-12)
    assert float(p.mu.value) == pytest.approx(1.810601760617758, rel=1e-12)
    assert float(p.A.value) == pytest.approx(164.80123532329722, rel=1e-12)
    assert float(p.B.value) == pytest.approx(1.0638249142676963, rel=1e-12)
    assert p.B.lo > 1 and p.A.lo > 0
    assert p.M == 15 * 10**45
    # tight intervals: the certification digits dwarf what the walk needs
    assert p.tau.abs_error < F(1, 10**200)


def test_build_odd_problem_guards():
    with pytest.raises(ParityError):
        red.build_odd_problem(4, 10**6)
    with pytest.raises(RangeError):
        red.build_odd_problem(3, 10**6)


def test_reduce_odd_k5_frozen():
    out = red.reduce_odd_k(5, 15 * 10**45)
    res = out["result"]
    assert out["k"] == 5
    assert res.index == 97
    assert res.q == 388355479174151582814909048907255439149265199273
    assert 9 * 10**46 < res.q < 3 * 10**57
    assert res.epsilon == pytest.approx(0.316722092825052, rel=1e-9)
    assert res.w_cap == 1872
    assert out["R_k"] == res.w_cap - 1 == 1871
    assert len(res.attempts) == 1
