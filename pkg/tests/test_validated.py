"""Certified disc arithmetic: every operation must enclose the exact result."""

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from lucaskit.errors import CertificationError
from lucaskit.validated import Disc, intervals_disjoint

finite = st.floats(min_value=-8, max_value=8, allow_nan=False)
small_rad = st.floats(min_value=0, max_value=0.25, allow_nan=False)
unit = st.floats(min_value=0, max_value=1, allow_nan=False)
angle = st.floats(min_value=0, max_value=6.283, allow_nan=False)


def sample_point(disc, frac, theta):
    """A point guaranteed to lie inside the disc."""
    return disc.mid + disc.rad * frac * mpmath.exp(1j * mpf(theta))


@settings(deadline=None, max_examples=80)
@given(finite, finite, small_rad, finite, finite, small_rad, unit, angle, unit, angle)
def test_sum_and_product_enclose(ar, ai, arad, br, bi, brad, f1, t1, f2, t2):
    with mp.workdps(30):
        a = Disc(mpmath.mpc(ar, ai), mpf(arad))
        b = Disc(mpmath.mpc(br, bi), mpf(brad))
        pa, pb = sample_point(a, f1, t1), sample_point(b, f2, t2)
        assert (a + b).contains_point(pa + pb)
        assert (a * b).contains_point(pa * pb)
        assert (a - b).contains_point(pa - pb)


@settings(deadline=None, max_examples=60)
@given(finite, finite, unit, angle)
def test_reciprocal_encloses(ar, ai, frac, theta):
    with mp.workdps(30):
        mid = mpmath.mpc(ar, ai)
        if abs(mid) < 0.1:
            return
        a = Disc(mid, mpf(0.01))
        p = sample_point(a, frac, theta)
        assert a.reciprocal().contains_point(1 / p)
        assert (1 / a).contains_point(1 / p)


@settings(deadline=None, max_examples=40)
@given(finite, finite, unit, angle, st.integers(min_value=-6, max_value=9))
def test_integer_powers_enclose(ar, ai, frac, theta, e):
    with mp.workdps(40):
        mid = mpmath.mpc(ar, ai)
        if abs(mid) < 0.2:
            return
        a = Disc(mid, mpf(0.005))
        p = sample_point(a, frac, theta)
        assert a.pow_int(e).contains_point(p ** e)


def test_reciprocal_rejects_zero_straddle():
    with pytest.raises(CertificationError):
        Disc(mpmath.mpc(0.001, 0), mpf(0.01)).reciprocal()


@settings(deadline=None, max_examples=60)
@given(finite, finite, small_rad, unit, angle)
def test_abs_and_arg_intervals(ar, ai, rad, frac, theta):
    with mp.workdps(30):
        a = Disc(mpmath.mpc(ar, ai), mpf(rad))
        p = sample_point(a, frac, theta)
        lo, hi = a.abs_interval()
        assert lo <= abs(p) <= hi
        if abs(a.mid) > rad + 0.01:
            alo, ahi = a.arg_interval()
            assert alo <= mpmath.arg(p) <= ahi or abs(mpmath.arg(p)) > 3.1


def test_arg_interval_needs_zero_excluded():
    with pytest.raises(CertificationError):
        Disc(mpmath.mpc(0, 0.001), mpf(0.01)).arg_interval()


def test_conjugate_mirrors():
    with mp.workdps(30):
        a = Disc(mpmath.mpc(1.5, -2.25), mpf("1e-10"))
        c = a.conjugate()
        assert c.mid == mpmath.conj(a.mid)
        assert c.rad == a.rad


def test_real_interval():
    with mp.workdps(30):
        lo, hi = Disc(mpf(3), mpf("0.5")).real_interval()
        assert lo <= 3 <= hi and hi - lo >= 1


def test_intervals_disjoint():
    assert intervals_disjoint((mpf(0), mpf(1)), (mpf(2), mpf(3)))
    assert not intervals_disjoint((mpf(0), mpf(2)), (mpf(1), mpf(3)))
