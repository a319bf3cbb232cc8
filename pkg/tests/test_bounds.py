"""Tests for the log-space bound chain."""

import math

import pytest

from lucaskit import bounds
from lucaskit.errors import FeasibilityError, ParameterError, ParityError, RangeError
from lucaskit.magnitude import LogMagnitude


# ---------------------------------------------------------------------------
# linear-forms lower bound


@pytest.mark.parametrize(
    "t, d, b, heights",
    [
        (1, 2, 10, [0.5]),
        (2, 4, 1000, [3.0, 0.16]),
        (3, 25, 1000, [400.0, 138.6, 7.0]),
        (3, 81, 10**6, [1296.0, 374.0, 12.6]),
    ],
)
def test_matveev_log_lower_matches_direct_formula(t, d, b, heights):
    got = bounds.matveev_log_lower(t, d, b, heights)
    want = (
        -3.0
        * 30.0 ** (t + 4)
        * (t + 1) ** 5.5
        * d
        * d
        * (1 + math.log(d))
        * (1 + math.log(t * b))
        * math.prod(heights)
    )
    assert got < 0
    assert got == pytest.approx(want, rel=1e-13)


def test_matveev_log_lower_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        bounds.matveev_log_lower(0, 2, 10, [])
    with pytest.raises(ParameterError):
        bounds.matveev_log_lower(2, 2, 10, [1.0])  # wrong arity
    with pytest.raises(ParameterError):
        bounds.matveev_log_lower(1, 2, 10, [0.1])  # below the 0.16 floor
    with pytest.raises(ParameterError):
        bounds.matveev_log_lower(1, 0, 10, [1.0])


# ---------------------------------------------------------------------------
# analytic zero-index caps


def test_even_zero_index_cap_anchors():
    assert bounds.even_zero_index_cap(4).log10 == pytest.approx(
        10.886636741564617, rel=1e-14
    )
    assert bounds.even_zero_index_cap(20).log10 == pytest.approx(
        521.7988847997734, rel=1e-14
    )


def test_even_zero_index_cap_matches_direct_formula():
    k = 6
    want = math.log10(2 * math.log(490 * k**2)) + k**2 * math.log10(k)
    assert bounds.even_zero_index_cap(k).log10 == pytest.approx(want, rel=1e-13)


def test_even_zero_index_cap_guards():
    with pytest.raises(ParityError):
        bounds.even_zero_index_cap(5)
    with pytest.raises(RangeError):
        bounds.even_zero_index_cap(2)


def test_odd_zero_index_cap_anchors():
    assert bounds.odd_zero_index_cap(5).log10 == pytest.approx(
        46.29763058144752, rel=1e-14
    )
    assert bounds.odd_zero_index_cap(7).log10 == pytest.approx(
        83.65510474296758, rel=1e-14
    )


def test_odd_zero_index_cap_matches_direct_formula():
    k = 9
    want = (
        math.log10(1.5e17)
        + k**3 * math.log10(1.454)
        + 12 * math.log10(k)
        + 2 * math.log10(math.log(k))
    )
    assert bounds.odd_zero_index_cap(k).log10 == pytest.approx(want, rel=1e-12)


def test_odd_zero_index_cap_guards():
    with pytest.raises(ParityError):
        bounds.odd_zero_index_cap(4)
    with pytest.raises(RangeError):
        bounds.odd_zero_index_cap(3)


# ---------------------------------------------------------------------------
# inversion lemma


def test_invert_bound_float_oracle():
    # r = 1: 2 * H * ln(H)
    assert bounds.invert_bound(1, 1e6) == pytest.approx(
        2e6 * math.log(1e6), rel=1e-13
    )
    # r = 2: 4 * H * ln(H)^2
    assert bounds.invert_bound(2, 1e9) == pytest.approx(
        4e9 * math.log(1e9) ** 2, rel=1e-13
    )


@pytest.mark.parametrize("r, cap", [(1, 1e6), (2, 1e9), (3, 1e12)])
def test_invert_bound_output_actually_caps(r, cap):
    # Any L with L / (ln L)^r < cap satisfies L < output, which holds iff
    # the output itself has output / (ln output)^r >= cap.
    out = bounds.invert_bound(r, cap)
    assert out / math.log(out) ** r >= cap


def test_invert_bound_preserves_magnitude_kind():
    out = bounds.invert_bound(1, LogMagnitude.from_float(1e6))
    assert isinstance(out, LogMagnitude)
    assert float(out) == pytest.approx(2e6 * math.log(1e6), rel=1e-13)


def test_invert_bound_feasibility_floor():
    # r = 1 needs H > 4
    with pytest.raises(FeasibilityError):
        bounds.invert_bound(1, 4)
    bounds.invert_bound(1, 4.5)  # just above the floor: fine
    with pytest.raises(ParameterError):
        bounds.invert_bound(0, 100)
    with pytest.raises(FeasibilityError):
        bounds.invert_bound(1, -3)


# ---------------------------------------------------------------------------
# gap inequality cap


def test_gap_solve_frozen_value():
    cap = bounds.gap_solve(7.93e44, -10.48, 1.78e-8)
    assert isinstance(cap, LogMagnitude)
    assert float(cap) == pytest.approx(1.0801592399334501e55, rel=1e-13)


def test_gap_solve_is_a_sound_cap():
    # At the returned index the inequality has already flipped, and the
    # linear side only grows faster from there, so nothing beyond passes.
    c_log, c_const, c_lin = 7.93e44, -10.48, 1.78e-8
    n_hat = float(bounds.gap_solve(c_log, c_const, c_lin))
    lhs = c_log * math.log(n_hat + 1)
    rhs = c_const + c_lin * (n_hat + 1)
    assert lhs <= rhs


def test_gap_solve_guards():
    with pytest.raises(ParameterError):
        bounds.gap_solve(-1.0, 0.0, 1e-8)
    with pytest.raises(ParameterError):
        bounds.gap_solve(1e44, 0.0, 0.0)


def test_large_k_gap_cap_matches_band_low_ends():
    assert float(bounds.large_k_gap_cap()) == pytest.approx(
        1.0801592399334501e55, rel=1e-13
    )


# ---------------------------------------------------------------------------
# even-k ratio sharpening


@pytest.mark.parametrize("k, expected", [(4, 163), (6, 574), (10, 2770)])
def test_even_ratio_cap_frozen(k, expected):
    assert bounds.even_ratio_cap(k) == expected


def test_even_ratio_cap_defining_inequality():
    # Recompute the k = 4 cap from the certified moduli directly.
    from lucaskit import roots

    sys_ = roots.solve(4)
    ratio = float(sys_.classes[-2]["lo"]) / float(sys_.classes[-1]["hi"])
    cap = bounds.even_ratio_cap(4)
    target = 490 * 16
    assert ratio ** (cap + 1) < target
    assert ratio ** (cap + 2) >= target


def test_even_ratio_cap_guards():
    with pytest.raises(ParityError):
        bounds.even_ratio_cap(5)
    with pytest.raises(RangeError):
        bounds.even_ratio_cap(2)


# ---------------------------------------------------------------------------
# odd-k chain


def test_odd_chain_cap_anchors():
    assert bounds.odd_chain_cap(5).log10 == pytest.approx(
        31.86456064279201, rel=1e-14
    )
    assert bounds.odd_chain_cap(7).log10 == pytest.approx(
        35.10172659071181, rel=1e-14
    )


def test_odd_chain_cap_guards():
    with pytest.raises(ParityError):
        bounds.odd_chain_cap(6)
    with pytest.raises(RangeError):
        bounds.odd_chain_cap(3)


def test_floor_cap_crossover():
    assert bounds.floor_cap_crossover() == 885


def test_crossover_is_the_last_k_under_the_cap():
    from lucaskit.closed_forms import odd_zero_floor

    assert odd_zero_floor(885) <= bounds.odd_chain_cap(885)
    assert odd_zero_floor(887) > bounds.odd_chain_cap(887)


def test_combined_two_adic_cap():
    assert bounds.combined_two_adic_cap() == 365


def test_combined_cap_is_the_last_k_under_the_reduced_cap():
    from lucaskit.closed_forms import odd_zero_floor

    n_cap = bounds.gap_solve(7.93e44, -10.48, 1.78e-8)
    assert odd_zero_floor(365) <= n_cap
    assert odd_zero_floor(367) > n_cap


# ---------------------------------------------------------------------------
# constant-band audit


def test_band_constants_audit_rows():
    rep = bounds.band_constants_audit([501, 885])
    rows = {r["k"]: r for r in rep["samples"]}

    inside = rows[501]
    assert inside["f_log"]["inside"] is True
    assert inside["ratio_log"]["inside"] is True
    assert inside["f_log"]["lo"] == pytest.approx(-10.024298442348432, rel=1e-12)
    assert inside["ratio_log"]["lo"] == pytest.approx(6.957541244273137e-08, rel=1e-9)

    outside = rows[885]
    assert outside["f_log"]["inside"] is False
    assert outside["ratio_log"]["inside"] is False
    assert outside["f_log"]["lo"] == pytest.approx(-10.592833370660253, rel=1e-12)
    assert outside["ratio_log"]["lo"] == pytest.approx(1.2637143392918585e-08, rel=1e-9)

    assert rep["all_inside"] is False
    assert rep["f_band"] == (-10.48, -10.02)
    assert rep["ratio_band"] == (1.78e-08, 1.04e-07)


def test_band_constants_audit_guards():
    with pytest.raises(RangeError):
        bounds.band_constants_audit([500])
    with pytest.raises(RangeError):
        bounds.band_constants_audit([887])
