"""The explicit bound chain for reversed-index zeros.

Evaluates the linear-forms-in-logarithms lower bound, the even/odd
zero-index caps (numbers far beyond machine range, carried as
LogMagnitude), the inversion lemma for bounds of the shape
L/(log L)^r < H, the sharpened even-k ratio cap, and the odd-k chain
that pits the 2-adic growth floor 2^((k-1)/2) against the analytic cap
— whose crossover pins down the largest feasible order.  Everything here
is plain log-space arithmetic; certified root data comes from `roots`.
"""

import math

import mpmath
from mpmath import mp, mpf

from . import roots as roots_mod
from .closed_forms import odd_zero_floor
from .errors import FeasibilityError, ParameterError, ParityError, RangeError
from .magnitude import LogMagnitude

_LOG_DPS = 50


def matveev_log_lower(t, field_degree, exp_cap, heights):
    """Natural-log lower bound for the nonzero linear form in t logarithms.

    Returns -3*30^(t+4)*(t+1)^5.5*d^2*(1+ln d)*(1+ln(t*B))*prod(A_i)
    where d = field_degree, B = exp_cap and A_i are the height parameters
    (each at least 0.16, the floor built into the height definition).
    """
    if t < 1 or field_degree < 1 or exp_cap < 1:
        raise ParameterError("need t >= 1, field_degree >= 1, exp_cap >= 1")
    heights = list(heights)
    if len(heights) != t:
        raise ParameterError(f"expected {t} height parameters, got {len(heights)}")
    if any(a < 0.16 for a in heights):
        raise ParameterError("height parameters must be >= 0.16")
    d = float(field_degree)
    out = -3.0 * 30.0 ** (t + 4) * (t + 1) ** 5.5
    out *= d * d * (1 + math.log(d)) * (1 + math.log(t * exp_cap))
    return out * math.prod(heights)


def even_zero_index_cap(k):
    """Analytic zero-index cap 2*k^(k^2)*ln(490k^2) for even k >= 4."""
    if k % 2:
        raise ParityError(f"even-order cap needs even k, got {k}")
    if k < 4:
        raise RangeError(f"even-order cap needs k >= 4, got {k}")
    with mp.workdps(_LOG_DPS):
        log10 = k**2 * mpmath.log10(k) + mpmath.log10(2 * mpmath.log(490 * k**2))
        return LogMagnitude.from_log10(log10)


def odd_zero_index_cap(k):
    """Analytic zero-index cap 1.5e17*1.454^(k^3)*k^12*(ln k)^2, odd k >= 5."""
    if k % 2 == 0:
        raise ParityError(f"odd-order cap needs odd k, got {k}")
    if k < 5:
        raise RangeError(f"odd-order cap needs k >= 5, got {k}")
    with mp.workdps(_LOG_DPS):
        log10 = (
            mpmath.log10(mpf("1.5e17"))
            + k**3 * mpmath.log10(mpf("1.454"))
            + 12 * mpmath.log10(k)
            + 2 * mpmath.log10(mpmath.log(k))
        )
        return LogMagnitude.from_log10(log10)


def invert_bound(r, cap):
    """Largest-solution cap for L/(ln L)^r < H: returns 2^r * H * (ln H)^r.

    `cap` (H) may be a number or a LogMagnitude; the result matches the
    input's kind.  Requires H > (4r^2)^r for the inversion to be valid.
    """
    if r < 1:
        raise ParameterError(f"log exponent r must be >= 1, got {r}")
    with mp.workdps(_LOG_DPS):
        if isinstance(cap, LogMagnitude):
            if cap.sign <= 0:
                raise FeasibilityError("cap must be positive")
            log10_h = mpf(cap.log10)
        else:
            if cap <= 0:
                raise FeasibilityError("cap must be positive")
            log10_h = mpmath.log10(mpf(cap))
        floor_log10 = r * mpmath.log10(4 * mpf(r) ** 2)
        if log10_h <= floor_log10:
            raise FeasibilityError(
                f"inversion needs H > (4r^2)^r = {float(10**floor_log10):g}"
            )
        ln_h = log10_h * mpmath.log(10)
        log10_out = r * mpmath.log10(2) + log10_h + r * mpmath.log10(ln_h)
        if isinstance(cap, LogMagnitude):
            return LogMagnitude.from_log10(log10_out)
        return float(mpf(10) ** log10_out)


def gap_solve(c_log, c_const, c_lin):
    """Cap on n for inequalities c_log*ln(n+1) > c_const + c_lin*(n+1).

    Solved by inverting H = c_log/c_lin; the additive constant is dwarfed
    by the linear term at the crossover scale and does not enter the cap.
    """
    if c_log <= 0 or c_lin <= 0:
        raise ParameterError("c_log and c_lin must be positive")
    with mp.workdps(_LOG_DPS):
        log10_h = mpmath.log10(mpf(c_log)) - mpmath.log10(mpf(c_lin))
        return invert_bound(1, LogMagnitude.from_log10(log10_h))


def _smallest_two_classes(k, policy=None):
    """Certified (|smallest|, |second smallest|) interval pair."""
    if k <= roots_mod._FULL_SOLVE_MAX_K:
        sys_ = roots_mod.solve(k, policy)
        low, second = sys_.classes[-1], sys_.classes[-2]
        return (low["lo"], low["hi"]), (second["lo"], second["hi"])
    count = 3 if k % 2 == 0 else 4  # real + pair, or pair + pair
    sel = roots_mod.smallest_classes(k, count, policy)
    with mp.workdps(sel.digits):
        return sel.discs[0].abs_interval(), sel.discs[-1].abs_interval()


def even_ratio_cap(k, policy=None):
    """Largest n with (|second smallest root|/|smallest root|)^(n+1) < 490k^2.

    The even-k sharpening of the zero-index cap; exact integer, certified
    by evaluating the ratio's enclosure at both ends.
    """
    if k % 2:
        raise ParityError(f"even-order ratio cap needs even k, got {k}")
    if k < 4:
        raise RangeError(f"even-order ratio cap needs k >= 4, got {k}")
    (lo1, hi1), (lo2, hi2) = _smallest_two_classes(k, policy)
    with mp.workdps(max(60, 2 * k)):
        target = mpmath.log(490 * k**2)
        n_hi = int(mpmath.ceil(target / mpmath.log(lo2 / hi1))) - 2
        n_lo = int(mpmath.ceil(target / mpmath.log(hi2 / lo1))) - 2
    if n_lo != n_hi:
        raise FeasibilityError(
            f"ratio cap for k={k} not pinned by the enclosure ({n_lo} vs {n_hi})"
        )
    return n_hi


def odd_chain_cap(k):
    """Sharpened odd-k cap 1.7e17*k^19.6*(ln k)^3*(pi/e)^k as LogMagnitude."""
    if k % 2 == 0:
        raise ParityError(f"odd-order chain cap needs odd k, got {k}")
    if k < 5:
        raise RangeError(f"odd-order chain cap needs k >= 5, got {k}")
    with mp.workdps(_LOG_DPS):
        log10 = (
            mpmath.log10(mpf("1.7e17"))
            + mpf("19.6") * mpmath.log10(k)
            + 3 * mpmath.log10(mpmath.log(k))
            + k * mpmath.log10(mpmath.pi / mpmath.e)
        )
        return LogMagnitude.from_log10(log10)


def floor_cap_crossover(scan_limit=2001):
    """Largest odd k whose 2-adic floor 2^((k-1)/2) still fits under the chain cap.

    Both sides grow geometrically with different slopes, so past the
    crossover the floor wins forever; the scan stops at the first failure.
    """
    best = None
    for k in range(5, scan_limit, 2):
        if odd_zero_floor(k) <= odd_chain_cap(k):
            best = k
        elif best is not None:
            return best
    raise FeasibilityError(f"no crossover found below {scan_limit}")


def combined_two_adic_cap(n_cap=None):
    """Largest odd k whose 2-adic floor stays below the reduced n-cap.

    Defaults to the gap_solve instance that ends the odd-k chain.
    """
    if n_cap is None:
        n_cap = gap_solve(7.93e44, -10.48, 1.78e-8)
    best = None
    for k in range(5, 2001, 2):
        if odd_zero_floor(k) <= n_cap:
            best = k
        elif best is not None:
            return best
    raise FeasibilityError("no crossover found below 2001")


_F_BAND = (mpf("-10.48"), mpf("-10.02"))
_RATIO_BAND = (mpf("1.78e-8"), mpf("1.04e-7"))

# Coefficient of the ln(n+1) term in the large-k gap inequality, valid on
# the same audited band of k as the two constant bands above.
_LARGE_K_LOG_COEFF = 7.93e44


def large_k_gap_cap():
    """Index cap from the gap inequality on the audited large-k band.

    Pairs the logarithmic coefficient with the conservative (low) ends of
    the two constant bands, so the cap holds across the whole band.
    """
    return gap_solve(_LARGE_K_LOG_COEFF, float(_F_BAND[0]), float(_RATIO_BAND[0]))


def band_constants_audit(k_samples, policy=None):
    """Checks the printed constant bands behind the odd-k endgame.

    For each odd k in [501, 885]: ln|f(smallest root)/30| against
    [-10.48, -10.02] and ln(second-smallest/smallest modulus) against
    [1.78e-8, 1.04e-7].  Returns a report with certified values and
    inside/outside flags per band; out-of-band values are findings for
    the caller to judge, not errors.
    """
    rows = []
    for k in sorted(k_samples):
        if k % 2 == 0 or not (501 <= k <= 885):
            raise RangeError(f"band audit samples must be odd in [501, 885], got {k}")
        sel = roots_mod.smallest_classes(k, 4, policy)
        with mp.workdps(sel.digits):
            small, second = sel.discs[0], sel.discs[2]
            fv = roots_mod.f_value(k, small)
            f_lo = max(abs(fv.mid) - fv.rad, mpf(0))
            f_hi = abs(fv.mid) + fv.rad
            if f_lo <= 0:
                raise FeasibilityError(f"weight enclosure touches zero at k={k}")
            band_lo, band_hi = mpmath.log(f_lo / 30), mpmath.log(f_hi / 30)
            slo, shi = small.abs_interval()
            qlo, qhi = second.abs_interval()
            ratio_lo, ratio_hi = mpmath.log(qlo / shi), mpmath.log(qhi / slo)
            rows.append({
                "k": k,
                "digits": sel.digits,
                "f_log": {
                    "lo": float(band_lo), "hi": float(band_hi),
                    "inside": bool(_F_BAND[0] <= band_lo and band_hi <= _F_BAND[1]),
                },
                "ratio_log": {
                    "lo": float(ratio_lo), "hi": float(ratio_hi),
                    "inside": bool(_RATIO_BAND[0] <= ratio_lo and ratio_hi <= _RATIO_BAND[1]),
                },
            })
    return {
        "samples": rows,
        "f_band": (float(_F_BAND[0]), float(_F_BAND[1])),
        "ratio_band": (float(_RATIO_BAND[0]), float(_RATIO_BAND[1])),
        "all_inside": all(r["f_log"]["inside"] and r["ratio_log"]["inside"] for r in rows),
    }
