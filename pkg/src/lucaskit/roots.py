"""Characteristic roots of the order-k recurrence, with certified enclosures.

The characteristic polynomial x^k - x^(k-1) - ... - x - 1 has one dominant
real root in (2(1 - 2^-k), 2); all others lie inside the unit circle.  This
module locates all of them (double-precision eigenvalue seeds, Newton
polish on the trinomial (x-1)p(x) = x^(k+1) - 2x^k + 1, then a Krawczyk
containment certificate per root), certifies the modulus ordering by
disjoint enclosure intervals, and evaluates the weight function
f(x) = (x-1)/(2 + (k+1)(x-2)) with error propagation.  Precision doubles
until every required separation certifies or the ladder is exhausted.
"""

from collections import namedtuple

import mpmath
import numpy as np
from mpmath import mp, mpf

from . import engine
from .errors import (
    CertificationError,
    FeasibilityError,
    ParameterError,
    PrecisionExhaustedError,
    RangeError,
)
from .validated import Disc, intervals_disjoint

PrecisionPolicy = namedtuple(
    "PrecisionPolicy", ["start_digits", "max_doublings", "target_error"]
)

_FULL_SOLVE_MAX_K = 200


def default_policy(k=2, start_digits=None):
    return PrecisionPolicy(
        start_digits if start_digits is not None else max(64, k),
        6,
        mpf("0.5"),
    )


def char_poly(k):
    """Coefficients of x^k - x^(k-1) - ... - x - 1, leading first."""
    if k < 2:
        raise ParameterError(f"order k must be >= 2, got {k}")
    return [1] + [-1] * k


# -- trinomial (x - 1) * charpoly: x^(k+1) - 2 x^k + 1 ---------------------
# its roots are the k characteristic roots plus a simple extraneous root
# at x = 1; evaluation is O(log k) multiplications at any precision

def _t(k, z):
    return z**k * (z - 2) + 1


def _t_prime(k, z):
    return z ** (k - 1) * ((k + 1) * z - 2 * k)


def _t_disc(k, d):
    return d.pow_int(k) * (d - 2) + 1


def _t_prime_disc(k, d):
    return d.pow_int(k - 1) * ((k + 1) * d - 2 * k)


def _polish(k, z):
    """Newton on the trinomial from a seed; full current precision."""
    tol = mpf(2) ** (8 - mp.prec)
    for _ in range(200):
        step = _t(k, z) / _t_prime(k, z)
        z = z - step
        if abs(step) <= tol * (abs(z) + 1):
            return z
    raise CertificationError(f"Newton stalled near {complex(z)} (k={k})")


def _certify(k, z0):
    """Krawczyk containment around a polished simple trinomial root.

    Returns a Disc certified to contain exactly one root.  Containment of
    the operator image K(D) strictly inside D is the certificate; the
    returned enclosure is K(D) itself (tighter than D).
    """
    d0 = _t_prime(k, z0)
    if d0 == 0:
        raise CertificationError(f"derivative vanished at {complex(z0)}")
    c = 1 / d0
    f0 = _t_disc(k, Disc(z0))  # rounding enclosure of T(z0)
    r = max(abs(_t(k, z0) / d0) * 16, mpf(2) ** (16 - mp.prec))
    for _ in range(60):
        big = Disc(z0, r)
        k_img = (Disc(z0) - Disc(c) * f0) \
            + (1 - Disc(c) * _t_prime_disc(k, big)) * Disc(0, r)
        if abs(k_img.mid - z0) + k_img.rad < r * (1 - mpf(2) ** -16):
            return k_img
        r *= 4
        if r > mpf("0.25"):
            break
    raise CertificationError(f"no Krawczyk containment near {complex(z0)} (k={k})")


def _classify(k, seeds):
    """Polish all seeds; split into real roots and +Im representatives."""
    im_cut = mpf(2) ** (-mp.prec // 3)
    reals, upper = [], []
    for s in seeds:
        z = _polish(k, mpmath.mpc(complex(s)))
        if abs(mpmath.im(z)) <= im_cut * (abs(z) + 1):
            reals.append(_polish(k, mpmath.re(z)))
        elif mpmath.im(z) > 0:
            upper.append(z)
    # dedupe the real list (conjugate seed pairs collapse onto one root)
    reals.sort()
    dedup = []
    for z in reals:
        if not dedup or abs(z - dedup[-1]) > mpf(2) ** (-mp.prec // 2):
            dedup.append(z)
    return dedup, upper


class RootSystem:
    """All k roots as certified discs, modulus-sorted, gamma first."""

    def __init__(self, k, digits, gamma, others, classes):
        self.k = k
        self.digits = digits
        self.gamma = gamma
        self.others = others
        self.classes = classes

    @property
    def all_roots(self):
        return [self.gamma] + self.others

    def modulus_intervals(self):
        return [d.abs_interval() for d in self.all_roots]

    def smallest(self):
        """gamma_k: the minimal-modulus root (Im <= 0 member of its pair)."""
        return self.all_roots[-1]

    def real_count(self):
        return sum(1 for d in self.all_roots if mpmath.im(d.mid) == 0)


def _solve_at(k, digits):
    seeds = np.roots(np.array(char_poly(k), dtype=float))
    with mp.workdps(digits):
        reals, upper = _classify(k, seeds)
        if len(reals) + 2 * len(upper) != k:
            raise CertificationError(
                f"root classification found {len(reals)} real + {2 * len(upper)} complex != {k}"
            )
        if len(reals) != (1 if k % 2 else 2):
            raise CertificationError(f"unexpected real-root count {len(reals)} for k={k}")
        discs = [_certify(k, z) for z in reals]
        for z in upper:
            up = _certify(k, z)
            discs.append(up)
            discs.append(up.conjugate())
        # sort by decreasing modulus; within a conjugate pair +Im first
        discs.sort(key=lambda d: (-abs(d.mid), -mpmath.im(d.mid)))
        gamma = discs[0]
        glo, ghi = gamma.real_interval()
        if not (mpmath.im(gamma.mid) == 0 and glo > 2 * (1 - mpf(2) ** -k) and ghi < 2):
            raise CertificationError(f"dominant root not certified in its bracket (k={k})")
        for d in discs[1:]:
            if d.abs_interval()[1] >= 1:
                raise CertificationError(f"inner root modulus not certified < 1 (k={k})")
        # modulus classes: conjugate mirrors share an interval by construction
        classes = []
        for idx, d in enumerate(discs):
            lo, hi = d.abs_interval()
            if classes and not (classes[-1]["members"][-1] == idx - 1
                                and d.mid == mpmath.conj(discs[idx - 1].mid)
                                and mpmath.im(d.mid) != 0):
                classes.append({"lo": lo, "hi": hi, "members": [idx]})
            elif not classes:
                classes.append({"lo": lo, "hi": hi, "members": [idx]})
            else:
                classes[-1]["members"].append(idx)
        for a, b in zip(classes, classes[1:]):
            if not (b["hi"] < a["lo"]):
                raise PrecisionExhaustedError(
                    f"adjacent modulus classes overlap at {digits} digits (k={k})"
                )
        # global sanity: trace = 1, modulus product = 1, within enclosures
        s = Disc(mpf(0))
        for d in discs:
            s = s + d
        if not s.contains_point(1):
            raise CertificationError(f"root sum enclosure misses 1 (k={k})")
        plo = phi = mpf(1)
        for d in discs:
            lo, hi = d.abs_interval()
            plo, phi = plo * lo, phi * hi
        if not (plo <= 1 <= phi):
            raise CertificationError(f"modulus product enclosure misses 1 (k={k})")
        return RootSystem(k, digits, gamma, discs[1:], classes)


_system_cache = {}


def solve(k, policy=None):
    """Certified RootSystem for order k, escalating precision as needed."""
    if k < 2:
        raise ParameterError(f"order k must be >= 2, got {k}")
    if k > _FULL_SOLVE_MAX_K:
        raise FeasibilityError(
            f"full certified solve capped at k = {_FULL_SOLVE_MAX_K} "
            f"(use smallest_classes for the partial spectrum)"
        )
    policy = policy or default_policy(k)
    digits = max(policy.start_digits, k, 64)
    key = (k, digits, policy.max_doublings)
    if key in _system_cache:
        return _system_cache[key]
    last = None
    for _ in range(policy.max_doublings + 1):
        try:
            sys_ = _solve_at(k, digits)
            _system_cache[key] = sys_
            return sys_
        except PrecisionExhaustedError as exc:
            last = exc
            digits *= 2
    raise CertificationError(f"modulus ordering not certified for k={k}: {last}")


def clear_cache():
    _system_cache.clear()


RootSelection = namedtuple("RootSelection", ["k", "digits", "discs", "boundary_gap"])

_SELECTION_DIGITS = 40


def smallest_classes(k, count, policy=None):
    """Certified enclosures of the `count` smallest-modulus roots only.

    For k beyond the full-solve cap.  Every root is polished and certified
    once at modest precision; the resulting discs are pairwise disjoint and
    exclude the extraneous trinomial root at 1, so together they are proven
    to cover the whole spectrum and the modulus selection is exact (the
    certified interval gap at the selection boundary is reported as
    boundary_gap).  Only the selected roots are then re-certified at full
    precision.  Returns discs in increasing modulus order, each conjugate
    pair as (-Im, +Im).
    """
    if k < 4:
        raise ParameterError(f"partial spectrum needs k >= 4, got {k}")
    if count < 1 or count >= k:
        raise RangeError(f"count must be in [1, k-1], got {count}")
    policy = policy or default_policy(k, start_digits=64)
    seeds = np.roots(np.array(char_poly(k), dtype=float))

    sel_digits = _SELECTION_DIGITS
    take = gap = None
    for _ in range(policy.max_doublings + 1):
        with mp.workdps(sel_digits):
            coarse = []
            for s in seeds:
                z = _polish(k, mpmath.mpc(complex(s)))
                if abs(mpmath.im(z)) <= mpf(2) ** (-mp.prec // 3) * (abs(z) + 1):
                    z = _polish(k, mpmath.re(z))
                coarse.append(_certify(k, z))
            max_rad = max(d.rad for d in coarse)
            mids = np.array([complex(mpmath.re(d.mid), mpmath.im(d.mid)) for d in coarse])
            dist = np.abs(mids[:, None] - mids[None, :])
            np.fill_diagonal(dist, np.inf)
            if dist.min() <= 2 * float(max_rad) + 1e-12 or np.abs(mids - 1).min() <= float(max_rad) + 1e-12:
                sel_digits *= 2  # discs not provably disjoint / clear of 1
                continue
            coarse.sort(key=lambda d: (abs(d.mid), mpmath.im(d.mid)))
            boundary = coarse[count].abs_interval()[0] - coarse[count - 1].abs_interval()[1]
            if boundary <= 0:
                sel_digits *= 2
                continue
            take, gap = coarse[:count], boundary
            break
    if take is None:
        raise CertificationError(f"smallest-root selection never certified (k={k})")

    digits = max(policy.start_digits, 64)
    for _ in range(policy.max_doublings + 1):
        with mp.workdps(digits):
            discs = []
            for d in take:
                z = _polish(k, d.mid)
                discs.append(_certify(k, z))
            discs.sort(key=lambda d: (abs(d.mid), mpmath.im(d.mid)))
            # adjacent classes must separate unless conjugate partners
            ok = True
            for a, b in zip(discs, discs[1:]):
                conj_pair = abs(a.mid - mpmath.conj(b.mid)) <= (a.rad + b.rad) * 4
                if not conj_pair and not intervals_disjoint(a.abs_interval(), b.abs_interval()):
                    ok = False
                    break
            if ok:
                return RootSelection(k, digits, discs, float(gap))
        digits *= 2
    raise CertificationError(f"partial spectrum separation failed for k={k}")


# -- weight function -------------------------------------------------------

def _carried_bits(value):
    """Mantissa width of an mpf/mpc, so results keep the input's precision."""
    bits = mp.prec
    for part in (mpmath.re(value), mpmath.im(value)):
        try:
            bits = max(bits, part._mpf_[3])
        except (AttributeError, IndexError, TypeError):
            pass
    return bits


def f_value(k, root):
    """f(x) = (x-1)/(2 + (k+1)(x-2)) with error propagation.

    Accepts a Disc or a bare number; the denominator enclosure must exclude
    zero (it always does at actual roots — hitting the guard means the
    input was not a root enclosure).  Works at the input's own precision
    even when the ambient context is coarser.
    """
    d = root if isinstance(root, Disc) else Disc(root)
    with mp.workprec(_carried_bits(d.mid) + 16):
        den = 2 + (d - 2) * (k + 1)
        lo, _ = den.abs_interval()
        if lo <= 0:
            raise ParameterError("weight denominator enclosure touches zero")
        return (d - 1) / den


# -- Binet-style evaluation -------------------------------------------------

def binet_eval(k, n, policy=None, full_sum=False):
    """Dominant-term approximation of L_n with its exact residual.

    Returns {"exact", "approx", "residual", "digits"}; the residual against
    the recurrence value must come out below 3/2, and with full_sum=True
    the sum over all k roots must round to the exact integer with certified
    error below 0.5 (keys "sum_mid", "sum_err", "rounded").
    """
    if n < 2 - k:
        raise RangeError(f"expansion valid for n >= 2-k = {2 - k}, got {n}")
    policy = policy or default_policy(k, start_digits=max(64, k, 100))
    exact = engine.lucas_at(k, n)
    sys_ = solve(k, policy)
    out = {"exact": exact, "digits": sys_.digits}
    with mp.workdps(sys_.digits):
        g = sys_.gamma
        approx = f_value(k, g) * (2 * g - 1) * g.pow_int(n - 1)
        out["approx"] = mpmath.re(approx.mid)
        out["residual"] = abs(mpf(exact) - out["approx"])
        if out["residual"] >= mpf(3) / 2:
            raise CertificationError(
                f"dominant-term residual {out['residual']} >= 3/2 at (k={k}, n={n})"
            )
        if full_sum:
            digits = sys_.digits
            for _ in range(policy.max_doublings + 1):
                with mp.workdps(digits):
                    total = Disc(mpf(0))
                    for d in solve(k, default_policy(k, start_digits=digits)).all_roots:
                        total = total + f_value(k, d) * (2 * d - 1) * d.pow_int(n - 1)
                    err = abs(mpmath.im(total.mid)) + total.rad
                    mid = mpmath.re(total.mid)
                    if err < mpf(1) / 2:
                        rounded = int(mpmath.nint(mid))
                        if rounded != exact:
                            raise CertificationError(
                                f"full sum rounds to {rounded} != L_n = {exact} at (k={k}, n={n})"
                            )
                        out["sum_mid"] = mid
                        out["sum_err"] = err
                        out["rounded"] = rounded
                        return out
                digits *= 2
            raise PrecisionExhaustedError(
                f"full-sum error never certified < 1/2 at (k={k}, n={n})"
            )
    return out


# -- property audit ----------------------------------------------------------

def _excess_check(num_iv, den_iv, t):
    """Tri-state for the claim num/den > 1 + t, compared as (ratio - 1) > t
    so a t far below working precision is never absorbed into the 1."""
    lo = num_iv[0] / den_iv[1] - 1
    hi = num_iv[1] / den_iv[0] - 1
    if lo > t:
        return "pass", lo - t
    if hi <= t:
        return "fail", lo - t
    return "ambiguous", lo - t


def root_property_audit(k, policy=None):
    """Enclosure-certified audit of the root-geometry properties.

    Items (named by what they check; class ratios compare adjacent distinct
    modulus classes, which bounds every distinct pair):
      * distinct_ratio_tiny_floor   — class ratios > 1 + 1.454^(-k^3); k <= 12
      * dominant_f_band             — f(gamma) inside [1/2, 3/4]
      * inner_f_cap                 — |f(inner)| < min(1/2, 2/(k-1))
      * smallest_log_bounds         — |gamma_k| < 1 - log(gamma)/(2k) and
                                      |f(gamma_k)| > log(gamma)/(2k(3k+1))
      * smallest_cubic_bounds       — same shape with 1/(2^8 k^3)
      * even_pair_gap               — even k: last class ratio > 1 + k^(-k^2); k <= 20
      * distinct_ratio_coarse_floor — class ratios > 1 + 1/(10 k^9.6 (pi/e)^k); k >= 4
    Each item reports pass/fail plus the certified margin; ambiguity raises
    the ladder and ultimately FeasibilityError.
    """
    policy = policy or default_policy(k)
    digits = max(policy.start_digits, k, 64)
    for _ in range(policy.max_doublings + 1):
        sys_ = solve(k, default_policy(k, start_digits=digits))
        with mp.workdps(sys_.digits):
            try:
                return _audit_at(k, sys_)
            except PrecisionExhaustedError:
                digits = sys_.digits * 2
    raise FeasibilityError(f"audit thresholds not separable within policy (k={k})")


def _audit_at(k, sys_):
    items = {}
    classes = sys_.classes
    ratios = [
        (classes[i]["lo"], classes[i]["hi"], classes[i + 1]["lo"], classes[i + 1]["hi"])
        for i in range(len(classes) - 1)
    ]

    def all_class_ratios_exceed(t_excess):
        worst = None
        for alo, ahi, blo, bhi in ratios:
            state, margin = _excess_check((alo, ahi), (blo, bhi), t_excess)
            if state == "ambiguous":
                raise PrecisionExhaustedError("class ratio straddles threshold")
            if worst is None or margin < worst[1]:
                worst = (state, margin)
        return worst or ("pass", mpf("inf"))

    # tiny floor (feasible small k: excess ~ 1.454^(-k^3))
    if k <= 12:
        state, margin = all_class_ratios_exceed(mpf("1.454") ** (-(k**3)))
        items["distinct_ratio_tiny_floor"] = {
            "applicable": True, "pass": state == "pass", "margin": float(margin),
        }
    else:
        items["distinct_ratio_tiny_floor"] = {"applicable": False}

    # dominant f inside [1/2, 3/4]
    fg = f_value(k, sys_.gamma)
    flo, fhi = fg.real_interval()
    if abs(mpmath.im(fg.mid)) + fg.rad > mpf("0.25"):
        raise PrecisionExhaustedError("dominant f enclosure too wide")
    band_ok = flo >= mpf(1) / 2 and fhi <= mpf(3) / 4
    band_bad = fhi < mpf(1) / 2 or flo > mpf(3) / 4
    if not band_ok and not band_bad:
        raise PrecisionExhaustedError("dominant f band ambiguous")
    items["dominant_f_band"] = {
        "applicable": True, "pass": bool(band_ok),
        "f_lo": float(flo), "f_hi": float(fhi),
    }

    # inner |f| strictly under min(1/2, 2/(k-1))
    cap = min(mpf(1) / 2, mpf(2) / (k - 1))
    worst_hi, certified_over = mpf(0), False
    for d in sys_.others:
        fi = f_value(k, d)
        lo = max(abs(fi.mid) - fi.rad, mpf(0))
        hi = abs(fi.mid) + fi.rad
        worst_hi = max(worst_hi, hi)
        if lo >= cap:
            certified_over = True
    if worst_hi >= cap and not certified_over:
        raise PrecisionExhaustedError("inner f cap ambiguous")
    items["inner_f_cap"] = {"applicable": True, "pass": not certified_over,
                            "worst_hi": float(worst_hi), "cap": float(cap)}

    # smallest-root bounds, log form and cubic form
    small = sys_.smallest()
    slo, shi = small.abs_interval()
    glo, ghi = sys_.gamma.real_interval()
    log_lo, log_hi = mpmath.log(glo), mpmath.log(ghi)
    fs = f_value(k, small)
    fs_lo = max(abs(fs.mid) - fs.rad, mpf(0))
    fs_hi = abs(fs.mid) + fs.rad
    cubic = mpf(1) / (2**8 * k**3)
    for name, cap_lo, cap_hi, floor_lo, floor_hi in (
        ("smallest_log_bounds",
         1 - log_hi / (2 * k), 1 - log_lo / (2 * k),
         log_lo / (2 * k * (3 * k + 1)), log_hi / (2 * k * (3 * k + 1))),
        ("smallest_cubic_bounds",
         1 - cubic, 1 - cubic,
         cubic / (3 * k + 1), cubic / (3 * k + 1)),
    ):
        mod_state = "pass" if shi < cap_lo else ("fail" if slo >= cap_hi else "ambiguous")
        f_state = "pass" if fs_lo > floor_hi else ("fail" if fs_hi <= floor_lo else "ambiguous")
        if "ambiguous" in (mod_state, f_state):
            raise PrecisionExhaustedError(f"{name} enclosure straddles its threshold")
        items[name] = {
            "applicable": True, "pass": mod_state == f_state == "pass",
            "modulus_hi": float(shi), "modulus_cap": float(cap_lo),
            "f_lo": float(fs_lo), "f_floor": float(floor_hi),
        }

    # even-k gap between the two smallest classes
    if k % 2 == 0 and k <= 20:
        a, b = classes[-2], classes[-1]
        state, margin = _excess_check(
            (a["lo"], a["hi"]), (b["lo"], b["hi"]), mpf(k) ** (-(k**2))
        )
        if state == "ambiguous":
            raise PrecisionExhaustedError("even pair gap straddles threshold")
        items["even_pair_gap"] = {
            "applicable": True, "pass": state == "pass", "margin": float(margin),
        }
    else:
        items["even_pair_gap"] = {"applicable": False}

    # coarse floor for k >= 4
    if k >= 4:
        t = 1 / (10 * mpf(k) ** mpf("9.6") * (mpmath.pi / mpmath.e) ** k)
        state, margin = all_class_ratios_exceed(t)
        items["distinct_ratio_coarse_floor"] = {
            "applicable": True, "pass": state == "pass", "margin": float(margin),
        }
    else:
        items["distinct_ratio_coarse_floor"] = {"applicable": False}

    return {
        "k": k,
        "digits": sys_.digits,
        "items": items,
        "all_pass": all(v["pass"] for v in items.values() if v.get("applicable")),
        "min_inner_modulus": float(sys_.classes[-1]["lo"]),
    }
