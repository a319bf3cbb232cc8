"""Closed-form evaluation for the negative-index companions Q and H.

Every formula here is an explicit finite expression in binomials and powers
of two, evaluated in exact rational arithmetic with an integrality assertion
at the end — the half-power tails must cancel, and any failure to do so is
surfaced as IntegralityError rather than rounded away.  The recurrence
tables in engine.py are the ground truth these forms are tested against.

Index conventions used throughout (all self-contained):
  * companion index n splits as n = m*k + r with r in [-1, k-2];
  * deep indices also carry block coordinates (b, j, r) with
    n = b*k*(k-1) - 1 + (j-1)*k + r, the layout the block forms use.
"""

import math
from fractions import Fraction

from . import _sweeps
from .errors import IntegralityError, ParameterError, ParityError, RangeError
from .magnitude import LogMagnitude

try:
    from . import _fastsweep as _accel
except ImportError:  # extension not built; pure-Python sweep takes over
    _accel = None


# ---------------------------------------------------------------------------
# combinators

def binom(y, z):
    """C(y, z) with C = 0 whenever z < 0, z > y, or y < 0 <= z."""
    if z < 0 or y < z:
        return 0
    return math.comb(y, z)


def psi(y, z):
    """Paired-binomial combinator C(y, z) + C(y+1, z+1).

    The zero conventions of binom make psi(y, -1) = 1 and psi(y, -2) = 0
    automatically; psi(y, y) = 2 for y >= 0.
    """
    return binom(y, z) + binom(y + 1, z + 1)


def _pow2(e):
    """Exact 2**e as a Fraction, e of either sign."""
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def _as_int(x, what):
    if x.denominator != 1:
        raise IntegralityError(f"{what} evaluated to non-integer {x}")
    return int(x)


def _check_k(k):
    if k < 2:
        raise ParameterError(f"order k must be >= 2, got {k}")


# ---------------------------------------------------------------------------
# shallow-index forms (single block of the index line)

def q_zero_predicate(k, m, r):
    """True exactly when Q_{mk+r} is forced to vanish: 0 <= m < r <= k-2.

    Strict m < r, not m <= r: the non-strict variant is contradicted by the
    recurrence at (m, r) = (1, 1) already for k = 5.
    """
    return 0 <= m < r <= k - 2


def q_diagonal(k, m):
    """Q_{mk-1} = -2^(m-1) for 1 <= m <= k-2."""
    _check_k(k)
    if not 1 <= m <= k - 2:
        raise RangeError(f"diagonal form needs 1 <= m <= k-2, got m={m}, k={k}")
    return -(1 << (m - 1))


def q_closed_small(k, m, r):
    """Q_{mk+r} for 1 <= m <= k-2, 0 <= r <= m, as a two-psi combination.

    (m, r) = (0, 0) is excluded: the expression gives 1 there while Q_0 = 2;
    serve Q_0 from the recurrence engine instead.
    """
    _check_k(k)
    if not (1 <= m <= k - 2 and 0 <= r <= m):
        raise RangeError(f"small form needs 1 <= m <= k-2, 0 <= r <= m, got m={m}, r={r}, k={k}")
    val = psi(m - 1, r - 1) * _pow2(m - r) + psi(m - 1, r) * _pow2(m - r - 2)
    if r & 1:
        val = -val
    return _as_int(val, f"q_closed_small(k={k}, m={m}, r={r})")


def general_min_m(k):
    """Smallest m the deep-index alternating form covers."""
    return 1 if k == 2 else k - 2


def q_closed_general(k, m, r):
    """Q_{mk+r} by the alternating psi sum for the deep-index regime.

    Domain: r in [-1, k-2] and m >= k-2 for k >= 3; r in {-1, 0} and
    m >= 1 for k = 2.  The sum runs i = 0..l with l = m for k = 2 and
    l = floor((m+1)/(k-1)) otherwise.
    """
    _check_k(k)
    if not (-1 <= r <= k - 2 and m >= general_min_m(k)):
        raise RangeError(f"general form needs r in [-1, k-2], m >= {general_min_m(k)}, got m={m}, r={r}, k={k}")
    l = m if k == 2 else (m + 1) // (k - 1)
    total = Fraction(0)
    for i in range(l + 1):
        y = m - i - 1
        z = i * k + r
        term = psi(y, z - 1) * _pow2(m - i * (k + 1) - r) \
            + psi(y, z) * _pow2(m - i * (k + 1) - r - 2)
        if (i * k + r) & 1:
            term = -term
        total += term
    return _as_int(total, f"q_closed_general(k={k}, m={m}, r={r})")


def q_block_diag(k, m, r):
    """Q_{mk+r} on the first block diagonal band, m in [1, k-2].

    r = -1 gives -2^(m-1); r = 0 gives (m+5)*2^(m-2); 1 <= r < m uses the
    descending two-power sum with lower limit j = r-1 (the j = r variant
    drops the Q_0 term and is contradicted by the recurrence at k=5, m=3,
    r=1).
    """
    _check_k(k)
    if not (1 <= m <= k - 2 and -1 <= r <= m - 1):
        raise RangeError(f"block diagonal needs 1 <= m <= k-2, -1 <= r < m, got m={m}, r={r}, k={k}")
    if r == -1:
        return -(1 << (m - 1))
    if r == 0:
        return _as_int((m + 5) * _pow2(m - 2), f"q_block_diag(k={k}, m={m}, r=0)")
    from .engine import q_at

    total = 0
    for j in range(r - 1, m):
        total += (1 << (m - 1 - j)) * q_at(k, j * k + r - 1)
    return -total


def h_closed(k, m, r):
    """H_{mk+r} on the band m in [1, k-1], selector r as in q_block_diag.

    r = -1 gives 2^(m-1); r = 0 gives -(m+1)*2^(m-2); 1 <= r < m uses the
    descending sum with lower limit j = r (here the lower limit is correct
    as printed: H_0 = 0 makes a j = r-1 term vanish anyway for r = 1).
    """
    _check_k(k)
    if not (1 <= m <= k - 1 and -1 <= r <= m - 1):
        raise RangeError(f"h band needs 1 <= m <= k-1, -1 <= r < m, got m={m}, r={r}, k={k}")
    if r == -1:
        return 1 << (m - 1)
    if r == 0:
        return _as_int(-(m + 1) * _pow2(m - 2), f"h_closed(k={k}, m={m}, r=0)")
    from .engine import h_at

    total = 0
    for j in range(r, m):
        total += (1 << (m - 1 - j)) * h_at(k, j * k + r - 1)
    return -total


# ---------------------------------------------------------------------------
# block-coordinate forms (arbitrary depth)

def block_index(k, b, j, r):
    """Absolute companion index addressed by block coordinates (b, j, r)."""
    return b * k * (k - 1) - 1 + (j - 1) * k + r


def _check_block(k, b, j, r):
    if k <= 2:
        raise ParameterError(f"block forms need k > 2, got {k}")
    if b < 1:
        raise RangeError(f"block number must be >= 1, got {b}")
    if not (0 <= j <= k - 2 and 0 <= r <= k - 2):
        raise RangeError(f"block coordinates need j, r in [0, k-2], got j={j}, r={r}, k={k}")


def block_terms(k, b, j, r):
    """The b+1 signed Fraction terms of the block closed form, index order."""
    _check_block(k, b, j, r)
    terms = []
    for i in range(b + 1):
        y = b * k + j - b - i - 2
        z = i * k + r
        e = (b - i) * k + j - r - b - i
        t = psi(y, z - 2) * _pow2(e) + psi(y, z - 1) * _pow2(e - 2)
        if (i * k + r + 1) & 1:
            t = -t
        terms.append(t)
    return terms


def block_value(k, b, j, r):
    """Q at block_index(k, b, j, r) via the alternating block form."""
    total = sum(block_terms(k, b, j, r), Fraction(0))
    return _as_int(total, f"block_value(k={k}, b={b}, j={j}, r={r})")


def first_block_terms(k, j, r):
    """The two-term b = 1 expansion, written out independently.

    Must agree term-by-term with block_terms(k, 1, j, r); kept as a separate
    code path so the agreement is a real check.
    """
    _check_block(k, 1, j, r)
    t0 = psi(k + j - 3, r - 2) * _pow2(k + j - r - 1) \
        + psi(k + j - 3, r - 1) * _pow2(k + j - r - 3)
    if (r + 1) & 1:
        t0 = -t0
    t1 = psi(k + j - 4, k + r - 2) * _pow2(j - r - 2) \
        + psi(k + j - 4, k + r - 1) * _pow2(j - r - 4)
    if (k + r + 1) & 1:
        t1 = -t1
    return [t0, t1]


# ---------------------------------------------------------------------------
# batch evaluation (column sweeps; C-accelerated when the extension built)

def sweep_backend_name():
    """Which sweep implementation is active: 'c' or 'python'."""
    return "c" if _accel is not None else "python"


def q_closed_table(k, m_max):
    """All q_closed_general values with m <= m_max as {(m, r): value}.

    Row-major order (m ascending, r from -1 to k-2), evaluated by the
    incremental shared-column sweep — algebraically the same alternating
    form as q_closed_general, but O(1) big-int work per (m, r) instead of
    a fresh binomial build per call.
    """
    _check_k(k)
    m_lo = general_min_m(k)
    if m_max < m_lo:
        raise RangeError(f"m_max must be >= {m_lo}, got {m_max}")
    backend = _accel if _accel is not None else _sweeps
    try:
        flat = backend.general_values(k, m_max)
    except ValueError as exc:  # C backend reports halving failures this way
        raise IntegralityError(str(exc)) from None
    out = {}
    pos = 0
    for m in range(m_lo, m_max + 1):
        for r in range(-1, k - 1):
            out[(m, r)] = flat[pos]
            pos += 1
    assert pos == len(flat)
    return out


def block_table(k, b_max):
    """All block_value results with b <= b_max as {(b, j, r): value}."""
    if k <= 2:
        raise ParameterError(f"block forms need k > 2, got {k}")
    if b_max < 1:
        raise RangeError(f"b_max must be >= 1, got {b_max}")
    backend = _accel if _accel is not None else _sweeps
    try:
        flat = backend.block_values(k, b_max)
    except ValueError as exc:  # C backend reports halving failures this way
        raise IntegralityError(str(exc)) from None
    out = {}
    pos = 0
    for b in range(1, b_max + 1):
        for j in range(k - 1):
            for r in range(k - 1):
                out[(b, j, r)] = flat[pos]
                pos += 1
    assert pos == len(flat)
    return out


# ---------------------------------------------------------------------------
# 2-adic valuations

def nu2_int(v):
    """2-adic valuation of a nonzero integer."""
    if v == 0:
        raise ParameterError("nu2 of 0 is undefined (use the +inf flag paths)")
    return ((v & -v)).bit_length() - 1


def nu2_binom(y, z):
    """Carry count of the base-2 addition z + (y-z), which equals the
    2-adic valuation of C(y, z); computed via the digit-sum identity
    s(z) + s(y-z) - s(y)."""
    if not 0 <= z <= y:
        raise RangeError(f"need 0 <= z <= y, got y={y}, z={z}")
    return z.bit_count() + (y - z).bit_count() - y.bit_count()


def nu2_psi(y, z):
    """2-adic valuation of psi(y, z); math.inf when psi vanishes."""
    v = psi(y, z)
    if v == 0:
        return math.inf
    return nu2_int(v)


def x_form(y, z):
    """The weighted pair 4*psi(y, z-1) + psi(y, z) appearing as the sweep
    leaf value; its 2-adic size is what kummer_audit measures."""
    return 4 * psi(y, z - 1) + psi(y, z)


def kummer_audit(y_max):
    """Empirical scan of nu2(x_form(y, z)) against the cap 2*log2(y) + 2.

    Scans 1 <= y <= y_max, 0 <= z <= y+1 (outside that strip the form is
    zero).  The cap is a conjectured working bound, not a theorem the
    package relies on: the valuation of a sum can exceed the min of the
    parts, so violations are reported as findings, never raised.
    """
    if y_max < 2:
        raise ParameterError(f"y_max must be >= 2, got {y_max}")
    checked = 0
    max_nu2 = -1
    argmax = None
    violations = []
    for y in range(1, y_max + 1):
        cap = 2 * math.log2(y) + 2
        for z in range(0, y + 2):
            v = nu2_int(x_form(y, z))
            checked += 1
            if v > max_nu2:
                max_nu2, argmax = v, (y, z)
            if v > cap:
                violations.append({"y": y, "z": z, "nu2": v, "cap": cap})
    return {
        "y_max": y_max,
        "checked": checked,
        "max_nu2": max_nu2,
        "argmax": list(argmax),
        "cap_at_argmax": 2 * math.log2(argmax[0]) + 2,
        "violations": violations,
    }


def odd_zero_floor(k):
    """2^((k-1)/2), the index floor below which odd-k zeros must live."""
    if k % 2 == 0:
        raise ParityError(f"odd-k floor called with even k={k}")
    if k < 3:
        raise RangeError(f"need odd k >= 3, got {k}")
    e = (k - 1) // 2
    if e < 60:
        return LogMagnitude.from_int(1 << e)
    return LogMagnitude.from_log10(e * math.log10(2.0))
