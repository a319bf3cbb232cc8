"""Incremental column sweeps for the batch closed-form evaluators.

Hot-loop counterpart of closed_forms.q_closed_general / block_value: instead
of rebuilding binomials per index, each psi factor lives in a column that is
advanced multiplicatively as the row index grows (psi(y, z) from
psi(y-1, z) costs one big multiply and one exact divide), and each row's
alternating sum is folded with a balanced shift-add tree.  A C twin of this
module (_fastsweep) implements the same two entry points; either backend
must produce bit-identical values.

Both sweeps work in scaled integers: every term is the integer
X = 4*psi(y, z) + psi(y, z+1) times a power of two, so a row folds to one
integer N and one final shift.  A nonzero low bit where the shift demands
divisibility means the algebra above it is wrong; that fires
IntegralityError rather than silently truncating.
"""

import math

from gmpy2 import divexact, mpz

from .errors import IntegralityError

_ZERO = mpz(0)


def tree_sum(terms, step):
    """Sum of terms[i] << ((len(terms)-1-i)*step), folded pairwise.

    Balanced folding keeps every addition between operands of similar bit
    length, which is what makes the row cost quasi-linear overall.
    """
    size = 1
    while size < len(terms):
        size <<= 1
    if size != len(terms):
        terms = [_ZERO] * (size - len(terms)) + list(terms)
    s = step
    while len(terms) > 1:
        terms = [(terms[j] << s) + terms[j + 1] for j in range(0, len(terms), 2)]
        s <<= 1
    return terms[0]


def _seed(y, z):
    """Fresh column cell psi(y, z) built directly from binomials."""
    return mpz(math.comb(y, z) + math.comb(y + 1, z + 1))


def general_values(k, m_max):
    """Flat list of Q_{mk+r} closed-form values, m in [m_lo, m_max] major,
    r in [-1, k-2] minor, m_lo = 1 for k = 2 and k-2 otherwise."""
    m_lo = 1 if k == 2 else k - 2
    kp1 = k + 1
    odd_k = k & 1
    cols = []   # cols[i][c] = psi(y, i*k - 2 + c) at current y = m - i - 1
    out = []
    for m in range(m_lo, m_max + 1):
        # activate column group i when its row index y first reaches the
        # group's lowest z; later cells seed on their own diagonal below
        i_new = len(cols)
        zb_new = i_new * k - 2
        y0 = m - i_new - 1
        if y0 >= zb_new:
            cols.append(
                [_seed(y0 - 1, zb_new + c) if 0 <= zb_new + c < y0 else None
                 for c in range(kp1)]
            )
        for i, col in enumerate(cols):
            y = m - i - 1
            zb = i * k - 2
            for c in range(kp1):
                z = zb + c
                if z < 0:
                    continue
                d = y - z
                if d > 0:
                    col[c] = divexact(col[c] * (y * (y + z + 2)), d * (y + z + 1))
                elif d == 0:
                    col[c] = mpz(2)  # psi(z, z)
        for r in range(-1, k - 1):
            terms = []
            for i, col in enumerate(cols):
                y = m - i - 1
                z1 = i * k + r - 1
                c1 = r + 1
                a = 1 if z1 == -1 else (col[c1] if 0 <= z1 <= y else None)
                z2 = z1 + 1
                b = 1 if z2 == -1 else (col[c1 + 1] if 0 <= z2 <= y else None)
                if a is None and b is None:
                    break  # zeros from here on: z outruns y monotonically
                x = b if a is None else ((a << 2) if b is None else (a << 2) + b)
                if odd_k and ((i + r) & 1):
                    x = -x
                terms.append(x)
            l_act = len(terms) - 1
            n = tree_sum(terms, kp1)
            sh = 2 - (m - l_act * kp1 - r)
            if sh <= 0:
                val = n << (-sh)
            else:
                if n & ((1 << sh) - 1):
                    raise IntegralityError(
                        f"general sweep k={k} m={m} r={r}: dyadic tail failed to cancel"
                    )
                val = n >> sh
            if (not odd_k) and (r & 1):
                val = -val
            out.append(val)
    return out


def block_values(k, b_max):
    """Flat list of block closed-form values, b in [1, b_max] major, then
    j in [0, k-2], then r in [0, k-2]; k > 2."""
    km1 = k - 1
    kp1 = k + 1
    odd_k = k & 1
    # cols[j][i][c] = psi(y, i*k - 2 + c) at current y = b*(k-1) + j - i - 2;
    # y strides by k-1 per block, so cells can cross their diagonal between
    # strides and are seeded directly when that happens
    cols = [[] for _ in range(km1)]
    out = []
    for b in range(1, b_max + 1):
        for j in range(km1):
            jcols = cols[j]
            while len(jcols) <= b:
                jcols.append([None] * k)
            for i, col in enumerate(jcols):
                y = b * km1 + j - i - 2
                y_prev = y - km1
                zb = i * k - 2
                for c in range(k):
                    z = zb + c
                    if z < 0 or z > y:
                        continue
                    if col[c] is None or z > y_prev:
                        col[c] = _seed(y, z)
                    else:
                        num = y + z + 2
                        den = y_prev + z + 2
                        for t in range(y_prev + 1, y + 1):
                            num *= t
                            den *= t - z
                        col[c] = divexact(col[c] * num, den)
            for r in range(km1):
                terms = []
                for i, col in enumerate(jcols):
                    y = b * km1 + j - i - 2
                    z1 = i * k + r - 2  # z1 >= -2 always; z2 = z1 + 1
                    a = (1 if z1 == -1 else None) if z1 < 0 \
                        else (col[r] if z1 <= y else None)
                    z2 = z1 + 1
                    b2 = (1 if z2 == -1 else None) if z2 < 0 \
                        else (col[r + 1] if z2 <= y else None)
                    if a is None and b2 is None:
                        break  # z has outrun y; stays that way for larger i
                    x = b2 if a is None else ((a << 2) if b2 is None else (a << 2) + b2)
                    if odd_k and ((i + r + 1) & 1):
                        x = -x
                    terms.append(x)
                l_act = len(terms) - 1
                n = tree_sum(terms, kp1)
                e_last = b * k + j - r - b - l_act * kp1
                sh = 2 - e_last
                if sh <= 0:
                    val = n << (-sh)
                else:
                    if n & ((1 << sh) - 1):
                        raise IntegralityError(
                            f"block sweep k={k} b={b} j={j} r={r}: dyadic tail failed to cancel"
                        )
                    val = n >> sh
                if (not odd_k) and ((r + 1) & 1):
                    val = -val
                out.append(val)
    return out
