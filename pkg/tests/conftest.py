"""Shared test oracles: deliberately naive reference implementations.

Everything here recomputes results straight from definitions (dictionary
recurrences, Legendre sums) so the package's fast paths are checked against
code that shares no structure with them.
"""


def naive_lucas(k, n_hi):
    """L_0..L_{n_hi} by summing the k previous terms of a value dict."""
    vals = {n: 0 for n in range(-(k - 2), 0)}
    vals[0], vals[1] = 2, 1
    for n in range(2, n_hi + 1):
        vals[n] = sum(vals[n - i] for i in range(1, k + 1))
    return [vals[n] for n in range(n_hi + 1)]


def naive_fib(k, n_hi):
    """F_0..F_{n_hi} the same way (seeds: zeros, then F_1 = 1)."""
    vals = {n: 0 for n in range(2 - k, 1)}
    vals[1] = 1
    for n in range(2, n_hi + 1):
        vals[n] = sum(vals[n - i] for i in range(1, k + 1))
    return [vals[n] for n in range(n_hi + 1)]


def naive_q(k, depth):
    """Q_0..Q_depth, i.e. L at negative indices, by running the sum downward."""
    vals = {n: 0 for n in range(-(k - 2), 0)}
    vals[0], vals[1] = 2, 1
    for m in range(-(k - 1), -(depth + 1), -1):
        vals[m] = vals[m + k] - sum(vals[m + i] for i in range(1, k))
    return [vals[-n] for n in range(depth + 1)]


def naive_h(k, depth):
    """H_0..H_depth, i.e. F at negative indices, by the same downward walk."""
    vals = {n: 0 for n in range(2 - k, 1)}
    vals[1] = 1
    for m in range(1 - k, -(depth + 1), -1):
        vals[m] = vals[m + k] - sum(vals[m + i] for i in range(1, k))
    return [vals[-n] for n in range(depth + 1)]


def legendre_nu2_binom(y, z):
    """nu_2 of C(y, z) by counting factors of 2 in the factorial quotient."""
    total = 0
    p = 2
    while p <= y:
        total += y // p - z // p - (y - z) // p
        p *= 2
    return total
