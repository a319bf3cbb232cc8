"""Recurrence engine: windowed tables, reversed-index walks, identities."""

import pytest

from lucaskit import engine
from lucaskit.errors import ParameterError, RangeError

from conftest import naive_fib, naive_h, naive_lucas, naive_q


def test_classic_order_two_values():
    # 2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123
    assert [engine.lucas_at(2, n) for n in range(11)] == [2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123]
    assert [engine.fib_at(2, n) for n in range(11)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_reversed_index_anchors():
    assert [engine.q_at(2, n) for n in range(8)] == [2, -1, 3, -4, 7, -11, 18, -29]
    assert [engine.h_at(3, n) for n in range(8)] == [0, 0, 1, -1, 0, 2, -3, 1]
    # order-2 mirror laws: L_{-n} = (-1)^n L_n, F_{-n} = (-1)^{n+1} F_n
    for n in range(40):
        assert engine.q_at(2, n) == (-1) ** n * engine.lucas_at(2, n)
        assert engine.h_at(2, n) == (-1) ** (n + 1) * engine.fib_at(2, n)


@pytest.mark.parametrize("k", [2, 3, 5, 7, 11])
def test_forward_against_naive_oracle(k):
    want_l = naive_lucas(k, 300)
    want_f = naive_fib(k, 300)
    for n in range(301):
        assert engine.lucas_at(k, n) == want_l[n]
        assert engine.fib_at(k, n) == want_f[n]


@pytest.mark.parametrize("k", [2, 3, 4, 5, 9])
def test_reversed_against_naive_oracle(k):
    want_q = naive_q(k, 300)
    want_h = naive_h(k, 300)
    assert engine.q_range(k, 0, 300) == want_q
    assert engine.h_range(k, 0, 300) == want_h


def test_ranges_match_pointwise():
    assert engine.q_range(5, 40, 80) == [engine.q_at(5, n) for n in range(40, 81)]
    assert engine.h_range(4, 7, 9) == [engine.h_at(4, n) for n in range(7, 10)]


@pytest.mark.parametrize("k", [2, 3, 6, 10])
def test_short_recurrence_agrees(k):
    for n in range(0, 250):
        assert engine.q_short_recurrence(k, n) == engine.q_at(k, n)


@pytest.mark.parametrize("k", [2, 3, 4, 7, 12, 30])
def test_identity_audit_clean(k):
    report = engine.identity_audit(k, 400)
    assert report.first_failure is None
    assert report.checks_passed == 3 * 401


def test_growth_sanity():
    # terms grow roughly like 2^n; the exact doubling law L_{n+1} = 2L_n - L_{n-k}
    for k in (3, 6):
        for n in range(k + 1, 120):
            assert engine.lucas_at(k, n + 1) == 2 * engine.lucas_at(k, n) - engine.lucas_at(k, n - k)


def test_domain_errors():
    with pytest.raises(ParameterError):
        engine.lucas_at(1, 5)
    with pytest.raises(RangeError):
        engine.q_at(2, -1)
    with pytest.raises(ParameterError):
        engine.identity_audit(4, 0)


def test_cache_clear_is_safe():
    assert engine.lucas_at(6, 50) == engine.lucas_at(6, 50)
    engine.clear_cache()
    assert engine.q_at(6, 33) == naive_q(6, 33)[33]
