"""Zero census: predicted windows, exhaustive scans, sign audits."""

import pytest

from lucaskit import census
from lucaskit.errors import ParameterError, ParityError, RangeError, ScanLimitError


def test_predicted_intervals_anchors():
    assert census.predicted_intervals(2) == []
    assert [tuple(s) for s in census.predicted_intervals(3)] == [(1, 1, 1)]
    assert [tuple(s) for s in census.predicted_intervals(6)] == [
        (1, 1, 4), (2, 8, 10), (3, 15, 16), (4, 22, 22)]


def test_multiplicity_formula():
    assert [census.multiplicity_formula(k) for k in range(2, 8)] == [0, 1, 3, 6, 10, 15]


def test_census_k5_exact_zero_set():
    z = census.census(5, 100)
    assert z.zeros == [1, 2, 3, 7, 8, 13]
    assert z.sporadic == []
    assert len(z.matched) == 6


@pytest.mark.parametrize("k", range(2, 13))
def test_census_counts_match_formula(k):
    z = census.census(k, 4 * k * k)
    assert len(z.zeros) == census.multiplicity_formula(k)
    assert z.sporadic == []


def test_census_window_guard():
    with pytest.raises(ScanLimitError):
        census.census(5, 24)


def test_interval_sizes_sum_to_multiplicity():
    for k in range(3, 15):
        sizes = sum(s.hi - s.lo + 1 for s in census.predicted_intervals(k))
        assert sizes == census.multiplicity_formula(k)


def test_even_sign_audit_clean_window():
    audit = census.even_sign_audit(4, 7, 160)
    assert audit.first_violation is None
    assert audit.checked == 154


def test_even_sign_audit_guards():
    with pytest.raises(ParityError):
        census.even_sign_audit(5, 100, 200)
    with pytest.raises(RangeError):
        census.even_sign_audit(4, 6, 160)
    with pytest.raises(RangeError):
        census.even_sign_audit(4, 9, 8)


def test_domain_errors():
    with pytest.raises(ParameterError):
        census.predicted_intervals(1)
    with pytest.raises(ParameterError):
        census.multiplicity_formula(0)
