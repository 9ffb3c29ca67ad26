from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from higgsbetti.errors import ParameterError
from higgsbetti.series import (
    RationalExpr,
    TruncatedSeries,
    add,
    binomial_power,
    expand,
    geometric_inverse,
    is_polynomial_window,
    mul,
)


def S(coeffs, order=None):
    return TruncatedSeries.from_coeffs(coeffs, order)


def test_add_examples():
    assert add(S([1, 1, 0]), S([1, 0, 1])) == S([2, 1, 1])
    f = S([3, -1, 2, 5])
    assert add(f, TruncatedSeries.zero(3)) == f
    assert add(S([1, -1]), S([0, 1])) == S([1, 0])


def test_add_order_mismatch():
    with pytest.raises(ParameterError):
        add(S([1, 1]), S([1, 1, 1]))


def test_mul_examples():
    assert mul(S([1, 1], 2), S([1, 1], 2)) == S([1, 2, 1])
    f = S([2, 0, -3, 1, 4])
    assert mul(f, TruncatedSeries.one(4)) == f
    inv = geometric_inverse(2, 6)
    assert mul(inv, S([1, 0, -1], 6)) == TruncatedSeries.one(6)


def test_geometric_inverse_examples():
    assert geometric_inverse(2, 6) == S([1, 0, 1, 0, 1, 0, 1])
    assert geometric_inverse(4, 5) == S([1, 0, 0, 0, 1, 0])
    assert geometric_inverse(1, 3) == S([1, 1, 1, 1])
    with pytest.raises(ParameterError):
        geometric_inverse(0, 5)


def test_binomial_power_examples():
    assert binomial_power(4, 10) == S([1, 4, 6, 4, 1], 10)
    assert binomial_power(0, 5) == TruncatedSeries.one(5)
    assert binomial_power(8, 2) == S([1, 8, 28])


def test_expand_examples():
    assert expand(RationalExpr((1, 4, 6, 4, 1), (2,)), 2) == S([1, 4, 7])
    assert expand(RationalExpr((1,), (2, 2)), 4) == S([1, 0, 2, 0, 3])
    assert expand(RationalExpr((0, 0, 0, 0, 1), (4,)), 9) == S(
        [0, 0, 0, 0, 1, 0, 0, 0, 1, 0])


def test_expand_recovery():
    expr = RationalExpr((1, 4, 6, 4, 1), (2, 2, 4))
    back = expr.expand(16) * expr.denominator_polynomial(16)
    assert back == S(expr.numerator, 16)


def test_polynomial_window():
    rep = is_polynomial_window(S([1, 0, 1], 10), 5)
    assert rep.is_polynomial and rep.degree == 2
    rep = is_polynomial_window(geometric_inverse(2, 10), 5)
    assert not rep.is_polynomial
    rep = is_polynomial_window(TruncatedSeries.zero(8), 3)
    assert rep.is_polynomial and rep.degree is None
    with pytest.raises(ParameterError):
        is_polynomial_window(S([1], 3), 4)


def test_json_round_trip():
    f = S([10**40, -3, 0, 7], 8)
    assert TruncatedSeries.from_json_dict(f.to_json_dict()) == f


def test_shift_and_scale():
    f = S([1, 2, 3], 4)
    assert f.shifted(2) == S([0, 0, 1, 2, 3])
    assert f.shifted(5) == TruncatedSeries.zero(4)
    assert f.scale(-2) == S([-2, -4, -6], 4)


series_strategy = st.builds(
    TruncatedSeries,
    st.tuples(*[st.integers(min_value=-50, max_value=50) for _ in range(13)]),
)


@settings(max_examples=150, deadline=None)
@given(series_strategy, series_strategy, series_strategy)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100, deadline=None)
@given(series_strategy, series_strategy, st.integers(min_value=0, max_value=12))
def test_truncation_coherence(a, b, m):
    assert (a * b).truncated(m) == a.truncated(m) * b.truncated(m)
    assert (a + b).truncated(m) == a.truncated(m) + b.truncated(m)
