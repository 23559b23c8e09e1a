from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ancestor.scalarseries import (
    LaurentSeries,
    Q,
    TruncationError,
    binomial_power,
    dfact,
    qstr,
    residue,
    series_compose,
    series_reverse,
    to_q,
)

from .strategies import small_q


def odd_series(coeffs, order):
    terms = {1: 1}
    terms.update({2 * i + 3: c for i, c in enumerate(coeffs)})
    return LaurentSeries.from_terms(terms, order, parity=1)


def test_to_q_accepts_strings_and_rejects_floats():
    assert to_q("6/4") == Q(3, 2)
    assert to_q(Fraction(-2, 6)) == Q(-1, 3)
    assert qstr(Q(-6, 4)) == "-3/2"
    assert qstr(Q(4, 2)) == "2"
    with pytest.raises(TypeError):
        to_q(0.5)
    with pytest.raises(ValueError):
        to_q("")


def test_double_factorial():
    assert [dfact(n) for n in (-1, 1, 3, 5, 7)] == [1, 1, 3, 15, 105]
    with pytest.raises(ValueError):
        dfact(4)


def test_compose_inverse_square():
    z = LaurentSeries.z(9)
    inner = z - LaurentSeries.from_terms({3: 1}, 9)
    outer = LaurentSeries.from_terms({-2: 1}, 9)
    out = series_compose(outer, inner)
    assert out.coeff(-2) == 1 and out.coeff(0) == 2 and out.coeff(2) == 3
    # multiply-back oracle: (z - z^3)^2 * out = 1
    back = (inner * inner) * out
    assert back.coeff(0) == 1
    assert all(back.coeff(e) == 0 for e in range(1, back.order + 1))


def test_coefficient_beyond_order_raises():
    s = LaurentSeries.from_terms({1: 1, 3: 2}, 5)
    with pytest.raises(TruncationError):
        s.coeff(6)
    with pytest.raises(TruncationError):
        residue(LaurentSeries.from_terms({-3: 1}, -2))


def test_reverse_known_values():
    f = LaurentSeries.from_terms({1: 1, 3: -2}, 9)
    h = series_reverse(f)
    assert [h.coeff(e) for e in (1, 3, 5, 7, 9)] == [1, 2, 12, 96, 880]


def lagrange_coeff(f, n):
    """[z^n] of the compositional inverse: (1/n) [w^(n-1)] (w / f(w))^n."""
    ratio = (f.shift(-1)).inverse()
    return (ratio ** n).coeff(n - 1) / n


@given(st.lists(small_q, max_size=3))
def test_reverse_matches_lagrange_inversion(coeffs):
    f = odd_series(coeffs, 11)
    h = series_reverse(f)
    for n in range(1, 12, 2):
        assert h.coeff(n) == lagrange_coeff(f, n)


@given(st.lists(small_q, max_size=3))
def test_reverse_is_two_sided_inverse(coeffs):
    f = odd_series(coeffs, 11)
    h = series_reverse(f)
    assert series_compose(f, h).agrees_with(LaurentSeries.z(11))
    assert series_compose(h, f).agrees_with(LaurentSeries.z(11))


@given(st.lists(small_q, min_size=1, max_size=4), st.sampled_from([1, 3, 5]))
def test_binomial_power_root_oracle(coeffs, root):
    u = LaurentSeries.from_terms({2 * i + 2: c for i, c in enumerate(coeffs)}, 12)
    y = binomial_power(u, root)
    # raise back to the root power and compare with 1 + u
    assert (y ** root).agrees_with(u + 1)


def test_binomial_power_cube_root_values():
    u = LaurentSeries.from_terms({2: -3}, 6)
    y = binomial_power(u, 3)
    assert [y.coeff(e) for e in (0, 2, 4, 6)] == [1, -1, -1, Q(-5, 3)]
    with pytest.raises(ValueError):
        binomial_power(u, 2)


@given(st.lists(small_q, max_size=4), st.lists(small_q, max_size=4))
def test_product_commutes_and_inverse(a, b):
    s = LaurentSeries.from_terms({e: c for e, c in enumerate([1] + a)}, 6)
    t = LaurentSeries.from_terms({e - 1: c for e, c in enumerate([2] + b)}, 6)
    assert (s * t).agrees_with(t * s)
    assert (s * s.inverse()).agrees_with(LaurentSeries.constant(1, 6))


def test_positive_part_and_residue():
    s = LaurentSeries.from_terms({-3: 1, -1: Q(2, 3), 0: 5, 2: 1}, 4)
    assert s.positive_part().terms() == {0: 5, 2: 1}
    assert residue(s) == Q(2, 3)


def test_declared_parity_is_checked():
    with pytest.raises(ValueError):
        LaurentSeries.from_terms({1: 1, 2: 1}, 5, parity=1)
