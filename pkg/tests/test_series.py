import json
from fractions import Fraction

import pytest
from hypothesis import given

from iterfrac import EXACT, NumericField, Series, comp_inverse, compose, exp_ord_convert, preset, shift_fixed_point
from iterfrac.errors import ConstantTermNonzero, DerivativeZero, NotFixedPoint, NotInvertible, OrderTooLarge
from iterfrac.series import check_order, evaluate, load_series

from conftest import invertible_series

N = 8


def x_series(n=N):
    return Series.identity(n)


# ---------------------------------------------------------------- compose


def test_geometric_composed_with_itself():
    # x/(1-x) twice is x/(1-2x), whose coefficients are powers of 2
    f = preset("geometric", N)
    assert list(compose(f, f).coeffs) == [0] + [2 ** (n - 1) for n in range(1, N + 1)]


def test_compose_with_identity():
    f = preset("quad", N)
    assert compose(f, x_series()) == f
    assert compose(x_series(), f) == f


def test_quad_composed_with_itself():
    # (x + x^2) + (x + x^2)^2, expanded with series arithmetic
    f = Series.of([0, 1, 1, 0, 0])
    expected = f + f * f
    assert compose(f, f, 4) == expected
    assert list(expected.coeffs) == [0, 1, 2, 2, 1]


def test_inner_series_must_vanish_at_zero():
    with pytest.raises(ConstantTermNonzero):
        compose(preset("geometric", 4), Series.of([1, 1, 0, 0, 0]))


@given(invertible_series(), invertible_series(), invertible_series())
def test_compose_is_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_numeric_compose_matches_exact():
    num = NumericField()
    f, g = preset("quad", 6), preset("geometric", 6)
    assert compose(f, g).to_numeric(num).close(compose(f.to_numeric(num), g.to_numeric(num)))


# ---------------------------------------------------------------- comp_inverse


def test_inverse_of_geometric():
    f = preset("geometric", N)
    g = comp_inverse(f)
    assert compose(f, g) == x_series() == compose(g, f)
    assert list(g.coeffs[1:]) == [(-1) ** (n - 1) for n in range(1, N + 1)]


def test_inverse_of_identity():
    assert comp_inverse(x_series()) == x_series()


def test_inverse_of_linear():
    assert comp_inverse(preset("linear(5/2)", N)) == preset("linear(2/5)", N)


@given(invertible_series())
def test_inverse_is_an_involution(f):
    assert comp_inverse(comp_inverse(f)) == f


@given(invertible_series())
def test_inverse_is_two_sided(f):
    g = comp_inverse(f)
    ident = Series.identity(f.order)
    assert compose(f, g) == ident and compose(g, f) == ident


@pytest.mark.parametrize("coeffs", [[1, 1, 0], [0, 0, 1]])
def test_inverse_requires_invertible(coeffs):
    with pytest.raises(NotInvertible):
        comp_inverse(Series.of(coeffs))


# ---------------------------------------------------------------- shift_fixed_point


def test_shift_of_square_at_one():
    f = Series.of([0, 0, 1])
    shifted = Series.of([1, 1]).truncate(2).power(2) - Series.of([1, 0, 0])
    assert shift_fixed_point(f, 1) == shifted
    assert list(shifted.coeffs) == [0, 2, 1]


def test_zero_shift():
    f = preset("quad", N)
    assert shift_fixed_point(f, 0) == f


def test_derivative_zero():
    with pytest.raises(DerivativeZero):
        shift_fixed_point(Series.of([0, 2, -1]), 1)


def test_not_a_fixed_point():
    with pytest.raises(NotFixedPoint):
        shift_fixed_point(Series.of([0, 0, 1]), 2)


def test_shift_there_and_back():
    # a polynomial with fixed points 0 and 2: f(x) = x + x^2 (x - 2)
    f = Series.of([0, 1, -2, 1])
    g = shift_fixed_point(f, 2)
    assert shift_fixed_point(g, -2) == f


def test_shift_reproduces_values():
    f = Series.of([0, 0, 1])
    g = shift_fixed_point(f, 1)
    for x in (Fraction(1, 3), Fraction(-2), Fraction(5, 7)):
        assert evaluate(g, x - 1) + 1 == evaluate(f, x)


# ---------------------------------------------------------------- conversions


def test_ord_to_exp():
    assert exp_ord_convert([1, 1, 1], "ord_to_exp") == [1, 1, 2]
    assert exp_ord_convert([1, 1, 1, 1], "ord_to_exp") == [1, 1, 2, 6]


def test_zero_conversion():
    assert exp_ord_convert([0, 0, 0], "ord_to_exp") == [0, 0, 0]


def test_exp_to_ord():
    assert exp_ord_convert([1, 1, 2, 6], "exp_to_ord") == [1, 1, 1, 1]


@given(invertible_series())
def test_conversion_round_trip(f):
    assert exp_ord_convert(exp_ord_convert(list(f.coeffs), "ord_to_exp"), "exp_to_ord") == list(f.coeffs)


# ---------------------------------------------------------------- io and presets


def test_presets():
    assert preset("geometric", 3).coeffs == (0, 1, 1, 1)
    assert preset("quad", 3).coeffs == (0, 1, 1, 0)
    assert preset("moebius(2)", 3).coeffs == (0, 2, 2, 2)
    assert preset("linear(1/3)", 3).coeffs == (0, Fraction(1, 3), 0, 0)
    assert preset("expm1", 3).coeffs == (0, 1, Fraction(1, 2), Fraction(1, 6))


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset("cosine", 4)


def test_json_round_trip(tmp_path):
    f = preset("moebius(3/2)", 5)
    path = tmp_path / "f.json"
    path.write_text(json.dumps(f.to_json()))
    assert load_series(str(path), 5, EXACT) == f
    assert load_series(json.dumps(f.to_json("exponential")), 5, EXACT) == f


def test_numeric_json_round_trip():
    num = NumericField()
    f = preset("moebius(0.7+0.1i)", 4, num)
    assert Series.from_json(f.to_json(), num).close(f)


def test_order_cap():
    assert check_order(40) == 40
    with pytest.raises(OrderTooLarge):
        check_order(41)
    with pytest.raises(OrderTooLarge):
        check_order(0)
