import pytest
from sympy import QQ

from modules.polycalc.grammar import (
    PolyParseError, chart_ring, format_poly, in_coordinate_ideal, parse_poly, restrict_to_zero, to_rational,
)


def test_format_is_canonical():
    f = parse_poly("3/2*z1^2*z3 - z2 + 4", 3)
    assert format_poly(f) == "3/2*z1^2*z3 - 1*z2 + 4"
    assert parse_poly(format_poly(f), 3) == f


def test_zero_and_constants():
    assert format_poly(parse_poly("0", 2)) == "0"
    assert parse_poly("-3/4", 1) == chart_ring(1)(QQ(-3, 4))
    assert parse_poly(5, 2) == chart_ring(2)(5)


def test_unicode_minus_is_accepted():
    R = chart_ring(2)
    z1, z2 = R.gens
    assert parse_poly("−z1 + z2", 2) == -z1 + z2


def test_implicit_multiplication_is_rejected_with_location():
    with pytest.raises(PolyParseError) as err:
        parse_poly("2z1", 2)
    assert err.value.line == 1
    assert err.value.column == 2


@pytest.mark.parametrize("text", ["z4", "1/0", "", "z1 +", "z1^", "z1 ** 2", "x1"])
def test_malformed_polynomials(text):
    with pytest.raises(PolyParseError):
        parse_poly(text, 3)


def test_rationals():
    assert to_rational("−7/3") == QQ(-7, 3)
    assert to_rational(4) == QQ(4)
    with pytest.raises(PolyParseError):
        to_rational("1/0")
    with pytest.raises(PolyParseError):
        to_rational("a")


def test_coordinate_ideal_helpers():
    R = chart_ring(3)
    z1, z2, z3 = R.gens
    f = z1 * z3 + z2 ** 2 + z3
    assert not in_coordinate_ideal(f, 2)
    assert in_coordinate_ideal(z1 * z3 + z2 ** 2, 2)
    assert restrict_to_zero(f, 2) == z3
