import math
from fractions import Fraction as F

import pytest

from errors import ConstraintViolation, DivergentMoment, PoleInLowerParams
from scalar import (
    FLOAT,
    as_scalar,
    beta,
    close,
    fmt,
    gamma_ratio,
    is_integer,
    is_zero,
    parse_number,
    pochhammer,
    power,
    sqrt,
)


@pytest.mark.parametrize(
    "text, expected",
    [("3/7", F(3, 7)), (" -2/4 ", F(-1, 2)), ("0.25", F(1, 4)), ("1e-3", F(1, 1000)), ("7", F(7))],
)
def test_parse_number_exact(text, expected):
    value = parse_number(text)
    assert isinstance(value, F)
    assert value == expected


def test_parse_number_long_decimal_is_float():
    value = parse_number("0.1234567890123456789")
    assert isinstance(value, float)
    assert value == pytest.approx(0.1234567890123456789)


@pytest.mark.parametrize("text", ["abc", "1/0", "", "nan", "inf"])
def test_parse_number_rejects(text):
    with pytest.raises(ConstraintViolation):
        parse_number(text)


def test_as_scalar_backends():
    assert as_scalar(2) == F(2) and isinstance(as_scalar(2), F)
    assert as_scalar("1/2", FLOAT) == 0.5
    with pytest.raises(ConstraintViolation):
        as_scalar(True)


def test_fmt():
    assert fmt(F(1, 2)) == "1/2"
    assert fmt(0.5) == "0.5"


def test_sqrt_exact_and_float():
    assert sqrt(F(9, 4)) == F(3, 2)
    assert sqrt(F(2)) == pytest.approx(math.sqrt(2))
    with pytest.raises(ConstraintViolation):
        sqrt(F(-1))


def test_power():
    assert power(F(4, 9), F(1, 2)) == F(2, 3)
    assert power(F(2, 3), 3) == F(8, 27)
    assert power(F(2), F(1, 2)) == pytest.approx(math.sqrt(2))
    with pytest.raises(DivergentMoment):
        power(F(0), -1)


def test_roots_of_huge_perfect_powers_stay_exact():
    assert sqrt(F((10**200) ** 2)) == F(10**200)
    assert power(F((10**200) ** 2, 7**4), F(1, 2)) == F(10**200, 49)
    assert power(F(3**300), F(1, 3)) == F(3**100)
    assert power(F(2**99 + 1), F(1, 3)) == pytest.approx(float(2**99 + 1) ** (1 / 3))


def test_pochhammer():
    assert pochhammer(F(3), 2) == 12
    assert pochhammer(F(1, 2), 3) == F(15, 8)
    assert isinstance(pochhammer(F(1, 2), 3), F)
    assert pochhammer(0.5, 3) == pytest.approx(1.875)
    assert isinstance(pochhammer(0.5, 3), float)
    assert pochhammer(-2.0, 3) == 0.0
    assert pochhammer(F(1, 2), 0) == 1
    assert pochhammer(F(3), -1) == F(1, 2)
    with pytest.raises(PoleInLowerParams):
        pochhammer(F(1), -1)


def test_gamma_ratio_pairs_integer_differences():
    assert gamma_ratio([F(5)], [F(3)]) == 12
    assert gamma_ratio([F(7, 2)], [F(1, 2)]) == F(15, 8)
    assert gamma_ratio([F(1, 2)], []) == pytest.approx(math.sqrt(math.pi))


def test_gamma_ratio_pole_in_denominator_is_zero():
    assert gamma_ratio([F(1)], [F(0)]) == 0


def test_beta_value():
    assert float(beta(F(2), F(3))) == pytest.approx(1 / 12)


def test_predicates():
    assert is_integer(F(4, 2)) and not is_integer(F(1, 2)) and is_integer(3.0)
    assert is_zero(F(0)) and not is_zero(F(1, 10 ** 20))
    assert is_zero(1e-12)
    assert close(F(1, 3), F(2, 6))
    assert close(1.0, 1.0 + 1e-13)
