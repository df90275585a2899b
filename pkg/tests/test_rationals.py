from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from bidarena.rationals import (INF, as_fraction, decimal_text, format_ratio,
                                format_rational, is_finite, parse_rational)


def test_parse_ratio_text():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational(" 7/4 ") == Fraction(7, 4)


def test_parse_decimal_text_is_exact():
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("2") == Fraction(2)
    assert parse_rational("0.1") == Fraction(1, 10)


@pytest.mark.parametrize("bad", ["", "x", "1/0", "1/2/3", "1.2.3"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(3, 2)) == "3/2"
    assert format_rational(Fraction(4)) == "4"
    assert format_rational(INF) == "inf"


def test_format_ratio_always_has_denominator():
    assert format_ratio(Fraction(1)) == "1/1"
    assert format_ratio(Fraction(-1, 2)) == "-1/2"
    assert format_ratio(INF) == "inf"


def test_decimal_text():
    assert decimal_text(Fraction(1, 4)) == "0.25"
    assert decimal_text(Fraction(1, 3)) == "0.333333333333"
    assert decimal_text(INF) == "inf"


def test_infinity_ordering():
    assert Fraction(10**9) < INF
    assert INF > Fraction(10**9)
    assert not INF <= Fraction(10**9)
    assert INF >= INF and INF <= INF
    assert is_finite(Fraction(1)) and not is_finite(INF)


def test_infinity_is_a_singleton():
    from bidarena.rationals import Infinity
    assert Infinity() is INF


def test_as_fraction_conversions():
    assert as_fraction(2) == Fraction(2)
    assert as_fraction("5/3") == Fraction(5, 3)
    assert as_fraction(Fraction(1, 7)) == Fraction(1, 7)


def test_as_fraction_rejects_inexact_types():
    with pytest.raises(TypeError):
        as_fraction(0.25)
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(TypeError):
        as_fraction(None)


@given(st.fractions(max_denominator=10**6))
def test_parse_inverts_format(x):
    assert parse_rational(format_rational(x)) == x
    assert parse_rational(format_ratio(x)) == x
