from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qbernoulli.core import ParameterError
from qbernoulli.exactq import (
    QPoint,
    falling_factorial,
    format_rational,
    geom_sum,
    parse_int_range,
    parse_rational,
    parse_rational_list,
    qbinomial,
    qfactorial,
    qint,
    qint_poly,
    qpochhammer,
)

pytestmark = pytest.mark.unit

sample_points = st.sampled_from([Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 3), Fraction(-2)])


# ---------------------------------------------------------------------------
# QPoint and the text codec
# ---------------------------------------------------------------------------


class TestQPoint:
    @pytest.mark.parametrize("value", [0, 1, -1])
    def test_rejects_degenerate_points(self, value):
        with pytest.raises(ParameterError, match="q must avoid"):
            QPoint(Fraction(value))

    def test_of_parses_text(self):
        assert QPoint.of("-3/2").value == Fraction(-3, 2)

    def test_of_returns_existing_point(self):
        q = QPoint(Fraction(5, 3))
        assert QPoint.of(q) is q

    def test_power(self):
        assert QPoint(Fraction(2)).power(3).value == 8

    def test_str_uses_rational_codec(self):
        assert str(QPoint(Fraction(5, 3))) == "5/3"
        assert str(QPoint(Fraction(7))) == "7"


class TestCodec:
    def test_format_rational(self):
        assert format_rational(Fraction(-1, 3)) == "-1/3"
        assert format_rational(4) == "4"

    def test_parse_rational(self):
        assert parse_rational(" 5/3 ") == Fraction(5, 3)

    @pytest.mark.parametrize("text", ["abc", "1/0", ""])
    def test_parse_rational_rejects_garbage(self, text):
        with pytest.raises(ParameterError):
            parse_rational(text)

    def test_parse_range_inclusive(self):
        assert parse_int_range("0..3") == [0, 1, 2, 3]

    def test_parse_comma_list(self):
        assert parse_int_range("1,2,5") == [1, 2, 5]

    def test_parse_single_value(self):
        assert parse_int_range("7") == [7]

    def test_empty_range_rejected(self):
        with pytest.raises(ParameterError, match="Empty range"):
            parse_int_range("3..1")

    def test_parse_int_range_rejects_text(self):
        with pytest.raises(ParameterError):
            parse_int_range("one")

    def test_parse_rational_list(self):
        assert parse_rational_list("2,1/2,-3/2") == [Fraction(2), Fraction(1, 2), Fraction(-3, 2)]


# ---------------------------------------------------------------------------
# q-analog primitives
# ---------------------------------------------------------------------------


class TestPrimitives:
    def test_qint_values(self):
        q = QPoint(Fraction(2))
        assert qint(3, q) == 7
        assert qint(0, q) == 0
        assert qint(1, q) == 1

    def test_qint_negative_m(self):
        assert qint(-1, QPoint(Fraction(2))) == Fraction(-1, 2)

    def test_qint_poly(self):
        assert qint_poly(3) == [1, 1, 1]
        assert qint_poly(0) == []

    def test_qint_poly_rejects_negative(self):
        with pytest.raises(ParameterError):
            qint_poly(-1)

    def test_qfactorial(self):
        # [1][2][3] at q = 2 is 1 * 3 * 7
        assert qfactorial(3, QPoint(Fraction(2))) == 21

    def test_qbinomial_value(self):
        # 1 + q + 2q^2 + q^3 + q^4 at q = 2
        assert qbinomial(4, 2, QPoint(Fraction(2))) == 35

    def test_qbinomial_above_top_is_zero(self):
        assert qbinomial(2, 3, QPoint(Fraction(2))) == 0

    def test_qbinomial_rejects_negative(self):
        with pytest.raises(ParameterError):
            qbinomial(-1, 0, QPoint(Fraction(2)))

    def test_qpochhammer(self):
        # (3; 2)_2 = (1 - 3)(1 - 6)
        assert qpochhammer(3, QPoint(Fraction(2)), 2) == 10
        assert qpochhammer(3, QPoint(Fraction(2)), 0) == 1

    def test_falling_factorial(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(Fraction(1, 2), 2) == Fraction(-1, 4)

    def test_geom_sum(self):
        assert geom_sum(2, QPoint(Fraction(1, 2))) == Fraction(4, 3)

    def test_geom_sum_rejects_nonpositive_step(self):
        with pytest.raises(ParameterError):
            geom_sum(0, QPoint(Fraction(2)))


class TestProperties:
    @given(q=sample_points, r=st.integers(0, 8), data=st.data())
    def test_qbinomial_symmetry(self, q, r, data):
        k = data.draw(st.integers(0, r))
        point = QPoint(q)
        assert qbinomial(r, k, point) == qbinomial(r, r - k, point)

    @given(q=sample_points, r=st.integers(1, 8), data=st.data())
    def test_q_pascal_rule(self, q, r, data):
        k = data.draw(st.integers(1, r))
        point = QPoint(q)
        assert qbinomial(r, k, point) == qbinomial(r - 1, k - 1, point) + q**k * qbinomial(r - 1, k, point)

    @given(q=sample_points, m=st.integers(0, 12))
    def test_qint_matches_polynomial(self, q, m):
        assert qint(m, QPoint(q)) == sum(q**i for i in range(m))
