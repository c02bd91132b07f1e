from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbernoulli.core import DomainError, ParameterError
from qbernoulli.padic import (
    INF,
    PadicContext,
    _ilog,
    from_integer,
    from_rational,
    pexp,
    plog,
    q_power,
    qint_padic,
    valuation,
)

pytestmark = pytest.mark.unit

primes = st.sampled_from([3, 5, 7])


class TestValuation:
    def test_integer(self):
        assert valuation(18, 3) == 2

    def test_denominator(self):
        assert valuation(Fraction(1, 9), 3) == -2

    def test_zero_is_infinite(self):
        assert valuation(0, 3) == math.inf

    def test_negative_numerator(self):
        assert valuation(Fraction(-50, 7), 5) == 2

    def test_returns_plain_int(self):
        assert type(valuation(Fraction(5, 27), 3)) is int

    @given(st.integers(min_value=1, max_value=10**12), primes)
    def test_integer_log_brackets(self, n, p):
        k = _ilog(n, p)
        assert p**k <= n < p ** (k + 1)


class TestContext:
    @pytest.mark.parametrize("p", [2, 4, 9, 1])
    def test_rejects_non_odd_primes(self, p):
        with pytest.raises(ParameterError, match="odd prime"):
            PadicContext(p, 5)

    def test_rejects_nonpositive_precision(self):
        with pytest.raises(ParameterError):
            PadicContext(3, 0)

    def test_call_rejects_foreign_values(self, ctx3):
        other = from_rational(1, PadicContext(5, 12))
        with pytest.raises(DomainError, match="context mismatch"):
            ctx3(other)


class TestEmbedding:
    def test_minus_half_mod_3_to_the_5(self):
        x = from_rational(Fraction(-1, 2), PadicContext(3, 5))
        assert x.valuation == 0
        assert x.unit == 121
        assert x.precision == 5
        assert x.residue() == 121
        assert x.to_text() == "3^0 * 121 (mod 3^5)"

    def test_negative_valuation_keeps_relative_precision(self, ctx3):
        x = from_rational(Fraction(1, 9), ctx3)
        assert x.valuation == -2
        assert x.precision == 10
        assert x.norm() == 9

    def test_exact_zero(self, ctx3):
        zero = from_rational(0, ctx3)
        assert zero.is_zero()
        assert zero.precision == INF
        assert zero.to_text() == "0"

    def test_to_fraction_is_the_integer_representative(self, ctx3):
        assert from_rational(Fraction(7, 2), ctx3).to_fraction().denominator == 1
        assert from_rational(Fraction(81), ctx3).to_fraction() == 81

    def test_residue_needs_integrality(self, ctx3):
        with pytest.raises(DomainError):
            from_rational(Fraction(1, 3), ctx3).residue()

    def test_reencode_across_primes_rejected(self, ctx3):
        with pytest.raises(DomainError):
            from_rational(2, ctx3).reencode(PadicContext(5, 12))


class TestArithmetic:
    def test_adding_exact_zero_is_identity(self, ctx3):
        x = from_rational(Fraction(5, 7), ctx3)
        assert x + 0 == x

    def test_addition_precision_is_minimum(self, ctx3):
        coarse = from_integer(1, ctx3, 3)
        fine = from_rational(1, ctx3)
        assert (coarse + fine).precision == 3

    def test_multiplication_precision(self, ctx3):
        three = from_rational(3, ctx3)  # v = 1, A = 13
        coarse = from_integer(1, ctx3, 2)
        assert (three * coarse).precision == 3

    def test_cancellation_loses_relative_precision(self, ctx3):
        x = from_rational(1, ctx3)
        y = from_rational(1 + 3**5, ctx3)
        diff = y - x
        assert diff.valuation == 5
        assert diff.precision == 12

    def test_subtraction_to_zero_keeps_precision_bound(self, ctx3):
        x = from_rational(Fraction(2, 5), ctx3)
        diff = x - x
        assert diff.is_zero()
        assert diff.precision == 12
        assert diff.to_text() == "0 (mod 3^12)"

    def test_division(self, ctx3):
        x = from_rational(Fraction(2, 5), ctx3) / from_rational(Fraction(4, 5), ctx3)
        assert x.agrees_with(Fraction(1, 2))

    def test_division_by_zero(self, ctx3):
        with pytest.raises(DomainError, match="division by zero"):
            from_rational(1, ctx3) / from_rational(0, ctx3)

    def test_negative_power(self, ctx3):
        x = from_rational(Fraction(9, 2), ctx3)
        assert (x**-2 * x**2).agrees_with(1)

    def test_distance_exponent(self, ctx3):
        x = from_rational(Fraction(1, 2), ctx3)
        assert x.distance_exponent(Fraction(1, 2) + 27) == 3
        assert x.distance_exponent(Fraction(1, 2)) == 12

    @given(p=primes, a=st.fractions(max_denominator=50), b=st.fractions(max_denominator=50))
    def test_embedding_is_a_ring_map(self, p, a, b):
        if Fraction(a).denominator % p == 0 or Fraction(b).denominator % p == 0:
            return
        ctx = PadicContext(p, 10)
        x, y = from_rational(a, ctx), from_rational(b, ctx)
        assert (x + y).agrees_with(a + b)
        assert (x * y).agrees_with(a * b)
        assert (x - y).agrees_with(a - b)


# ---------------------------------------------------------------------------
# Logarithm and exponential
# ---------------------------------------------------------------------------


class TestLogExp:
    def test_log_of_one_is_zero(self, ctx3):
        assert plog(ctx3.one()).is_zero()

    def test_exp_of_zero_is_one(self, ctx3):
        assert pexp(ctx3.zero()).agrees_with(1)

    def test_log_outside_domain(self, ctx3):
        with pytest.raises(DomainError, match="plog"):
            plog(from_rational(2, ctx3))

    def test_exp_outside_domain(self, ctx3):
        with pytest.raises(DomainError, match="pexp"):
            pexp(from_rational(Fraction(1, 2), ctx3))

    def test_log_is_additive(self, ctx3):
        x, y = from_rational(4, ctx3), from_rational(7, ctx3)
        assert plog(x * y).agrees_with(plog(x) + plog(y))

    @settings(max_examples=100, deadline=None)
    @given(p=primes, m=st.integers(0, 10**6))
    def test_exp_log_round_trip(self, p, m):
        ctx = PadicContext(p, 12)
        x = from_rational(1 + p * m, ctx)
        assert pexp(plog(x)).agrees_with(x)

    @settings(max_examples=100, deadline=None)
    @given(p=primes, m=st.integers(1, 10**6))
    def test_log_exp_round_trip(self, p, m):
        ctx = PadicContext(p, 12)
        x = from_rational(p * m, ctx)
        assert plog(pexp(x)).agrees_with(x)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_recheck_at_higher_precision(self, p):
        ctx = PadicContext(p, 10)
        wide = ctx.with_precision(18)
        for m in range(1, 20):
            value = 1 + p * m
            low = plog(from_rational(value, ctx))
            high = plog(from_rational(value, wide)).reencode(ctx).truncate(low.precision)
            assert low.agrees_with(high)


class TestQPower:
    def test_integer_exponent(self, ctx3):
        assert q_power(from_rational(4, ctx3), 2).agrees_with(16)

    def test_square_root(self, ctx3):
        q = from_rational(4, ctx3)
        root = q_power(q, Fraction(1, 2))
        assert (root * root).agrees_with(q)

    def test_exponent_must_be_integral(self, ctx3):
        with pytest.raises(DomainError, match="not a p-adic integer"):
            q_power(from_rational(4, ctx3), Fraction(1, 3))

    def test_fractional_exponent_needs_q_near_one(self, ctx3):
        with pytest.raises(DomainError):
            q_power(from_rational(2, ctx3), Fraction(1, 2))

    def test_qint_padic(self, ctx3):
        assert qint_padic(3, from_rational(4, ctx3)).agrees_with(21)

    def test_qint_padic_at_one(self, ctx3):
        with pytest.raises(DomainError):
            qint_padic(3, ctx3.one())
