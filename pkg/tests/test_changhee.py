from __future__ import annotations

from fractions import Fraction

import pytest

from qbernoulli.changhee import (
    ChangheeParams,
    ExactField,
    addition_rhs,
    broadcast,
    distribution_rhs,
    padic_closed_form,
    pochhammer_form,
    q_limit,
    reduced_closed_form,
    reduced_value,
    unit_family,
)
from qbernoulli.core import DomainError, ParameterError
from qbernoulli.exactq import QPoint, qint
from qbernoulli.padic import PadicContext, from_rational, plog
from qbernoulli.series import barnes_series

pytestmark = pytest.mark.unit

SAMPLES = [Fraction(2), Fraction(1, 2), Fraction(5, 3), Fraction(-2)]


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


class TestChangheeParams:
    def test_build_broadcasts_single_values(self):
        params = ChangheeParams.build(1, 3, 2, 1)
        assert params.a == (2, 2, 2)
        assert params.b == (1, 1, 1)

    @pytest.mark.parametrize(
        ("kwargs", "message"),
        [
            ({"n": -1, "k": 1, "a": (1,), "b": (1,)}, "degree n"),
            ({"n": 0, "k": 0, "a": (), "b": ()}, "order k"),
            ({"n": 0, "k": 2, "a": (1,), "b": (1, 1)}, "length k"),
            ({"n": 0, "k": 1, "a": (1,), "b": (0,)}, "b_j"),
            ({"n": 0, "k": 1, "a": (1,), "b": (1,), "w": -1}, "w must be"),
        ],
    )
    def test_rejects_invalid_parameters(self, kwargs, message):
        with pytest.raises(ParameterError, match=message):
            ChangheeParams(**kwargs)

    def test_broadcast_length_mismatch(self):
        with pytest.raises(ParameterError, match="has 2 entries but k=3"):
            broadcast((1, 2), 3, "a")

    def test_integer_w_rejects_fraction(self):
        with pytest.raises(ParameterError):
            _ = ChangheeParams(1, 1, (1,), (1,), Fraction(1, 2)).integer_w

    def test_to_dict_omits_missing_qw(self):
        data = ChangheeParams.build(2, 2, (1, 2), 3, w=1).to_dict()
        assert data == {"n": 2, "k": 2, "a": [1, 2], "b": [3, 3], "w": 1}

    def test_unit_family(self):
        params = unit_family(2, 3, 4)
        assert params.a == (1, 1, 1)
        assert params.b == (4, 3, 2)

    def test_unit_family_needs_h_at_least_k(self):
        with pytest.raises(ParameterError, match="h must be >= k"):
            unit_family(1, 3, 2)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


class TestReducedClosedForm:
    def test_degree_zero_order_one(self):
        assert reduced_closed_form(ChangheeParams.build(0, 1, 1, 1), 2) == 1

    def test_degree_one_order_one(self):
        assert reduced_closed_form(ChangheeParams.build(1, 1, 1, 1), 2) == Fraction(-1, 3)

    def test_degree_zero_order_two(self):
        # prod b_j / ((q - 1)^2 [b_j]_q) at q = 2
        assert reduced_closed_form(ChangheeParams.build(0, 2, (1, 1), (1, 2)), 2) == Fraction(2, 3)

    def test_degree_zero_is_independent_of_w(self):
        assert reduced_closed_form(ChangheeParams.build(0, 1, 1, 1, w=5), 2) == 1

    @pytest.mark.parametrize("q", SAMPLES)
    def test_explicit_qw_matches_integer_w(self, q):
        by_w = reduced_closed_form(ChangheeParams.build(2, 2, (1, 2), (2, 3), w=3), q)
        by_qw = reduced_closed_form(ChangheeParams.build(2, 2, (1, 2), (2, 3), qw=q**3), q)
        assert by_w == by_qw

    def test_rejects_degenerate_q(self):
        with pytest.raises(ParameterError):
            reduced_closed_form(ChangheeParams.build(1, 1, 1, 1), 1)

    @pytest.mark.parametrize("n", range(4))
    def test_order_zero_extension_is_power_of_qint(self, n):
        field = ExactField(Fraction(3))
        q = QPoint(Fraction(3))
        assert reduced_value(field, n, (), (), field.qpow(2)) == qint(2, q) ** n

    @pytest.mark.parametrize("q", SAMPLES)
    def test_addition_theorem(self, q):
        params = ChangheeParams.build(3, 2, (1, 2), (2, 1), w=2)
        assert addition_rhs(params, q) == reduced_closed_form(params, q)

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_corrected_distribution_relation(self, l):
        params = ChangheeParams.build(2, 1, 2, 3, w=1)
        assert distribution_rhs(params, l, Fraction(5, 3)) == reduced_closed_form(params, Fraction(5, 3))

    def test_literal_distribution_relation_differs(self):
        params = ChangheeParams.build(0, 1, 1, 1)
        q = Fraction(2)
        assert distribution_rhs(params, 2, q, mode="corrected") == reduced_closed_form(params, q)
        assert distribution_rhs(params, 2, q, mode="paper-literal") != reduced_closed_form(params, q)

    def test_distribution_rejects_unknown_mode(self):
        with pytest.raises(ParameterError, match="unknown distribution mode"):
            distribution_rhs(ChangheeParams.build(0, 1, 1, 1), 2, 2, mode="loose")

    @pytest.mark.parametrize("n", range(4))
    @pytest.mark.parametrize(("k", "h"), [(1, 1), (1, 2), (2, 2), (2, 3)])
    def test_pochhammer_form(self, n, k, h):
        for q in (Fraction(2), Fraction(-3, 2)):
            for w in (0, 1):
                assert pochhammer_form(n, k, h, w, q) == reduced_closed_form(unit_family(n, k, h, w), q)


class TestQLimit:
    @pytest.mark.parametrize("n", range(6))
    def test_classical_bernoulli_numbers(self, bernoulli_reference, n):
        assert q_limit(ChangheeParams.build(n, 1, 1, 1), order=16) == bernoulli_reference(n)

    @pytest.mark.parametrize("n", range(4))
    def test_barnes_limit_is_independent_of_b(self, n):
        reference = barnes_series(2, 1, [1, 2], n)[n]
        for b in ((1, 1), (2, 3), (3, 1)):
            assert q_limit(ChangheeParams.build(n, 2, (1, 2), b, w=1), order=16) == reference

    def test_order_must_cover_the_pole(self):
        with pytest.raises(ParameterError, match="too small"):
            q_limit(ChangheeParams.build(3, 2, 1, 1), order=6)

    def test_rejects_explicit_qw(self):
        with pytest.raises(ParameterError):
            q_limit(ChangheeParams.build(1, 1, 1, 1, qw=Fraction(2)))


class TestPadicClosedForm:
    def test_degree_zero(self):
        ctx = PadicContext(3, 12)
        q = from_rational(4, ctx)
        value = padic_closed_form(ChangheeParams.build(0, 1, 1, 1), q)
        assert value.agrees_with(plog(q) / 3)

    def test_matches_reduced_form_times_log(self):
        ctx = PadicContext(5, 12)
        q = from_rational(6, ctx)
        params = ChangheeParams.build(2, 2, (1, 2), (1, 3), w=1)
        expected = plog(q) ** 2 * from_rational(reduced_closed_form(params, 6), ctx)
        assert padic_closed_form(params, q).agrees_with(expected)

    def test_rejects_q_far_from_one(self):
        with pytest.raises(DomainError, match="v\\(q - 1\\) >= 1"):
            padic_closed_form(ChangheeParams.build(0, 1, 1, 1), from_rational(2, PadicContext(3, 12)))
