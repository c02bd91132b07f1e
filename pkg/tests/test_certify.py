from __future__ import annotations

from collections import Counter

import pytest

from qbernoulli.certify import DEFAULT_Q_SAMPLES, DegreeBound, DegreeField, certify_points
from qbernoulli.changhee import ChangheeParams, reduced_value
from qbernoulli.core import ParameterError

pytestmark = pytest.mark.unit


class TestDegreeBound:
    def test_product_adds_degrees_and_denominators(self):
        product = DegreeBound(2) * DegreeBound(3, Counter({2: 1}))
        assert product.num_degree == 5
        assert product.denominator == Counter({2: 1})

    def test_sum_clears_to_common_denominator(self):
        total = DegreeBound(1, Counter({2: 1})) + DegreeBound(0, Counter({3: 1}))
        # Phi_3 has degree 2, Phi_2 degree 1
        assert total.num_degree == 3
        assert total.denominator_degree == 3

    def test_constants_have_degree_zero(self):
        assert (DegreeBound(2) + 5).num_degree == 2
        assert (3 * DegreeBound(2)).num_degree == 2

    def test_negative_power_rejected(self):
        with pytest.raises(ParameterError):
            DegreeBound(1) ** -1


class TestDegreeField:
    def test_inverse_qint_is_cyclotomic(self):
        field = DegreeField()
        assert field.inv_qint(4).denominator_degree == 3
        # [2]_{q^2} = 1 + q^2 = Phi_4
        assert field.inv_qint(2, base=2).denominator == Counter({4: 1})

    def test_qint_degree(self):
        assert DegreeField().qint(3, base=2).num_degree == 4

    def test_closed_form_bound(self):
        params = ChangheeParams.build(1, 1, 1, 1)
        bound = reduced_value(DegreeField(), params.n, params.a, params.b, DegreeField().qpow(0))
        assert bound.denominator_degree >= 2
        assert bound.num_degree >= 0


class TestCertifyPoints:
    def test_defaults_come_first(self):
        assert certify_points(len(DEFAULT_Q_SAMPLES)) == list(DEFAULT_Q_SAMPLES)

    def test_points_are_distinct_and_avoid_roots_of_unity(self):
        points = certify_points(40)
        assert len(points) == 40
        assert len(set(points)) == 40
        assert not {0, 1, -1} & set(points)

    def test_zero_points(self):
        assert certify_points(0) == []
