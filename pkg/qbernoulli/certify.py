"""Degree bounds that turn sampled identity checks into proofs.

Every quantity in an exact identity is a rational function ``N(q) / D(q)``
where ``D`` is a product of cyclotomic polynomials: ``[m]_{q^b}`` divides
out to ``prod_{d | bm, d not| b} Phi_d`` and ``q^b - 1`` to ``prod_{d | b} Phi_d``.
:class:`DegreeField` runs the closed-form code over :class:`DegreeBound`
values, which track an upper bound for ``deg N`` and the exact cyclotomic
content of ``D``. A residual whose numerator has degree at most ``D`` and
which vanishes at ``D + 1`` points with ``q not in {0, 1, -1}`` (no
cyclotomic roots there) is identically zero.
"""

import itertools
import logging
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import divisors, totient

from .core import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_Q_SAMPLES: tuple[Fraction, ...] = tuple(
    Fraction(x) for x in ("2", "3", "1/2", "5/3", "-2", "7", "-3/2", "10")
)


def _cyclotomic_degree(d: int) -> int:
    return int(totient(d))


@dataclass(frozen=True)
class DegreeBound:
    """``N / prod_d Phi_d^m_d`` with ``deg N <= num_degree``."""

    num_degree: int
    denominator: Counter[int] = field(default_factory=Counter)

    @staticmethod
    def coerce(value: "DegreeBound | int | Fraction") -> "DegreeBound":
        if isinstance(value, DegreeBound):
            return value
        return DegreeBound(0)

    @property
    def denominator_degree(self) -> int:
        return sum(_cyclotomic_degree(d) * m for d, m in self.denominator.items())

    def __add__(self, other: "DegreeBound | int | Fraction") -> "DegreeBound":
        other = DegreeBound.coerce(other)
        common = self.denominator | other.denominator
        left = self.num_degree + _degree_of(common - self.denominator)
        right = other.num_degree + _degree_of(common - other.denominator)
        return DegreeBound(max(left, right), common)

    __radd__ = __add__

    def __sub__(self, other: "DegreeBound | int | Fraction") -> "DegreeBound":
        return self + other

    def __rsub__(self, other: "int | Fraction") -> "DegreeBound":
        return self + other

    def __neg__(self) -> "DegreeBound":
        return self

    def __mul__(self, other: "DegreeBound | int | Fraction") -> "DegreeBound":
        other = DegreeBound.coerce(other)
        return DegreeBound(self.num_degree + other.num_degree, self.denominator + other.denominator)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DegreeBound":
        if exponent < 0:
            raise ParameterError("degree bounds support only nonnegative powers")
        result = DegreeBound(0)
        for _ in range(exponent):
            result = result * self
        return result


def _degree_of(content: Counter[int]) -> int:
    return sum(_cyclotomic_degree(d) * m for d, m in content.items())


def _cyclotomic_content(n: int, exclude: int = 0) -> Counter[int]:
    """``{d: 1}`` for ``d | n`` with ``d not| exclude`` (``exclude=0`` keeps all)."""
    return Counter({d: 1 for d in divisors(n) if not exclude or exclude % d})


class DegreeField:
    """The closed-form primitives over :class:`DegreeBound`."""

    def const(self, c: int | Fraction) -> DegreeBound:
        return DegreeBound(0)

    def qpow(self, e: int, base: int = 1) -> DegreeBound:
        if base * e < 0:
            raise ParameterError("degree bounds need nonnegative powers of q", details={"exponent": base * e})
        return DegreeBound(base * e)

    def qint(self, m: int, base: int = 1) -> DegreeBound:
        if m < 0:
            raise ParameterError(f"degree bounds need m >= 0, got {m}")
        return DegreeBound(max(base * (m - 1), 0))

    def inv_qint(self, m: int, base: int = 1) -> DegreeBound:
        if m < 1:
            raise ParameterError(f"1/[m]_q needs m >= 1, got {m}")
        return DegreeBound(0, _cyclotomic_content(base * m, exclude=base))

    def inv_qminus1(self, base: int = 1) -> DegreeBound:
        return DegreeBound(0, _cyclotomic_content(base))


def _candidate_points() -> Iterator[Fraction]:
    yield from DEFAULT_Q_SAMPLES
    for height in itertools.count(2):
        for num in range(1, height):
            den = height - num
            if gcd(num, den) != 1:
                continue
            for sign in (1, -1):
                yield Fraction(sign * num, den)


def certify_points(count: int) -> list[Fraction]:
    """``count`` distinct rationals outside ``{0, 1, -1}``: the default samples first."""
    points: list[Fraction] = []
    seen: set[Fraction] = set()
    for candidate in _candidate_points():
        if len(points) >= count:
            break
        if candidate in (0, 1, -1) or candidate in seen:
            continue
        seen.add(candidate)
        points.append(candidate)
    return points
