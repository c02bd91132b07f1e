"""Exact rational arithmetic and the q-analog primitives.

Every value here is a :class:`fractions.Fraction`; nothing is ever rounded.
A :class:`QPoint` is a rational sample point for the deformation parameter q,
kept away from ``0`` and ``±1`` so that ``1 - q`` and every ``[m]_q`` with
``m >= 1`` are invertible.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from .core import ParameterError

logger = logging.getLogger(__name__)

Rational = Fraction

_RANGE_RE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


@dataclass(frozen=True, slots=True)
class QPoint:
    """A rational value of q with ``q not in {0, 1, -1}``."""

    value: Fraction

    def __post_init__(self) -> None:
        value = Fraction(self.value)
        if value in (0, 1, -1):
            raise ParameterError(f"q must avoid 0 and ±1, got {value}", details={"q": value})
        object.__setattr__(self, "value", value)

    @classmethod
    def of(cls, value: "QPoint | Fraction | int | str") -> "QPoint":
        if isinstance(value, QPoint):
            return value
        if isinstance(value, str):
            return cls(parse_rational(value))
        return cls(Fraction(value))

    def power(self, l: int) -> "QPoint":
        """The sample point q^l (used when the base changes to q^l)."""
        return QPoint(self.value**l)

    def __str__(self) -> str:
        return format_rational(self.value)


def format_rational(x: Fraction | int) -> str:
    """Render a rational as ``"num/den"`` (integers without the denominator)."""
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise ParameterError(f"Not a rational number: {text!r}") from err


def parse_int_range(text: str) -> list[int]:
    """Parse ``"lo..hi"`` (inclusive), a comma list, or a single integer."""
    match = _RANGE_RE.match(text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if hi < lo:
            raise ParameterError(f"Empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise ParameterError(f"Not an integer list or range: {text!r}") from err


def parse_rational_list(text: str) -> list[Fraction]:
    return [parse_rational(part) for part in text.split(",") if part.strip()]


@lru_cache(maxsize=65536)
def _qint_cached(m: int, q: Fraction) -> Fraction:
    return (1 - q**m) / (1 - q)


def qint(m: int, q: QPoint) -> Fraction:
    """The q-integer ``[m]_q = (1 - q^m) / (1 - q)``; negative m is allowed."""
    return _qint_cached(m, q.value)


def qint_poly(m: int) -> list[int]:
    """Coefficients of ``[m]_q = 1 + q + ... + q^(m-1)`` as a polynomial in q."""
    if m < 0:
        raise ParameterError(f"[m]_q is a polynomial only for m >= 0, got {m}")
    return [1] * m


def qfactorial(k: int, q: QPoint) -> Fraction:
    if k < 0:
        raise ParameterError(f"q-factorial needs k >= 0, got {k}")
    return prod((qint(j, q) for j in range(1, k + 1)), start=Fraction(1))


def qbinomial(r: int, k: int, q: QPoint) -> Fraction:
    """Gaussian binomial coefficient; ``k > r`` gives 0 by convention."""
    if r < 0 or k < 0:
        raise ParameterError(f"q-binomial needs r, k >= 0, got r={r}, k={k}")
    if k > r:
        return Fraction(0)
    numerator = prod((qint(r - j, q) for j in range(k)), start=Fraction(1))
    return numerator / qfactorial(k, q)


def qpochhammer(a: Fraction | int, q: QPoint, n: int) -> Fraction:
    """The q-shifted factorial ``(a; q)_n``."""
    if n < 0:
        raise ParameterError(f"q-Pochhammer needs n >= 0, got {n}")
    a = Fraction(a)
    return prod((1 - a * q.value**i for i in range(n)), start=Fraction(1))


def falling_factorial(x: Fraction | int, k: int) -> Fraction:
    if k < 0:
        raise ParameterError(f"falling factorial needs k >= 0, got {k}")
    x = Fraction(x)
    return prod((x - i for i in range(k)), start=Fraction(1))


def geom_sum(c: int, q: QPoint) -> Fraction:
    """Exact value ``1 / (1 - q^c)`` of the geometric series ``sum_m q^(c m)``.

    For ``|q| > 1`` this is the value of the formal resummation, not a limit
    of partial sums.
    """
    if c <= 0:
        raise ParameterError(f"geometric resummation needs c >= 1, got {c}")
    return 1 / (1 - q.value**c)
