"""Truncated formal power and Laurent series over the rationals.

A :class:`PowerSeries` stores the coefficients ``c_0 .. c_order`` of a series
in one named variable (``t``, ``q`` or ``u = q - 1``). Every arithmetic result
is truncated at the smaller operand order; nothing beyond ``order`` is ever
claimed.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .core import ParameterError, SeriesError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32

Scalar = Fraction | int


@dataclass(frozen=True, slots=True)
class PowerSeries:
    coefficients: tuple[Fraction, ...]
    order: int
    variable: str = "t"

    def __post_init__(self) -> None:
        if self.order < 0:
            raise SeriesError(f"series order must be >= 0, got {self.order}")
        coefficients = [Fraction(c) for c in self.coefficients[: self.order + 1]]
        coefficients.extend([Fraction(0)] * (self.order + 1 - len(coefficients)))
        object.__setattr__(self, "coefficients", tuple(coefficients))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_coefficients(
        cls, coefficients: Iterable[Scalar], order: int | None = None, variable: str = "t"
    ) -> "PowerSeries":
        coefficients = tuple(Fraction(c) for c in coefficients)
        if order is None:
            order = max(len(coefficients) - 1, 0)
        return cls(coefficients, order, variable)

    @classmethod
    def zero(cls, order: int, variable: str = "t") -> "PowerSeries":
        return cls((), order, variable)

    @classmethod
    def constant(cls, c: Scalar, order: int, variable: str = "t") -> "PowerSeries":
        return cls((Fraction(c),), order, variable)

    @classmethod
    def monomial(cls, c: Scalar, power: int, order: int, variable: str = "t") -> "PowerSeries":
        if power < 0:
            raise SeriesError(f"monomial power must be >= 0, got {power}")
        coefficients = [Fraction(0)] * power + [Fraction(c)]
        return cls(tuple(coefficients), order, variable)

    @classmethod
    def exp(cls, c: Scalar, order: int, variable: str = "t") -> "PowerSeries":
        """The series of ``e^(c * variable)``."""
        c = Fraction(c)
        return cls(tuple(c**i / factorial(i) for i in range(order + 1)), order, variable)

    # -- inspection -----------------------------------------------------

    def __getitem__(self, index: int) -> Fraction:
        if index < 0:
            return Fraction(0)
        if index > self.order:
            raise SeriesError(
                f"coefficient {index} is beyond the truncation order {self.order}",
                details={"index": index, "order": self.order},
            )
        return self.coefficients[index]

    def __len__(self) -> int:
        return self.order + 1

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if c:
                return i
        return None

    def egf_values(self) -> list[Fraction]:
        """``n! * c_n``: the values encoded by an exponential generating function."""
        return [factorial(n) * c for n, c in enumerate(self.coefficients)]

    def evaluate(self, x: Scalar) -> Fraction:
        """Evaluate the truncated polynomial at ``x``."""
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other: "PowerSeries | Scalar") -> "PowerSeries":
        if isinstance(other, PowerSeries):
            if other.variable != self.variable:
                raise SeriesError(
                    f"series variable mismatch: {self.variable} vs {other.variable}",
                    details={"left": self.variable, "right": other.variable},
                )
            return other
        return PowerSeries.constant(other, self.order, self.variable)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coefficients, min(order, self.order), self.variable)

    def pad(self, order: int) -> "PowerSeries":
        """Raise the order with zero coefficients; only valid for exact polynomials."""
        return PowerSeries(self.coefficients, max(order, self.order), self.variable)

    def shift(self, power: int) -> "PowerSeries":
        """Multiply by ``variable^power`` keeping the order."""
        if power < 0:
            raise SeriesError(f"shift must be >= 0, got {power}")
        return PowerSeries((Fraction(0),) * power + self.coefficients, self.order, self.variable)

    def scale(self, c: Scalar) -> "PowerSeries":
        return PowerSeries(tuple(c * x for x in self.coefficients), self.order, self.variable)

    def __neg__(self) -> "PowerSeries":
        return self.scale(-1)

    def __add__(self, other: "PowerSeries | Scalar") -> "PowerSeries":
        other = self._coerce(other)
        order = min(self.order, other.order)
        return PowerSeries(
            tuple(self.coefficients[i] + other.coefficients[i] for i in range(order + 1)),
            order,
            self.variable,
        )

    __radd__ = __add__

    def __sub__(self, other: "PowerSeries | Scalar") -> "PowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other: "PowerSeries | Scalar") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        other = self._coerce(other)
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        product = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            if not a[i]:
                continue
            for j in range(order + 1 - i):
                if b[j]:
                    product[i + j] += a[i] * b[j]
        return PowerSeries(tuple(product), order, self.variable)

    __rmul__ = __mul__

    def invert(self) -> "PowerSeries":
        """Multiplicative inverse by the triangular recurrence."""
        a = self.coefficients
        if a[0] == 0:
            raise SeriesError(
                "cannot invert a series with zero constant term",
                details={"variable": self.variable},
            )
        inverse = [Fraction(0)] * (self.order + 1)
        inverse[0] = 1 / a[0]
        for n in range(1, self.order + 1):
            acc = sum((a[i] * inverse[n - i] for i in range(1, n + 1) if a[i]), Fraction(0))
            inverse[n] = -acc / a[0]
        return PowerSeries(tuple(inverse), self.order, self.variable)

    def __truediv__(self, other: "PowerSeries | Scalar") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return self.scale(Fraction(1) / Fraction(other))
        return self * self._coerce(other).invert()

    def __pow__(self, exponent: int) -> "PowerSeries":
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = PowerSeries.constant(1, self.order, self.variable)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


@dataclass(frozen=True, slots=True)
class LaurentSeries:
    """``sum_{i >= -pole_order} c_i u^i`` stored as ``u^-pole_order * body``."""

    pole_order: int
    body: PowerSeries

    @classmethod
    def from_power_series(cls, body: PowerSeries, pole_order: int = 0) -> "LaurentSeries":
        if pole_order < 0:
            raise SeriesError(f"pole order must be >= 0, got {pole_order}")
        return cls(pole_order, body)

    @property
    def variable(self) -> str:
        return self.body.variable

    @property
    def precision(self) -> int:
        """Highest exponent whose coefficient is known."""
        return self.body.order - self.pole_order

    def coefficient(self, exponent: int) -> Fraction:
        return self.body[exponent + self.pole_order]

    def principal_part(self) -> list[Fraction]:
        """Coefficients of ``u^-pole_order .. u^-1``."""
        return [self.body[i] for i in range(min(self.pole_order, self.body.order + 1))]

    def normalize(self) -> "LaurentSeries":
        """Strip leading zero coefficients of negative exponents."""
        body = self.body
        pole = self.pole_order
        lead = 0
        while lead < pole and lead <= body.order and body.coefficients[lead] == 0:
            lead += 1
        if not lead:
            return self
        body = PowerSeries(body.coefficients[lead:], body.order - lead, body.variable)
        return LaurentSeries(pole - lead, body)

    def _with_pole(self, pole_order: int) -> PowerSeries:
        extra = pole_order - self.pole_order
        return PowerSeries(
            (Fraction(0),) * extra + self.body.coefficients,
            self.body.order + extra,
            self.body.variable,
        )

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        pole = max(self.pole_order, other.pole_order)
        return LaurentSeries(pole, self._with_pole(pole) + other._with_pole(pole))

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.pole_order, -self.body)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries | Scalar") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.pole_order, self.body.scale(other))
        return LaurentSeries(self.pole_order + other.pole_order, self.body * other.body)

    def first_nonzero(self) -> int | None:
        index = self.body.first_nonzero()
        return None if index is None else index - self.pole_order


def _check_order(order: int) -> None:
    if order < 0:
        raise ParameterError(f"truncation order must be >= 0, got {order}")


def todd_series(w: Fraction, order: int, variable: str = "t") -> PowerSeries:
    """``w t / (e^(w t) - 1)``."""
    reciprocal = PowerSeries(tuple(w**i / factorial(i + 1) for i in range(order + 1)), order, variable)
    return reciprocal.invert()


def bernoulli_series(r: int, x: Scalar, order: int = DEFAULT_ORDER) -> list[Fraction]:
    """``B_n^(r)(x)`` for ``n = 0..order`` from ``(t / (e^t - 1))^r e^(x t)``."""
    if r < 0:
        raise ParameterError(f"Bernoulli order r must be >= 0, got {r}")
    _check_order(order)
    series = todd_series(Fraction(1), order) ** r * PowerSeries.exp(x, order)
    return series.egf_values()


def barnes_series(k: int, x: Scalar, w: Sequence[Scalar], order: int = DEFAULT_ORDER) -> list[Fraction]:
    """Barnes multiple Bernoulli polynomials ``B_n^(k)(x | w_1..w_k)`` for ``n = 0..order``."""
    if k < 1 or len(w) != k:
        raise ParameterError(f"barnes_series needs k >= 1 weights, got k={k} and {len(w)} weights")
    _check_order(order)
    if any(Fraction(wj) == 0 for wj in w):
        raise ParameterError("Barnes weights must be nonzero", details={"w": [str(wj) for wj in w]})
    series = PowerSeries.exp(x, order)
    for wj in w:
        series = series * todd_series(Fraction(wj), order)
    return series.egf_values()


def u_expand_ratio(c: int, order: int = DEFAULT_ORDER) -> PowerSeries:
    """``c / [c]_q`` expanded at ``q = 1 + u``."""
    if c < 1:
        raise ParameterError(f"u_expand_ratio needs c >= 1, got {c}")
    _check_order(order)
    # [c]_q / c = sum_i C(c, i + 1) u^i / c
    qint_over_c = PowerSeries(tuple(Fraction(comb(c, i + 1), c) for i in range(order + 1)), order, "u")
    return qint_over_c.invert()


def u_expand_log(order: int = DEFAULT_ORDER) -> PowerSeries:
    """``log(1 + u) / u``."""
    _check_order(order)
    return PowerSeries(tuple(Fraction((-1) ** i, i + 1) for i in range(order + 1)), order, "u")


def u_binomial(exponent: int, order: int = DEFAULT_ORDER) -> PowerSeries:
    """``(1 + u)^exponent`` for a nonnegative integer exponent."""
    if exponent < 0:
        raise ParameterError(f"u_binomial needs exponent >= 0, got {exponent}")
    return PowerSeries(tuple(Fraction(comb(exponent, i)) for i in range(order + 1)), order, "u")


def gaussian_binomial_series(r: int, k: int, order: int = DEFAULT_ORDER) -> PowerSeries:
    """The Gaussian binomial as a polynomial in ``q``, truncated at ``order``.

    Built with the q-Pascal rule ``C(r, k) = C(r-1, k-1) + q^k C(r-1, k)``.
    """
    if r < 0 or k < 0:
        raise ParameterError(f"gaussian_binomial_series needs r, k >= 0, got r={r}, k={k}")
    if k > r:
        return PowerSeries.zero(order, "q")
    # row[j] holds the coefficient list of C(m, j)
    row: list[list[int]] = [[1]]
    for m in range(1, r + 1):
        nxt: list[list[int]] = []
        for j in range(min(m, k) + 1):
            left = row[j - 1] if j >= 1 else []
            right = row[j] if j < len(row) else []
            size = max(len(left), len(right) + j)
            coefficients = [0] * size
            for i, c in enumerate(left):
                coefficients[i] += c
            for i, c in enumerate(right):
                coefficients[i + j] += c
            nxt.append(coefficients)
        row = nxt
    return PowerSeries.from_coefficients(row[k], order=order, variable="q")


def geometric_series(c: int, order: int = DEFAULT_ORDER, variable: str = "q") -> PowerSeries:
    """``1 / (1 - variable^c)`` for ``c >= 1``."""
    if c < 1:
        raise ParameterError(f"geometric_series needs c >= 1, got {c}")
    coefficients = [Fraction(1) if i % c == 0 else Fraction(0) for i in range(order + 1)]
    return PowerSeries(tuple(coefficients), order, variable)
