"""Finite-precision arithmetic in Q_p.

A nonzero :class:`PadicNumber` stands for ``p^v * u`` with ``u`` a unit,
known modulo ``p^A`` (absolute precision ``A``). Every operation returns the
precision it can guarantee rather than the context precision, following the
pessimistic propagation rules:

* add/sub: ``min(A_x, A_y)``
* mul: ``min(A_x + v_y, A_y + v_x)``
* div: ``v_x - v_y + min(A_x - v_x, A_y - v_y)``

The logarithm and exponential are summed as exact rationals on the integer
representative of their argument and embedded once at the end.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from sympy import integer_log, isprime, multiplicity

from .core import DomainError, ParameterError

logger = logging.getLogger(__name__)

INF = math.inf


def valuation(x: int | Fraction, p: int) -> int | float:
    """The p-adic valuation of a rational; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return int(multiplicity(p, abs(x.numerator))) - int(multiplicity(p, x.denominator))


def _ilog(n: int, p: int) -> int:
    """floor(log_p n) for n >= 1."""
    exponent, _ = integer_log(n, p)
    return int(exponent)


@dataclass(frozen=True, slots=True)
class PadicContext:
    """The prime ``p`` and the working precision ``M`` (values live mod ``p^M``)."""

    p: int
    precision: int

    def __post_init__(self) -> None:
        if self.p < 3 or not isprime(self.p):
            raise ParameterError(f"p must be an odd prime, got {self.p}", details={"p": self.p})
        if self.precision < 1:
            raise ParameterError(f"precision must be >= 1, got {self.precision}")

    def with_precision(self, precision: int) -> "PadicContext":
        return PadicContext(self.p, precision)

    def zero(self, precision: int | float = INF) -> "PadicNumber":
        return PadicNumber(self, INF, 0, precision)

    def one(self) -> "PadicNumber":
        return from_rational(Fraction(1), self)

    def __call__(self, value: "int | Fraction | PadicNumber") -> "PadicNumber":
        if isinstance(value, PadicNumber):
            if value.context != self:
                raise DomainError(
                    "p-adic context mismatch",
                    details={"expected": repr(self), "got": repr(value.context)},
                )
            return value
        return from_rational(Fraction(value), self)


@dataclass(frozen=True, slots=True)
class PadicNumber:
    context: PadicContext
    valuation: int | float
    unit: int
    precision: int | float

    # -- inspection -----------------------------------------------------

    @property
    def p(self) -> int:
        return self.context.p

    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def relative_precision(self) -> int | float:
        if self.is_zero():
            return 0
        return self.precision - self.valuation

    def norm(self) -> Fraction:
        """``|x|_p = p^-v`` (0 for zero)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** -int(self.valuation)

    def to_fraction(self) -> Fraction:
        """The rational representative ``p^v * u``."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** int(self.valuation) * self.unit

    def residue(self) -> int:
        """The integer in ``[0, p^A)`` congruent to this value (needs ``v >= 0``)."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise DomainError("residue is defined only for p-adic integers", details={"valuation": self.valuation})
        return (self.p ** int(self.valuation) * self.unit) % self.p ** int(self.precision)

    def truncate(self, precision: int | float) -> "PadicNumber":
        """Forget digits at and beyond ``p^precision``."""
        if precision >= self.precision:
            return self
        if self.is_zero():
            return self.context.zero(precision)
        return _normalize(self.context, int(self.valuation), self.unit, precision)

    def reencode(self, context: "PadicContext") -> "PadicNumber":
        """The same digits viewed in another context over the same prime."""
        if context.p != self.p:
            raise DomainError("cannot re-encode across primes", details={"from": self.p, "to": context.p})
        if self.is_zero():
            return context.zero(self.precision)
        return _normalize(context, int(self.valuation), self.unit, self.precision)

    def agrees_with(self, other: "PadicNumber | int | Fraction") -> bool:
        """True when both values coincide at the smaller of the two precisions."""
        return (self - other).is_zero()

    def distance_exponent(self, other: "PadicNumber | int | Fraction") -> int | float:
        """``v(self - other)``; when the difference vanishes, the precision bound."""
        diff = self - other
        if diff.is_zero():
            return diff.precision
        return diff.valuation

    def to_text(self) -> str:
        p = self.p
        if self.is_zero():
            if self.precision == INF:
                return "0"
            return f"0 (mod {p}^{int(self.precision)})"
        return f"{p}^{int(self.valuation)} * {self.unit} (mod {p}^{int(self.precision)})"

    def __str__(self) -> str:
        return self.to_text()

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other: "PadicNumber | int | Fraction") -> "PadicNumber":
        return self.context(other)

    def __neg__(self) -> "PadicNumber":
        if self.is_zero():
            return self
        rel = int(self.relative_precision)
        return PadicNumber(self.context, self.valuation, (-self.unit) % self.p**rel, self.precision)

    def __add__(self, other: "PadicNumber | int | Fraction") -> "PadicNumber":
        other = self._coerce(other)
        precision = min(self.precision, other.precision)
        if self.is_zero():
            return other.truncate(precision)
        if other.is_zero():
            return self.truncate(precision)
        p = self.p
        v = int(min(self.valuation, other.valuation))
        s = self.unit * p ** int(self.valuation - v) + other.unit * p ** int(other.valuation - v)
        return _normalize(self.context, v, s, precision)

    def __radd__(self, other: int | Fraction) -> "PadicNumber":
        return self + other

    def __sub__(self, other: "PadicNumber | int | Fraction") -> "PadicNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int | Fraction) -> "PadicNumber":
        return self._coerce(other) - self

    def __mul__(self, other: "PadicNumber | int | Fraction") -> "PadicNumber":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                precision = self.precision + other.precision
            elif self.is_zero():
                precision = self.precision + other.valuation
            else:
                precision = other.precision + self.valuation
            return self.context.zero(precision)
        v = int(self.valuation + other.valuation)
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        return _normalize(self.context, v, self.unit * other.unit, precision)

    def __rmul__(self, other: int | Fraction) -> "PadicNumber":
        return self * other

    def __truediv__(self, other: "PadicNumber | int | Fraction") -> "PadicNumber":
        other = self._coerce(other)
        if other.is_zero():
            raise DomainError("p-adic division by zero", details={"precision": other.precision})
        if self.is_zero():
            return self.context.zero(self.precision - other.valuation)
        rel = int(min(self.relative_precision, other.relative_precision))
        v = int(self.valuation - other.valuation)
        modulus = self.p**rel
        u = self.unit * pow(other.unit, -1, modulus)
        return _normalize(self.context, v, u, v + rel)

    def __rtruediv__(self, other: int | Fraction) -> "PadicNumber":
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "PadicNumber":
        if exponent < 0:
            return self.context.one() / (self ** (-exponent))
        result = self.context.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


def _normalize(ctx: PadicContext, v: int, s: int, precision: int | float) -> PadicNumber:
    """Build ``p^v * s`` known mod ``p^precision``, pulling p-factors out of ``s``."""
    p = ctx.p
    if s == 0:
        return ctx.zero(precision)
    shift = int(multiplicity(p, abs(s)))
    s //= p**shift
    v += shift
    if v >= precision:
        return ctx.zero(precision)
    rel = ctx.precision if precision == INF else min(int(precision) - v, ctx.precision)
    return PadicNumber(ctx, v, s % p**rel, v + rel)


def from_rational(r: Fraction | int, ctx: PadicContext) -> PadicNumber:
    """Embed a rational into Q_p at absolute precision ``M + v(r)``."""
    r = Fraction(r)
    if r == 0:
        return ctx.zero()
    p, m = ctx.p, ctx.precision
    num_v = int(multiplicity(p, abs(r.numerator)))
    den_v = int(multiplicity(p, r.denominator))
    num, den = r.numerator // p**num_v, r.denominator // p**den_v
    v = num_v - den_v
    modulus = p**m
    unit = (num * pow(den, -1, modulus)) % modulus
    return PadicNumber(ctx, v, unit, v + m)


def from_integer(n: int, ctx: PadicContext, precision: int | float = INF) -> PadicNumber:
    """Embed an integer known mod ``p^precision``."""
    return from_rational(Fraction(n), ctx).truncate(precision)


def plog(x: PadicNumber) -> PadicNumber:
    """The p-adic logarithm on ``1 + pZ_p``."""
    ctx = x.context
    y = x - 1
    if y.is_zero():
        return ctx.zero(y.precision)
    if y.valuation < 1:
        raise DomainError(
            "plog needs |1 - x|_p < 1",
            details={"x": x.to_text(), "valuation": y.valuation},
        )
    target = x.precision
    p, v = ctx.p, int(y.valuation)
    y0 = y.to_fraction()
    total = Fraction(0)
    n = 1
    while n * v - _ilog(n, p) < target:
        if n * v - valuation(n, p) < target:
            term = y0**n / n
            total += term if n % 2 else -term
        n += 1
    logger.debug("plog summed %d terms at p=%d target precision %s", n - 1, p, target)
    return from_rational(total, ctx).truncate(target)


def pexp(x: PadicNumber) -> PadicNumber:
    """The p-adic exponential on ``pZ_p`` (p odd)."""
    ctx = x.context
    if x.is_zero():
        return ctx.one().truncate(x.precision)
    if x.valuation < 1:
        raise DomainError(
            "pexp needs |x|_p < 1",
            details={"x": x.to_text(), "valuation": x.valuation},
        )
    p, v = ctx.p, int(x.valuation)
    target = min(x.precision, ctx.precision)
    x0 = x.to_fraction()
    total = Fraction(1)
    n = 1
    while n * v - (n - 1) // (p - 1) < target:
        if n * v - valuation(factorial(n), p) < target:
            total += x0**n / factorial(n)
        n += 1
    logger.debug("pexp summed %d terms at p=%d target precision %s", n, p, target)
    return from_rational(total, ctx).truncate(target)


def q_power(q: PadicNumber, w: "int | Fraction | PadicNumber") -> PadicNumber:
    """``q^w``: repeated multiplication for integer w, ``exp(w log q)`` otherwise."""
    ctx = q.context
    if isinstance(w, int) or (isinstance(w, Fraction) and w.denominator == 1):
        if q.is_zero():
            raise DomainError("q_power needs q != 0")
        return q ** int(w)
    if isinstance(w, Fraction):
        if w.denominator % ctx.p == 0:
            raise DomainError(f"exponent {w} is not a p-adic integer", details={"w": w, "p": ctx.p})
        exponent = from_rational(w, ctx)
    else:
        exponent = ctx(w)
        if not exponent.is_zero() and exponent.valuation < 0:
            raise DomainError("exponent is not a p-adic integer", details={"w": exponent.to_text()})
    shifted = q - 1
    if not shifted.is_zero() and shifted.valuation < 1:
        raise DomainError(
            "q^w for non-integer w needs |1 - q|_p < 1",
            details={"q": q.to_text()},
        )
    return pexp(exponent * plog(q))


def qint_padic(w: "int | Fraction | PadicNumber", q: PadicNumber) -> PadicNumber:
    """``[w]_q = (1 - q^w) / (1 - q)`` in Q_p."""
    denominator = 1 - q
    if denominator.is_zero():
        raise DomainError("[w]_q is undefined at q = 1", details={"q": q.to_text()})
    return (1 - q_power(q, w)) / denominator
