"""Closed forms of the Changhee q-Bernoulli polynomials.

The exact value carried around is the reduced normalization

    beta = B / (log q)^k
         = (1/(q-1))^k (1/(1-q))^n sum_r C(n,r) (-q^w)^r prod_j c_j(r) / [c_j(r)]_q,
    c_j(r) = r a_j + b_j,

which is a rational function of q and q^w. The same formula is evaluated over
any object implementing :class:`QField`: exact rationals, Q_p, or the degree
bookkeeping used by certify mode.
"""

import itertools
import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from math import comb
from typing import Any, Protocol

from .core import DomainError, ParameterError, SeriesError
from .exactq import QPoint, falling_factorial, qint, qpochhammer
from .padic import PadicNumber, plog, q_power, qint_padic
from .series import DEFAULT_ORDER, LaurentSeries, PowerSeries, u_binomial, u_expand_log, u_expand_ratio

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ChangheeParams:
    """``(n, k, a, b, w)`` for ``B_{n,q}^(k)(w | a; b)``.

    ``qw`` overrides ``q^w`` with an explicit rational so that fractional
    shifts such as ``(w + a.i) / l`` stay exact.
    """

    n: int
    k: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    w: int | Fraction = 0
    qw: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if self.n < 0:
            raise ParameterError(f"degree n must be >= 0, got {self.n}", details={"n": self.n})
        if self.k < 1:
            raise ParameterError(f"order k must be >= 1, got {self.k}", details={"k": self.k})
        if len(self.a) != self.k or len(self.b) != self.k:
            raise ParameterError(
                f"a and b must have length k={self.k}",
                details={"k": self.k, "a": list(self.a), "b": list(self.b)},
            )
        if any(x < 1 for x in self.a) or any(x < 1 for x in self.b):
            raise ParameterError(
                "all a_j and b_j must be >= 1",
                details={"a": list(self.a), "b": list(self.b)},
            )
        if isinstance(self.w, int) and self.w < 0:
            raise ParameterError(f"w must be >= 0, got {self.w}", details={"w": self.w})
        if self.qw is not None:
            object.__setattr__(self, "qw", Fraction(self.qw))

    @classmethod
    def build(
        cls,
        n: int,
        k: int,
        a: Sequence[int] | int,
        b: Sequence[int] | int,
        w: int | Fraction = 0,
        qw: Fraction | None = None,
    ) -> "ChangheeParams":
        """Construct params, broadcasting a single ``a`` or ``b`` value to length k."""
        return cls(n, k, broadcast(a, k, "a"), broadcast(b, k, "b"), w, qw)

    @property
    def integer_w(self) -> int:
        if isinstance(self.w, Fraction):
            if self.w.denominator != 1 or self.w < 0:
                raise ParameterError(
                    f"the exact backend needs a nonnegative integer w, got {self.w}",
                    details={"w": self.w},
                )
            return int(self.w)
        return self.w

    def with_(self, **changes: Any) -> "ChangheeParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["a"] = list(self.a)
        data["b"] = list(self.b)
        if isinstance(self.w, Fraction):
            data["w"] = str(self.w)
        if self.qw is None:
            data.pop("qw")
        else:
            data["qw"] = str(self.qw)
        return data


def broadcast(values: Sequence[int] | int, k: int, name: str) -> tuple[int, ...]:
    if isinstance(values, int):
        return (values,) * k
    values = tuple(values)
    if len(values) == 1 and k > 1:
        return values * k
    if len(values) != k:
        raise ParameterError(
            f"{name} has {len(values)} entries but k={k}",
            details={name: list(values), "k": k},
        )
    return values


def unit_family(n: int, k: int, h: int, w: int | Fraction = 0) -> ChangheeParams:
    """``a = (1, .., 1)`` and ``b = (h, h-1, .., h-k+1)``."""
    if h < k:
        raise ParameterError(f"h must be >= k, got h={h}, k={k}", details={"h": h, "k": k})
    return ChangheeParams(n, k, (1,) * k, tuple(h - j for j in range(k)), w)


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------


class QField(Protocol):
    """The q-primitives the closed form needs, over some coefficient domain."""

    def const(self, c: int | Fraction) -> Any: ...

    def qpow(self, e: int, base: int = 1) -> Any: ...

    def qint(self, m: int, base: int = 1) -> Any: ...

    def inv_qint(self, m: int, base: int = 1) -> Any: ...

    def inv_qminus1(self, base: int = 1) -> Any: ...


class ExactField:
    """Rational evaluation at a sample point q."""

    def __init__(self, q: QPoint | Fraction | int | str):
        self.q = QPoint.of(q)
        self._bases: dict[int, QPoint] = {1: self.q}

    def _base(self, base: int) -> QPoint:
        point = self._bases.get(base)
        if point is None:
            point = self._bases[base] = self.q.power(base)
        return point

    def const(self, c: int | Fraction) -> Fraction:
        return Fraction(c)

    def qpow(self, e: int, base: int = 1) -> Fraction:
        return self.q.value ** (base * e)

    def qint(self, m: int, base: int = 1) -> Fraction:
        return qint(m, self._base(base))

    def inv_qint(self, m: int, base: int = 1) -> Fraction:
        return 1 / qint(m, self._base(base))

    def inv_qminus1(self, base: int = 1) -> Fraction:
        return 1 / (self._base(base).value - 1)


class PadicField:
    """Evaluation in Q_p at a p-adic q with ``v(q - 1) >= 1``."""

    def __init__(self, q: PadicNumber):
        shifted = q - 1
        if shifted.is_zero() or shifted.valuation < 1:
            raise DomainError(
                "the p-adic closed form needs v(q - 1) >= 1 and q != 1",
                details={"q": q.to_text()},
            )
        self.q = q
        self.context = q.context

    def const(self, c: int | Fraction) -> PadicNumber:
        return self.context(Fraction(c))

    def qpow(self, e: int | Fraction, base: int = 1) -> PadicNumber:
        return q_power(self.q, base * e)

    def qint(self, m: int, base: int = 1) -> PadicNumber:
        return qint_padic(m, self.q**base)

    def inv_qint(self, m: int, base: int = 1) -> PadicNumber:
        return 1 / self.qint(m, base)

    def inv_qminus1(self, base: int = 1) -> PadicNumber:
        return 1 / (self.q**base - 1)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def reduced_value(field: QField, n: int, a: Sequence[int], b: Sequence[int], qw: Any, base: int = 1) -> Any:
    """The reduced closed form on raw parameter tuples, with base ``q^base``.

    ``len(a) == 0`` is the order-0 extension, which equals ``[w]_q^n``.
    """
    if n < 0:
        raise ParameterError(f"degree n must be >= 0, got {n}")
    if len(a) != len(b):
        raise ParameterError("a and b must have the same length", details={"a": list(a), "b": list(b)})
    k = len(a)
    total = field.const(0)
    for r in range(n + 1):
        term = field.const(comb(n, r) * (-1) ** r) * qw**r
        for aj, bj in zip(a, b, strict=True):
            c = r * aj + bj
            if c < 1:
                raise ParameterError(f"r*a_j + b_j must be >= 1, got {c}", details={"a": list(a), "b": list(b)})
            term = term * c * field.inv_qint(c, base)
        total = total + term
    return total * ((-1) ** n) * field.inv_qminus1(base) ** (n + k)


def reduced_closed_form(params: ChangheeParams, q: QPoint | Fraction | int) -> Fraction:
    """``B_{n,q}^(k)(w | a; b) / (log q)^k`` as an exact rational."""
    field = ExactField(q)
    qw = params.qw if params.qw is not None else field.qpow(params.integer_w)
    return reduced_value(field, params.n, params.a, params.b, qw)


def padic_closed_form(params: ChangheeParams, q: PadicNumber) -> PadicNumber:
    """The full closed form ``(log q)^k * beta`` evaluated in Q_p."""
    field = PadicField(q)
    qw = field.const(params.qw) if params.qw is not None else field.qpow(params.w)
    value = reduced_value(field, params.n, params.a, params.b, qw)
    result = plog(q) ** params.k * value
    logger.debug("padic closed form n=%d k=%d -> %s", params.n, params.k, result)
    return result


def addition_value(field: QField, n: int, a: Sequence[int], b: Sequence[int], w: int) -> Any:
    total = field.const(0)
    qw = field.qpow(w)
    bracket = field.qint(w)
    for i in range(n + 1):
        total = total + field.const(comb(n, i)) * bracket ** (n - i) * qw**i * reduced_value(
            field, i, a, b, field.const(1)
        )
    return total


def addition_rhs(params: ChangheeParams, q: QPoint | Fraction | int) -> Fraction:
    """``sum_i C(n,i) [w]_q^(n-i) q^(wi) beta_i(a; b)``; equals the closed form."""
    return addition_value(ExactField(q), params.n, params.a, params.b, params.integer_w)


DISTRIBUTION_MODES = ("corrected", "paper-literal")


def distribution_value(
    field: QField, n: int, a: Sequence[int], b: Sequence[int], w: int, l: int, mode: str = "corrected"
) -> Any:
    if l < 1:
        raise ParameterError(f"l must be >= 1, got {l}", details={"l": l})
    if mode not in DISTRIBUTION_MODES:
        raise ParameterError(f"unknown distribution mode {mode!r}", details={"modes": list(DISTRIBUTION_MODES)})
    k = len(a)
    total = field.const(0)
    for shifts in itertools.product(range(l), repeat=k):
        weight = field.qpow(sum(bj * i for bj, i in zip(b, shifts, strict=True)))
        shifted_qw = field.qpow(w + sum(aj * i for aj, i in zip(a, shifts, strict=True)))
        total = total + weight * reduced_value(field, n, a, b, shifted_qw, base=l)
    if mode == "corrected":
        return field.qint(l) ** n * total
    if n >= k:
        prefactor = field.qint(l) ** (n - k)
    else:
        prefactor = field.inv_qint(l) ** (k - n)
    return prefactor * field.const(l**k) * total


def distribution_rhs(
    params: ChangheeParams, l: int, q: QPoint | Fraction | int, mode: str = "corrected"
) -> Fraction:
    """Right side of the distribution relation over base ``q^l``.

    ``corrected`` uses the prefactor ``[l]_q^n``; ``paper-literal`` keeps the
    printed ``[l]_q^(n-k)`` which, in reduced form, picks up ``l^k`` from
    ``(log q^l)^k``.
    """
    return distribution_value(ExactField(q), params.n, params.a, params.b, params.integer_w, l, mode)


def pochhammer_form(n: int, k: int, h: int, w: int, q: QPoint | Fraction | int) -> Fraction:
    """``(1-q)^-n sum_r C(n,r) q^(wr) (-1)^(r+k) (r+h)_k / (q^(r+h-k+1); q)_k``."""
    if h < k:
        raise ParameterError(f"h must be >= k, got h={h}, k={k}")
    q = QPoint.of(q)
    total = Fraction(0)
    for r in range(n + 1):
        numerator = comb(n, r) * q.value ** (w * r) * (-1) ** (r + k) * falling_factorial(r + h, k)
        total += numerator / qpochhammer(q.value ** (r + h - k + 1), q, k)
    return total / (1 - q.value) ** n


def q_limit(params: ChangheeParams, order: int = DEFAULT_ORDER) -> Fraction:
    """``lim_{q -> 1} B_{n,q}^(k)(w | a; b)`` from the Laurent expansion in ``u = q - 1``."""
    n, k = params.n, params.k
    if order < n + k + 2:
        raise ParameterError(
            f"truncation order {order} is too small for n + k = {n + k}; need >= {n + k + 2}",
            details={"order": order, "n": n, "k": k},
        )
    if params.qw is not None:
        raise ParameterError("q_limit needs an integer w, not an explicit q^w")
    w = params.integer_w
    log_power = u_expand_log(order).shift(1) ** k
    total = PowerSeries.zero(order, "u")
    for r in range(n + 1):
        term = u_binomial(w * r, order).scale(comb(n, r) * (-1) ** r)
        for aj, bj in zip(params.a, params.b, strict=True):
            term = term * u_expand_ratio(r * aj + bj, order)
        total = total + term
    laurent = LaurentSeries(n + k, (log_power * total).scale((-1) ** n))
    principal = laurent.principal_part()
    if any(principal):
        raise SeriesError(
            "Laurent expansion has nonvanishing pole coefficients",
            details={"params": params.to_dict(), "principal_part": principal},
        )
    logger.debug("q_limit n=%d k=%d order=%d", n, k, order)
    return laurent.coefficient(0)
