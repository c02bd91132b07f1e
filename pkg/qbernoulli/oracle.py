"""Brute-force level sums for the p-adic invariant integral.

``I(f) = lim_N p^-N sum_{x < p^N} f(x)``. Level sums are accumulated exactly:
plain integers for polynomial terms, integers modulo ``p^W`` for terms that
carry a weight ``q^(c x)``, and the result is embedded into Q_p once. The
distance between a level sum and a closed form is therefore an exact
valuation, not a floating-point estimate.
"""

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Protocol

from .changhee import ChangheeParams, padic_closed_form
from .core import BudgetExceededError, DomainError, ParameterError
from .padic import PadicContext, PadicNumber, from_integer, from_rational, plog
from .series import bernoulli_series

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000
DEFAULT_PRECISION = 20
DEFAULT_GUARD_DIGITS = 4


def check_budget(p: int, level: int, dimension: int, budget: int = DEFAULT_BUDGET, allow_large: bool = False) -> int:
    """Number of summation points ``p^(level * dimension)``; raises above the budget."""
    if level < 1:
        raise ParameterError(f"level N must be >= 1, got {level}", details={"level": level})
    points = p ** (level * dimension)
    if points > budget and not allow_large:
        raise BudgetExceededError(
            f"level sum needs {points} points, budget is {budget} (use allow_large to override)",
            points=points,
            budget=budget,
        )
    return points


def _rational_residue(x: Fraction, p: int, modulus: int) -> int:
    if x.denominator % p == 0:
        raise DomainError(f"{x} is not a p-adic integer", details={"x": x, "p": p})
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def _as_rational(q: "PadicNumber | Fraction | int", p: int) -> Fraction:
    if isinstance(q, PadicNumber):
        if q.p != p:
            raise DomainError("q lives over a different prime", details={"q_prime": q.p, "p": p})
        return q.to_fraction()
    return Fraction(q)


# ---------------------------------------------------------------------------
# Integrands
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class WeightedTerm:
    """``coefficient * x^power * q^(weight x)``."""

    coefficient: Fraction
    power: int
    weight: int = 0


@dataclass(frozen=True)
class WeightedPolynomial:
    """``f(x) = sum coeff x^m q^(c x)`` over a rational base ``q``.

    Without a base every weight must be 0 and ``f`` is a classical polynomial.
    """

    terms: tuple[WeightedTerm, ...]
    q: Fraction | None = None

    def __post_init__(self) -> None:
        if any(term.power < 0 or term.weight < 0 for term in self.terms):
            raise ParameterError("powers and weights must be >= 0")
        if self.q is None and any(term.weight for term in self.terms):
            raise ParameterError("weighted terms need a base q")

    @classmethod
    def monomial(
        cls, power: int, coefficient: Fraction | int = 1, weight: int = 0, q: Fraction | int | None = None
    ) -> "WeightedPolynomial":
        base = None if q is None else Fraction(q)
        return cls((WeightedTerm(Fraction(coefficient), power, weight),), base)

    @classmethod
    def constant(cls, c: Fraction | int = 1) -> "WeightedPolynomial":
        return cls.monomial(0, c)

    @property
    def is_classical(self) -> bool:
        return all(term.weight == 0 for term in self.terms)

    def shift(self, n: int) -> "WeightedPolynomial":
        """``f_n(x) = f(x + n)``."""
        terms: list[WeightedTerm] = []
        for term in self.terms:
            factor = term.coefficient * (self.q ** (term.weight * n) if term.weight else 1)
            for i in range(term.power + 1):
                terms.append(WeightedTerm(factor * comb(term.power, i) * n ** (term.power - i), i, term.weight))
        return WeightedPolynomial(tuple(terms), self.q)

    def evaluate(self, x: int) -> Fraction:
        total = Fraction(0)
        for term in self.terms:
            weight = self.q ** (term.weight * x) if term.weight else 1
            total += term.coefficient * x**term.power * weight
        return total

    def derivative_at(self, i: int, ctx: PadicContext) -> PadicNumber:
        """``f'(i)``; the ``log q`` of weighted terms is the p-adic logarithm."""
        exact = Fraction(0)
        logarithmic = Fraction(0)
        for term in self.terms:
            weight = self.q ** (term.weight * i) if term.weight else 1
            if term.power:
                exact += term.coefficient * term.power * i ** (term.power - 1) * weight
            if term.weight:
                logarithmic += term.coefficient * term.weight * i**term.power * weight
        result = from_rational(exact, ctx)
        if logarithmic:
            result = result + from_rational(logarithmic, ctx) * plog(from_rational(self.q, ctx))
        return result


# ---------------------------------------------------------------------------
# Level sums
# ---------------------------------------------------------------------------


def _weighted_power_sum(power: int, residue_step: int, size: int, modulus: int) -> int:
    """``sum_{x < size} x^power * R^x mod modulus`` where ``residue_step = R``."""
    total = 0
    weight = 1
    for x in range(size):
        total += pow(x, power, modulus) * weight
        weight = weight * residue_step % modulus
    return total % modulus


def volkenborn_level(
    f: WeightedPolynomial,
    p: int,
    level: int,
    *,
    precision: int = DEFAULT_PRECISION,
    budget: int = DEFAULT_BUDGET,
    allow_large: bool = False,
) -> PadicNumber:
    """``p^-N sum_{x < p^N} f(x)`` as an element of Q_p."""
    size = check_budget(p, level, 1, budget, allow_large)
    ctx = PadicContext(p, precision)
    if f.is_classical:
        total = Fraction(0)
        for term in f.terms:
            total += term.coefficient * sum(x**term.power for x in range(size))
        return from_rational(total / size, ctx)

    working = precision + level
    wide = ctx.with_precision(working)
    modulus = p**working
    base = _rational_residue(f.q, p, modulus)
    result = ctx.zero()
    for term in f.terms:
        step = pow(base, term.weight, modulus)
        partial = _weighted_power_sum(term.power, step, size, modulus)
        value = from_integer(partial, wide, working) / from_rational(size, wide) * from_rational(term.coefficient, wide)
        result = result + value.reencode(ctx)
    return result


def classical_moments(
    r: int,
    n: int,
    x: Fraction | int,
    p: int,
    level: int,
    *,
    precision: int = DEFAULT_PRECISION,
    budget: int = DEFAULT_BUDGET,
    allow_large: bool = False,
) -> PadicNumber:
    """r-fold level sum of ``(x_1 + .. + x_r + x)^n``; tends to ``B_n^(r)(x)``."""
    if r < 1 or n < 0:
        raise ParameterError(f"classical_moments needs r >= 1 and n >= 0, got r={r}, n={n}")
    check_budget(p, level, r, budget, allow_large)
    size = p**level
    # counts[s] = number of points with x_1 + .. + x_r = s
    counts = [1]
    for _ in range(r):
        widened = [0] * (len(counts) + size - 1)
        running = 0
        for s in range(len(widened)):
            if s < len(counts):
                running += counts[s]
            if s >= size:
                running -= counts[s - size]
            widened[s] = running
        counts = widened
    x = Fraction(x)
    total = sum((count * (s + x) ** n for s, count in enumerate(counts)), Fraction(0))
    return from_rational(total / size**r, PadicContext(p, precision))


def changhee_level(
    params: ChangheeParams,
    q: "PadicNumber | Fraction | int",
    p: int,
    level: int,
    *,
    precision: int = DEFAULT_PRECISION,
    budget: int = DEFAULT_BUDGET,
    allow_large: bool = False,
) -> PadicNumber:
    """k-fold level sum of ``q^(b.x) [w + a.x]_q^n``."""
    if params.qw is not None:
        raise ParameterError("level sums need an integer w, not an explicit q^w")
    w = params.integer_w
    k, n = params.k, params.n
    size = check_budget(p, level, k, budget, allow_large)
    q = _as_rational(q, p)
    if q == 1 or (q - 1).numerator % p != 0 or q.denominator % p == 0:
        raise DomainError("level sums need v(q - 1) >= 1 and q != 1", details={"q": q, "p": p})

    working = precision + level * k
    modulus = p**working
    base = _rational_residue(q, p, modulus)

    def bracket(m: int) -> int:
        return sum(pow(base, i, modulus) for i in range(m)) % modulus

    step_a = [pow(base, aj, modulus) for aj in params.a]
    step_b = [pow(base, bj, modulus) for bj in params.b]
    bracket_a = [bracket(aj) for aj in params.a]

    def accumulate(j: int, weight: int, power: int, value: int) -> int:
        # power = q^y and value = [y]_q for the current y = w + a.x
        total = 0
        if j == k - 1:
            for _ in range(size):
                total += weight * pow(value, n, modulus)
                value = (value + power * bracket_a[j]) % modulus
                power = power * step_a[j] % modulus
                weight = weight * step_b[j] % modulus
            return total % modulus
        for _ in range(size):
            total += accumulate(j + 1, weight, power, value)
            value = (value + power * bracket_a[j]) % modulus
            power = power * step_a[j] % modulus
            weight = weight * step_b[j] % modulus
        return total % modulus

    started = time.perf_counter()
    raw = accumulate(0, 1, pow(base, w, modulus), bracket(w))
    logger.debug(
        "changhee level N=%d k=%d summed %d points in %.1f ms",
        level,
        k,
        size**k,
        (time.perf_counter() - started) * 1000,
    )
    wide = PadicContext(p, working)
    value = from_integer(raw, wide, working) / from_rational(Fraction(size) ** k, wide)
    return value.reencode(PadicContext(p, precision))


# ---------------------------------------------------------------------------
# Shift identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftReport:
    """Level-N check of ``I(f_n) = I(f) + sum_{i < n} f'(i)``."""

    shift: int
    level: int
    p: int
    shifted_integral: PadicNumber
    predicted: PadicNumber
    residual: PadicNumber
    distance_exponent: int | float
    exact: bool

    @property
    def norm(self) -> Fraction:
        if self.exact:
            return Fraction(0)
        return Fraction(self.p) ** -int(self.distance_exponent)


def shift_identity_check(
    f: WeightedPolynomial,
    shift: int,
    p: int,
    level: int,
    *,
    precision: int = DEFAULT_PRECISION,
    budget: int = DEFAULT_BUDGET,
    allow_large: bool = False,
) -> ShiftReport:
    if shift < 1:
        raise ParameterError(f"shift must be >= 1, got {shift}")
    ctx = PadicContext(p, precision)
    options = {"precision": precision, "budget": budget, "allow_large": allow_large}
    shifted = volkenborn_level(f.shift(shift), p, level, **options)
    predicted = volkenborn_level(f, p, level, **options)
    for i in range(shift):
        predicted = predicted + f.derivative_at(i, ctx)
    residual = shifted - predicted
    exact = residual.is_zero()
    exponent = residual.precision if exact else residual.valuation
    logger.info("shift %d at level %d: residual %s", shift, level, residual)
    return ShiftReport(shift, level, p, shifted, predicted, residual, exponent, exact)


# ---------------------------------------------------------------------------
# Convergence studies
# ---------------------------------------------------------------------------


class Target(Protocol):
    p: int

    @property
    def dimension(self) -> int: ...

    @property
    def degree(self) -> int: ...

    def level_value(self, level: int, precision: int, budget: int, allow_large: bool) -> PadicNumber: ...

    def closed_value(self, precision: int) -> PadicNumber: ...


@dataclass(frozen=True)
class ClassicalTarget:
    """``B_n^(r)(x)`` against the r-fold moment level sums."""

    n: int
    p: int
    r: int = 1
    x: Fraction = Fraction(0)

    @property
    def dimension(self) -> int:
        return self.r

    @property
    def degree(self) -> int:
        return self.n

    def level_value(self, level: int, precision: int, budget: int, allow_large: bool) -> PadicNumber:
        return classical_moments(
            self.r, self.n, self.x, self.p, level, precision=precision, budget=budget, allow_large=allow_large
        )

    def closed_value(self, precision: int) -> PadicNumber:
        value = bernoulli_series(self.r, self.x, self.n)[self.n]
        return from_rational(value, PadicContext(self.p, precision))


@dataclass(frozen=True)
class ChangheeTarget:
    """The p-adic closed form against the k-fold Changhee level sums."""

    params: ChangheeParams
    q: Fraction
    p: int

    @property
    def dimension(self) -> int:
        return self.params.k

    @property
    def degree(self) -> int:
        return self.params.n

    def level_value(self, level: int, precision: int, budget: int, allow_large: bool) -> PadicNumber:
        return changhee_level(
            self.params, self.q, self.p, level, precision=precision, budget=budget, allow_large=allow_large
        )

    def closed_value(self, precision: int) -> PadicNumber:
        return padic_closed_form(self.params, from_rational(self.q, PadicContext(self.p, precision)))


@dataclass(frozen=True)
class ConvergenceRow:
    """One level of a convergence study.

    ``exact`` rows agree with the closed form at the working precision; their
    ``distance_exponent`` is that precision, a lower bound rather than a
    measured valuation.
    """

    level: int
    distance_exponent: int
    exact: bool
    elapsed_ms: int = 0


@dataclass
class ConvergenceReport:
    p: int
    precision: int
    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def levels(self) -> list[int]:
        return [row.level for row in self.rows]

    @property
    def distances(self) -> list[Fraction]:
        """``|S_N - closed|_p``; 0 for exact rows."""
        return [Fraction(0) if row.exact else Fraction(self.p) ** -row.distance_exponent for row in self.rows]

    @property
    def monotone(self) -> bool:
        exponents = [row.distance_exponent for row in self.rows]
        return all(b >= a for a, b in zip(exponents, exponents[1:]))

    @property
    def strictly_decreasing_somewhere(self) -> bool:
        exponents = [row.distance_exponent for row in self.rows]
        return any(b > a for a, b in zip(exponents, exponents[1:]))

    @property
    def final_distance(self) -> Fraction | None:
        return self.distances[-1] if self.rows else None

    def to_csv_rows(self) -> list[list[str | int]]:
        return [["level", "distance_exponent", "elapsed_ms", "exact"]] + [
            [row.level, row.distance_exponent, row.elapsed_ms, row.exact] for row in self.rows
        ]

    def to_dict(self) -> dict[str, object]:
        return {
            "p": self.p,
            "precision": self.precision,
            "monotone": self.monotone,
            "rows": [
                {
                    "level": row.level,
                    "distance_exponent": row.distance_exponent,
                    "elapsed_ms": row.elapsed_ms,
                    "exact": row.exact,
                }
                for row in self.rows
            ],
        }


def oracle_precision(target: Target, levels: Sequence[int], precision: int, guard_digits: int) -> int:
    return max(precision, max(levels) + target.degree + target.dimension + guard_digits + 6)


def convergence_report(
    target: Target,
    levels: Sequence[int],
    *,
    precision: int = DEFAULT_PRECISION,
    guard_digits: int = DEFAULT_GUARD_DIGITS,
    budget: int = DEFAULT_BUDGET,
    allow_large: bool = False,
    timings: bool = False,
) -> ConvergenceReport:
    """Distances ``|S_N - closed|_p`` for each level N."""
    levels = list(levels)
    if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ParameterError("levels must be a nonempty increasing sequence", details={"levels": levels})
    for level in levels:
        check_budget(target.p, level, target.dimension, budget, allow_large)
    working = oracle_precision(target, levels, precision, guard_digits)
    closed = target.closed_value(working)
    report = ConvergenceReport(target.p, working)
    for level in levels:
        started = time.perf_counter()
        value = target.level_value(level, working, budget, allow_large)
        difference = value - closed
        exact = difference.is_zero()
        exponent = int(difference.precision if exact else difference.valuation)
        elapsed_ms = int((time.perf_counter() - started) * 1000) if timings else 0
        report.rows.append(ConvergenceRow(level, exponent, exact, elapsed_ms))
        suffix = " (exact at working precision)" if exact else ""
        logger.info("level %d: distance exponent %d%s", level, exponent, suffix)
    if not report.monotone:
        logger.warning("distances are not monotone across levels %s", levels)
    return report
