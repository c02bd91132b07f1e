"""Identity catalog and verification reports.

Scalar identities are written once over a :class:`~qbernoulli.changhee.QField`
and evaluated at rational sample points; certify mode reruns the same code
over :class:`~qbernoulli.certify.DegreeField` to learn how many points make
the check a proof. Formal identities compare truncated series coefficientwise
and report the first differing coefficient.
"""

import itertools
import logging
import time
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any

from .certify import DEFAULT_Q_SAMPLES, DegreeField, certify_points
from .changhee import (
    ChangheeParams,
    ExactField,
    QField,
    addition_value,
    broadcast,
    distribution_value,
    pochhammer_form,
    reduced_closed_form,
    reduced_value,
    unit_family,
)
from .core import ParameterError
from .exactq import QPoint, format_rational, geom_sum, qint_poly
from .series import (
    LaurentSeries,
    PowerSeries,
    barnes_series,
    gaussian_binomial_series,
    geometric_series,
    todd_series,
    u_expand_ratio,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_DIAGNOSTIC = "diagnostic"

MODE_CORRECTED = "corrected"
MODE_PAPER_LITERAL = "paper-literal"
MODE_DIAGNOSTIC = "diagnostic"

KIND_SCALAR = "scalar"
KIND_SAMPLED_SERIES = "sampled-series"
KIND_FORMAL = "formal"


@dataclass(frozen=True, slots=True)
class IdentityCase:
    """One parameter tuple of one identity, with the auxiliaries it uses."""

    params: ChangheeParams
    mode: str
    l: int | None = None
    h: int | None = None
    i: int | None = None
    order: int | None = None

    def to_dict(self) -> dict[str, Any]:
        data = self.params.to_dict()
        for name in ("l", "h", "i"):
            value = getattr(self, name)
            if value is not None:
                data[name] = value
        return data


@dataclass
class IdentityReport:
    identity_id: str
    mode: str
    params: dict[str, Any]
    q_samples: list[str]
    residuals: list[Fraction]
    status: str
    coefficients: list[int | None] = field(default_factory=list)
    certified: bool | None = None
    degree_bound: int | None = None
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    @property
    def failed(self) -> bool:
        return self.status == STATUS_FAIL

    def records(self) -> list[dict[str, Any]]:
        """One JSON-ready record per q sample."""
        records = []
        for index, (q, residual) in enumerate(zip(self.q_samples, self.residuals, strict=True)):
            record: dict[str, Any] = {
                "schema": SCHEMA_VERSION,
                "identity": self.identity_id,
                "mode": self.mode,
                "params": self.params,
                "q": q,
                "residual": format_rational(residual),
                "status": STATUS_PASS if residual == 0 else self.status,
                "elapsed_ms": self.elapsed_ms,
            }
            if self.coefficients:
                record["coefficient"] = self.coefficients[index]
            if self.certified is not None:
                record["certified"] = self.certified
                record["degree_bound"] = self.degree_bound
            records.append(record)
        return records


@dataclass(frozen=True)
class Identity:
    identity_id: str
    title: str
    kind: str
    check: Callable[..., Any]
    modes: tuple[str, ...] = (MODE_CORRECTED,)
    diagnostic_modes: frozenset[str] = frozenset()
    family: str = "general"
    uses_w: bool = True
    aux: tuple[str, ...] = ()
    certifiable: bool = True
    default_order: int | None = None

    @property
    def default_mode(self) -> str:
        return self.modes[0]

    def is_diagnostic(self, mode: str) -> bool:
        return mode in self.diagnostic_modes


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _shifted(params: ChangheeParams) -> tuple[int, ...]:
    if any(bj <= aj for aj, bj in zip(params.a, params.b, strict=True)):
        raise ParameterError(
            "this identity needs b_j > a_j so that b - a stays >= 1",
            details={"a": list(params.a), "b": list(params.b)},
        )
    return tuple(bj - aj for aj, bj in zip(params.a, params.b, strict=True))


def _require_w0(identity_id: str, params: ChangheeParams) -> None:
    if params.w != 0 or params.qw is not None:
        raise ParameterError(f"{identity_id} is stated at w = 0", details={"w": params.w})


def _inverse_qbinomial(field: QField, r: int, k: int) -> Any:
    """``1 / binom(r, k)_q = [k]_q! / ([r]_q .. [r-k+1]_q)``."""
    value = field.const(1)
    for j in range(1, k + 1):
        value = value * field.qint(j)
    for j in range(k):
        value = value * field.inv_qint(r - j)
    return value


def _inverse_qfactorial(field: QField, k: int) -> Any:
    value = field.const(1)
    for j in range(1, k + 1):
        value = value * field.inv_qint(j)
    return value


def _binomial_ratio_form(field: QField, n: int, k: int, top: int, qw: Any) -> Any:
    """``(1/(q-1))^k (1/(1-q))^n sum_r C(n,r) (-q^w)^r binom(r+top,k)/binom(r+top,k)_q k!/[k]_q!``."""
    total = field.const(0)
    inv_fact = _inverse_qfactorial(field, k)
    for r in range(n + 1):
        ratio = field.const(comb(r + top, k) * factorial(k)) * _inverse_qbinomial(field, r + top, k) * inv_fact
        total = total + field.const(comb(n, r) * (-1) ** r) * qw**r * ratio
    return total * ((-1) ** n) * field.inv_qminus1() ** (n + k)


def _first_difference(left: PowerSeries, right: PowerSeries) -> tuple[Fraction, int | None]:
    difference = left - right
    index = difference.first_nonzero()
    if index is None:
        return Fraction(0), None
    return difference[index], index


def _first_laurent_difference(left: LaurentSeries, right: LaurentSeries) -> tuple[Fraction, int | None]:
    difference = left - right
    precision = min(left.precision, right.precision)
    for exponent in range(-difference.pole_order, precision + 1):
        value = difference.coefficient(exponent)
        if value:
            return value, exponent
    return Fraction(0), None


# ---------------------------------------------------------------------------
# Scalar identities
# ---------------------------------------------------------------------------


def _thm2_3(field: QField, case: IdentityCase) -> Any:
    p = case.params
    _require_w0("thm2.3", p)
    shifted = _shifted(p)
    one = field.const(1)
    lhs = reduced_value(field, p.n, p.a, p.b, one)
    rhs = (field.qpow(1) - 1) * reduced_value(field, p.n + 1, p.a, shifted, one) + reduced_value(
        field, p.n, p.a, shifted, one
    )
    return lhs - rhs


def _thm2_4(field: QField, case: IdentityCase) -> Any:
    p = case.params
    _require_w0("thm2.4", p)
    i = case.i if case.i is not None else 1
    if not 1 <= i <= min(3, p.n):
        raise ParameterError(f"thm2.4 needs 1 <= i <= min(3, n), got i={i}, n={p.n}", details={"i": i, "n": p.n})
    one = field.const(1)
    qm1 = field.qpow(1) - 1
    raised = tuple(bj + aj for aj, bj in zip(p.a, p.b, strict=True))
    lhs = field.const(0)
    for j in range(i + 1):
        lhs = lhs + field.const(comb(i, j)) * qm1**j * reduced_value(field, p.n - i + j, p.a, p.b, one)
    rhs = field.const(0)
    for j in range(i):
        rhs = rhs + field.const(comb(i - 1, j)) * qm1**j * reduced_value(field, p.n - i + j, p.a, raised, one)
    return lhs - rhs


def _binomial_moment(field: QField, p: ChangheeParams) -> Any:
    one = field.const(1)
    qm1 = field.qpow(1) - 1
    total = field.const(0)
    for i in range(p.n + 1):
        total = total + field.const(comb(p.n, i)) * qm1**i * reduced_value(field, i, p.a, p.b, one)
    return total


def _thm2_4_special(field: QField, case: IdentityCase) -> Any:
    p = case.params
    _require_w0("thm2.4-special", p)
    if p.k != 1:
        raise ParameterError("thm2.4-special is the k = 1 case", details={"k": p.k})
    c = p.n * p.a[0] + p.b[0]
    return _binomial_moment(field, p) - field.inv_qminus1() * c * field.inv_qint(c)


def _eq2_12(field: QField, case: IdentityCase) -> Any:
    p = case.params
    _require_w0("eq2.12", p)
    rhs = field.inv_qminus1() ** p.k
    for aj, bj in zip(p.a, p.b, strict=True):
        c = p.n * aj + bj
        rhs = rhs * c * field.inv_qint(c)
    return _binomial_moment(field, p) - rhs


def _thm2_5(field: QField, case: IdentityCase) -> Any:
    p = case.params
    shifted = _shifted(p)
    qw = field.qpow(p.integer_w)
    lhs = qw * reduced_value(field, p.n, p.a, p.b, qw) - reduced_value(field, p.n, p.a, shifted, qw)
    rhs = (field.qpow(1) - 1) * reduced_value(field, p.n + 1, p.a, shifted, qw)
    return lhs - rhs


def _eq2_8(field: QField, case: IdentityCase) -> Any:
    p = case.params
    w = p.integer_w
    return reduced_value(field, p.n, p.a, p.b, field.qpow(w)) - addition_value(field, p.n, p.a, p.b, w)


def _cor2_2(field: QField, case: IdentityCase) -> Any:
    p = case.params
    qw = field.qpow(p.integer_w)
    direct = reduced_value(field, p.n, p.a, p.b, qw)
    return direct - _binomial_ratio_form(field, p.n, p.k, p.k, qw)


def _thm2_6(field: QField, case: IdentityCase) -> Any:
    p = case.params
    h = case.h if case.h is not None else p.k
    qw = field.qpow(p.integer_w)
    direct = reduced_value(field, p.n, p.a, p.b, qw)
    return direct - _binomial_ratio_form(field, p.n, p.k, h, qw)


def _eq2_15(field: QField, case: IdentityCase) -> Any:
    if not isinstance(field, ExactField):
        raise ParameterError("eq2.15-pochhammer is evaluated at rational points only")
    p = case.params
    h = case.h if case.h is not None else p.k
    return reduced_closed_form(p, field.q) - pochhammer_form(p.n, p.k, h, p.integer_w, field.q)


def _eq2_9(field: QField, case: IdentityCase) -> Any:
    p = case.params
    w = p.integer_w
    l = case.l if case.l is not None else 2
    direct = reduced_value(field, p.n, p.a, p.b, field.qpow(w))
    return direct - distribution_value(field, p.n, p.a, p.b, w, l, case.mode)


def _remark2_18(field: QField, case: IdentityCase) -> Any:
    p = case.params
    h = case.h if case.h is not None else p.k
    w = p.integer_w
    k, n = p.k, p.n
    ones = (1,) * (k - 1)
    lower = tuple(h - 1 - j for j in range(k - 1))
    upper = tuple(h - j for j in range(k - 1))
    qw = field.qpow(w)
    lhs = field.qpow(h) * reduced_value(field, n, p.a, p.b, field.qpow(w + 1))
    rhs = field.const(h) * (1 - field.qpow(1)) * reduced_value(field, n, ones, lower, qw)
    if n >= 1:
        rhs = rhs - field.const(n) * reduced_value(field, n - 1, ones, upper, qw)
    rhs = rhs + reduced_value(field, n, p.a, p.b, qw)
    return lhs - rhs


def _carlitz_moment(j: int, q: QPoint) -> Fraction:
    """``sum_{m >= 0} q^m [m]_q^j`` resummed exactly (``[0]^0 = 1``)."""
    total = sum((comb(j, s) * (-1) ** s * geom_sum(s + 1, q) for s in range(j + 1)), Fraction(0))
    return total / (1 - q.value) ** j


def _carlitz(field: QField, case: IdentityCase) -> Any:
    if not isinstance(field, ExactField):
        raise ParameterError("carlitz-series is evaluated at rational points only")
    p = case.params
    q = field.q
    n = p.n
    rhs = -_carlitz_moment(n, q)
    if n >= 1:
        rhs += n / (1 - q.value) * _carlitz_moment(n - 1, q)
    return reduced_closed_form(p, q) - rhs


# ---------------------------------------------------------------------------
# Series identities
# ---------------------------------------------------------------------------


def _genfunc(case: IdentityCase, q: QPoint) -> tuple[Fraction, int | None]:
    """Both lines of the generating function with ``(log q / (q-1))^k`` divided out."""
    p = case.params
    order = case.order if case.order is not None else 8
    w = p.integer_w
    qv = q.value
    lhs = [
        (qv - 1) ** (m + p.k) * reduced_closed_form(p.with_(n=m), q) / factorial(m) for m in range(order + 1)
    ]
    field = ExactField(q)
    weights = []
    for i in range(order + 1):
        c = Fraction(1)
        for aj, bj in zip(p.a, p.b, strict=True):
            c *= (i * aj + bj) * field.inv_qint(i * aj + bj)
        weights.append(c * qv ** (w * i) / factorial(i))
    rhs = PowerSeries.exp(-1, order) * PowerSeries.from_coefficients(weights, order)
    return _first_difference(PowerSeries.from_coefficients(lhs, order), rhs)


def _thm2_7(case: IdentityCase, _q: Any = None) -> tuple[Fraction, int | None]:
    p = case.params
    h = case.h if case.h is not None else p.k
    n, k, w = p.n, p.k, p.integer_w
    order = case.order if case.order is not None else 30
    step = h - k + 1
    inv_one_minus_q = geometric_series(1, order)

    lhs = PowerSeries.zero(order, "q")
    for r in range(n + 1):
        term = PowerSeries.monomial(comb(n, r) * (-1) ** r, w * r, order, "q")
        for bj in p.b:
            c = r + bj
            bracket = PowerSeries.from_coefficients(qint_poly(c), order=order, variable="q")
            term = term * bracket.invert() * c
        lhs = lhs + term
    lhs = lhs * inv_one_minus_q ** (n + k) * (-1) ** k

    sign_offset = k if case.mode == MODE_CORRECTED else h
    rhs = PowerSeries.zero(order, "q")
    for m in range(order // step + 1):
        inner = PowerSeries.zero(order, "q")
        for r in range(n + 1):
            coefficient = comb(n, r) * comb(r + h, k) * (-1) ** (r + sign_offset)
            inner = inner + PowerSeries.monomial(coefficient, (m + w) * r, order, "q")
        gaussian = gaussian_binomial_series(m + k - 1, m, order)
        rhs = rhs + (gaussian * inner).shift(m * step)
    rhs = rhs * inv_one_minus_q**n * factorial(k)
    return _first_difference(lhs, rhs)


def _eq2_5(case: IdentityCase, _q: Any = None) -> tuple[Fraction, int | None]:
    """Barnes generating function at ``t = log q`` as Laurent series in ``L = log q``."""
    p = case.params
    r, x, k = p.n, p.integer_w, p.k
    order = case.order if case.order is not None else 16
    weights = [r + j for j in range(1, k + 1)]
    body = PowerSeries.exp(r * x, order, "L")
    for wj in weights:
        body = body * todd_series(Fraction(wj), order, "L")
    lhs = LaurentSeries(k, body)
    values = barnes_series(k, r * x, weights, order)
    expansion = PowerSeries.from_coefficients(
        [value / factorial(s) for s, value in enumerate(values)], order=order, variable="L"
    )
    rhs = LaurentSeries(k if case.mode == MODE_CORRECTED else 0, expansion)
    return _first_laurent_difference(lhs, rhs)


def _limit_f(case: IdentityCase, _q: Any = None) -> tuple[Fraction, int | None]:
    """Termwise ``q -> 1`` limit of the generating function against the printed Barnes factor."""
    p = case.params
    order = case.order if case.order is not None else 8
    weights = []
    for i in range(order + 1):
        c = Fraction(1)
        for aj, bj in zip(p.a, p.b, strict=True):
            c *= u_expand_ratio(i * aj + bj, 0)[0]
        weights.append(c / factorial(i))
    lhs = PowerSeries.exp(-1, order) * PowerSeries.from_coefficients(weights, order)
    rhs = PowerSeries.constant(1, order)
    for aj in p.a:
        rhs = rhs * todd_series(Fraction(aj), order)
    return _first_difference(lhs, rhs)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_DIAGNOSTIC = frozenset({MODE_DIAGNOSTIC})
_LITERAL = frozenset({MODE_PAPER_LITERAL})

CATALOG: dict[str, Identity] = {
    entry.identity_id: entry
    for entry in (
        Identity("thm2.3", "b-shift recurrence at w = 0", KIND_SCALAR, _thm2_3, family="shifted", uses_w=False),
        Identity("thm2.4", "i-fold b-shift recurrence at w = 0", KIND_SCALAR, _thm2_4, uses_w=False, aux=("i",)),
        Identity("thm2.4-special", "k = 1 binomial moment", KIND_SCALAR, _thm2_4_special, family="k1", uses_w=False),
        Identity("thm2.5", "q^w shift relation", KIND_SCALAR, _thm2_5, family="shifted"),
        Identity("eq2.12", "binomial moment in closed form", KIND_SCALAR, _eq2_12, uses_w=False),
        Identity("eq2.8-addition", "addition theorem in w", KIND_SCALAR, _eq2_8),
        Identity("cor2.2", "b = 1..k via Gaussian binomials", KIND_SCALAR, _cor2_2, family="staircase"),
        Identity("thm2.6", "b = h..h-k+1 via Gaussian binomials", KIND_SCALAR, _thm2_6, family="unit", aux=("h",)),
        Identity(
            "eq2.15-pochhammer",
            "b = h..h-k+1 via q-Pochhammer symbols",
            KIND_SCALAR,
            _eq2_15,
            family="unit",
            aux=("h",),
            certifiable=False,
        ),
        Identity(
            "eq2.9-distribution",
            "distribution relation over q^l",
            KIND_SCALAR,
            _eq2_9,
            modes=(MODE_CORRECTED, MODE_PAPER_LITERAL),
            diagnostic_modes=_LITERAL,
            aux=("l",),
        ),
        Identity(
            "eq2.10-genfunc",
            "generating function, both lines",
            KIND_SAMPLED_SERIES,
            _genfunc,
            family="genfunc",
            certifiable=False,
            default_order=8,
        ),
        Identity(
            "thm2.7-series",
            "b = h..h-k+1 as a power series in q",
            KIND_FORMAL,
            _thm2_7,
            modes=(MODE_CORRECTED, MODE_PAPER_LITERAL),
            diagnostic_modes=_LITERAL,
            family="unit",
            aux=("h",),
            certifiable=False,
            default_order=30,
        ),
        Identity(
            "eq2.5-logq",
            "Barnes generating function at t = log q",
            KIND_FORMAL,
            _eq2_5,
            modes=(MODE_CORRECTED, MODE_PAPER_LITERAL),
            diagnostic_modes=_LITERAL,
            family="staircase",
            certifiable=False,
            default_order=16,
        ),
        Identity(
            "carlitz-series",
            "k = 1 value as resummed q-series",
            KIND_SCALAR,
            _carlitz,
            modes=(MODE_DIAGNOSTIC,),
            diagnostic_modes=_DIAGNOSTIC,
            family="carlitz",
            uses_w=False,
            certifiable=False,
        ),
        Identity(
            "remark2.18",
            "w + 1 shift with q^h",
            KIND_SCALAR,
            _remark2_18,
            modes=(MODE_DIAGNOSTIC,),
            diagnostic_modes=_DIAGNOSTIC,
            family="unit",
            aux=("h",),
            certifiable=False,
        ),
        Identity(
            "limit-q1-F",
            "q -> 1 limit of the generating function",
            KIND_FORMAL,
            _limit_f,
            modes=(MODE_DIAGNOSTIC,),
            diagnostic_modes=_DIAGNOSTIC,
            family="genfunc",
            uses_w=False,
            certifiable=False,
            default_order=8,
        ),
    )
}

ALIASES = {"eq2.11": "thm2.5"}


def catalog() -> list[Identity]:
    return list(CATALOG.values())


def get_identity(identity_id: str) -> Identity:
    identity = CATALOG.get(ALIASES.get(identity_id, identity_id))
    if identity is None:
        raise ParameterError(
            f"unknown identity {identity_id!r}",
            details={"known": sorted([*CATALOG, *ALIASES])},
        )
    return identity


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _family_params(identity: Identity, params: ChangheeParams, h: int | None) -> ChangheeParams:
    if identity.family == "unit":
        return unit_family(params.n, params.k, h if h is not None else params.k, params.w)
    if identity.family == "staircase":
        return ChangheeParams(params.n, params.k, (1,) * params.k, tuple(range(1, params.k + 1)), params.w)
    if identity.family == "carlitz":
        return ChangheeParams(params.n, 1, (1,), (1,), 0)
    return params


def build_case(
    identity: Identity,
    params: ChangheeParams,
    *,
    mode: str | None = None,
    l: int | None = None,
    h: int | None = None,
    i: int | None = None,
    order: int | None = None,
) -> IdentityCase:
    mode = mode or identity.default_mode
    if mode not in identity.modes:
        raise ParameterError(
            f"{identity.identity_id} does not support mode {mode!r}",
            details={"modes": list(identity.modes)},
        )
    if identity.family in ("unit",) and h is None:
        h = params.k
    if "l" in identity.aux and l is None:
        l = 2
    if "i" in identity.aux and i is None:
        i = 1
    return IdentityCase(
        params=_family_params(identity, params, h),
        mode=mode,
        l=l if "l" in identity.aux else None,
        h=h if "h" in identity.aux else None,
        i=i if "i" in identity.aux else None,
        order=order if order is not None else identity.default_order,
    )


def _status(identity: Identity, mode: str, residuals: Sequence[Fraction]) -> str:
    if all(residual == 0 for residual in residuals):
        return STATUS_PASS
    if identity.is_diagnostic(mode):
        return STATUS_DIAGNOSTIC
    return STATUS_FAIL


def evaluate_case(
    identity: Identity,
    case: IdentityCase,
    q_samples: Sequence[Fraction] | None = None,
    *,
    certify: bool = False,
    timings: bool = False,
) -> IdentityReport:
    """Run one identity on one parameter tuple."""
    started = time.perf_counter()
    samples = [QPoint.of(q) for q in (q_samples or DEFAULT_Q_SAMPLES)]
    coefficients: list[int | None] = []
    certified: bool | None = None
    degree_bound: int | None = None

    if identity.kind == KIND_FORMAL:
        residual, coefficient = identity.check(case, None)
        labels = ["formal"]
        residuals = [residual]
        coefficients = [coefficient]
    elif identity.kind == KIND_SAMPLED_SERIES:
        labels, residuals = [], []
        for q in samples:
            residual, coefficient = identity.check(case, q)
            labels.append(str(q))
            residuals.append(residual)
            coefficients.append(coefficient)
    else:
        if certify and identity.certifiable:
            degree_bound = identity.check(DegreeField(), case).num_degree
            samples = [QPoint(q) for q in certify_points(max(len(samples), degree_bound + 1))]
        labels = [str(q) for q in samples]
        residuals = [identity.check(ExactField(q), case) for q in samples]
        for q, residual in zip(labels, residuals, strict=True):
            logger.debug("%s %s q=%s residual=%s", identity.identity_id, case.to_dict(), q, residual)

    status = _status(identity, case.mode, residuals)
    if degree_bound is not None:
        certified = status == STATUS_PASS
    if status == STATUS_DIAGNOSTIC:
        logger.warning("%s (%s) residual is nonzero for %s", identity.identity_id, case.mode, case.to_dict())
    elif status == STATUS_FAIL:
        logger.error("%s (%s) failed for %s", identity.identity_id, case.mode, case.to_dict())

    elapsed_ms = int((time.perf_counter() - started) * 1000) if timings else 0
    return IdentityReport(
        identity_id=identity.identity_id,
        mode=case.mode,
        params=case.to_dict(),
        q_samples=labels,
        residuals=residuals,
        status=status,
        coefficients=coefficients,
        certified=certified,
        degree_bound=degree_bound,
        elapsed_ms=elapsed_ms,
    )


def verify_identity(
    identity_id: str,
    params: ChangheeParams,
    q_samples: Sequence[QPoint | Fraction | int | str] | None = None,
    *,
    mode: str | None = None,
    l: int | None = None,
    h: int | None = None,
    i: int | None = None,
    certify: bool = False,
    order: int | None = None,
    timings: bool = False,
) -> IdentityReport:
    """Check one catalog identity at ``params`` over the q samples."""
    identity = get_identity(identity_id)
    case = build_case(identity, params, mode=mode, l=l, h=h, i=i, order=order)
    samples = [QPoint.of(q).value for q in q_samples] if q_samples else None
    return evaluate_case(identity, case, samples, certify=certify, timings=timings)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterGrid:
    """The parameter sweep of a verification suite.

    ``a`` and ``b`` fix the weight vectors (broadcast to each k); when absent
    every tuple over ``values`` is used.
    """

    n_values: tuple[int, ...] = tuple(range(7))
    k_values: tuple[int, ...] = (1, 2, 3)
    values: tuple[int, ...] = (1, 2, 3)
    w_values: tuple[int, ...] = (0, 1, 2)
    a: tuple[int, ...] | None = None
    b: tuple[int, ...] | None = None
    h_values: tuple[int, ...] | None = None
    l_values: tuple[int, ...] = (1, 2, 3)
    i_values: tuple[int, ...] | None = None

    def _vectors(self, fixed: tuple[int, ...] | None, k: int, name: str) -> Iterable[tuple[int, ...]]:
        if fixed is not None:
            return [broadcast(fixed, k, name)]
        return itertools.product(self.values, repeat=k)

    def cases(self, identity: Identity, mode: str | None = None, order: int | None = None) -> Iterator[IdentityCase]:
        mode = mode or identity.default_mode
        w_values = self.w_values if identity.uses_w else (0,)
        n_values = (0,) if identity.family == "genfunc" else self.n_values
        for k in self.k_values:
            if identity.family in ("k1", "carlitz") and k != 1:
                continue
            for n in n_values:
                for w in w_values:
                    for base in self._base_params(identity, n, k, w):
                        yield from self._with_aux(identity, base, mode, order)

    def _base_params(self, identity: Identity, n: int, k: int, w: int) -> Iterator[ChangheeParams]:
        if identity.family in ("unit", "staircase", "carlitz"):
            yield ChangheeParams(n, k, (1,) * k, (1,) * k, w)
            return
        for a in self._vectors(self.a, k, "a"):
            for b in self._vectors(self.b, k, "b"):
                if identity.family == "shifted" and any(bj <= aj for aj, bj in zip(a, b, strict=True)):
                    continue
                yield ChangheeParams(n, k, a, b, w)

    def _with_aux(
        self, identity: Identity, params: ChangheeParams, mode: str, order: int | None
    ) -> Iterator[IdentityCase]:
        if "h" in identity.aux:
            h_values = self.h_values or tuple(range(params.k, params.k + 3))
            for h in h_values:
                if h >= params.k:
                    yield build_case(identity, params, mode=mode, h=h, order=order)
        elif "l" in identity.aux:
            for l in self.l_values:
                yield build_case(identity, params, mode=mode, l=l, order=order)
        elif "i" in identity.aux:
            i_values = self.i_values or (1, 2, 3)
            for i in i_values:
                if 1 <= i <= min(3, params.n):
                    yield build_case(identity, params, mode=mode, i=i, order=order)
        else:
            yield build_case(identity, params, mode=mode, order=order)


def resolve_identity_ids(selection: str | Iterable[str]) -> list[str]:
    """``"all"`` expands to the whole catalog; aliases resolve to their entry."""
    if isinstance(selection, str):
        selection = [part.strip() for part in selection.split(",") if part.strip()]
    resolved: list[str] = []
    for identity_id in selection:
        if identity_id == "all":
            resolved.extend(CATALOG)
        else:
            resolved.append(get_identity(identity_id).identity_id)
    return list(dict.fromkeys(resolved))


def _run_task(task: tuple[str, IdentityCase, tuple[Fraction, ...] | None, bool, bool]) -> IdentityReport:
    identity_id, case, q_samples, certify, timings = task
    return evaluate_case(CATALOG[identity_id], case, q_samples, certify=certify, timings=timings)


def verify_suite(
    identity_ids: str | Iterable[str],
    grid: ParameterGrid | None = None,
    q_samples: Sequence[Fraction] | None = None,
    *,
    mode: str | None = None,
    certify: bool = False,
    order: int | None = None,
    jobs: int = 1,
    timings: bool = False,
) -> list[IdentityReport]:
    """Run identities over a grid; reports come back in parameter order."""
    grid = grid or ParameterGrid()
    samples = tuple(q_samples) if q_samples else None
    tasks = []
    for identity_id in resolve_identity_ids(identity_ids):
        identity = CATALOG[identity_id]
        identity_mode = mode if mode in identity.modes else None
        for case in grid.cases(identity, identity_mode, order):
            tasks.append((identity_id, case, samples, certify, timings))
    logger.info("Verifying %d parameter tuples with %d job(s)", len(tasks), jobs)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        reports = [_run_task(task) for task in tasks]
    failures = sum(report.failed for report in reports)
    logger.info("Suite finished: %d reports, %d failure(s)", len(reports), failures)
    return reports
