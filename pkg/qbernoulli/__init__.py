"""Exact arithmetic for the Changhee q-Bernoulli polynomials."""

from importlib.metadata import PackageNotFoundError, version

from .changhee import ChangheeParams, padic_closed_form, q_limit, reduced_closed_form
from .config import Settings, load_settings
from .core import (
    BudgetExceededError,
    ConfigurationError,
    DomainError,
    IdentityFailure,
    ParameterError,
    QBernoulliError,
    SeriesError,
)
from .exactq import QPoint
from .identities import IdentityReport, verify_identity, verify_suite
from .oracle import WeightedPolynomial, changhee_level, convergence_report, volkenborn_level
from .padic import PadicContext, PadicNumber

try:
    __version__ = version("qbernoulli")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "BudgetExceededError",
    "ChangheeParams",
    "ConfigurationError",
    "DomainError",
    "IdentityFailure",
    "IdentityReport",
    "PadicContext",
    "PadicNumber",
    "ParameterError",
    "QBernoulliError",
    "QPoint",
    "SeriesError",
    "Settings",
    "WeightedPolynomial",
    "changhee_level",
    "convergence_report",
    "load_settings",
    "padic_closed_form",
    "q_limit",
    "reduced_closed_form",
    "verify_identity",
    "verify_suite",
    "volkenborn_level",
]
