import logging
import tomllib
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .certify import DEFAULT_Q_SAMPLES
from .core import ConfigurationError
from .exactq import QPoint
from .oracle import DEFAULT_BUDGET, DEFAULT_GUARD_DIGITS, DEFAULT_PRECISION
from .series import DEFAULT_ORDER

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(name)s - %(levelname)s - %(message)s"
SECTIONS = ("verify", "series", "oracle", "padic")


@dataclass(frozen=True)
class Settings:
    """Resolved defaults for a run; command-line flags override every field."""

    q_samples: tuple[Fraction, ...] = DEFAULT_Q_SAMPLES
    grid_values: tuple[int, ...] = (1, 2, 3)
    series_order: int = DEFAULT_ORDER
    oracle_budget: int = DEFAULT_BUDGET
    guard_digits: int = DEFAULT_GUARD_DIGITS
    padic_precision: int = DEFAULT_PRECISION
    sections: dict[str, dict[str, Any]] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verify": {
                "q_samples": [str(q) for q in self.q_samples],
                "grid_values": list(self.grid_values),
            },
            "series": {"order": self.series_order},
            "oracle": {"budget": self.oracle_budget, "guard_digits": self.guard_digits},
            "padic": {"precision": self.padic_precision},
        }


def _lowercase_keys(data: dict[str, Any]) -> dict[str, Any]:
    return {str(key).lower(): value for key, value in data.items()}


def _normalize_section(config_data: dict[str, Any], section: str) -> dict[str, Any]:
    section_value = config_data.get(section)
    if section_value is None:
        section_value = config_data.get(section.upper())
    if section_value is None:
        return {}
    if not isinstance(section_value, dict):
        raise ConfigurationError(f"{section} config section must be a table", details={"section": section})
    return _lowercase_keys(section_value)


def _positive_int(section: str, key: str, value: Any, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigurationError(
            f"{section}.{key} must be an integer >= {minimum}",
            details={"section": section, "key": key, "value": value},
        )
    return value


def _q_samples(values: Any) -> tuple[Fraction, ...]:
    if not isinstance(values, list) or not values:
        raise ConfigurationError("verify.q_samples must be a nonempty list", details={"value": values})
    samples = []
    for value in values:
        try:
            samples.append(QPoint.of(str(value)).value)
        except Exception as err:
            raise ConfigurationError(f"invalid q sample {value!r}", details={"value": value}) from err
    return tuple(samples)


def settings_from_mapping(config_data: dict[str, Any]) -> Settings:
    """Build :class:`Settings` from parsed TOML, validating each known key."""
    unknown = {str(key).lower() for key in config_data} - set(SECTIONS)
    if unknown:
        logger.warning("Ignoring unknown config sections: %s", ", ".join(sorted(unknown)))
    verify = _normalize_section(config_data, "verify")
    series = _normalize_section(config_data, "series")
    oracle = _normalize_section(config_data, "oracle")
    padic = _normalize_section(config_data, "padic")

    settings: dict[str, Any] = {}
    if "q_samples" in verify:
        settings["q_samples"] = _q_samples(verify["q_samples"])
    if "grid_values" in verify:
        values = verify["grid_values"]
        if not isinstance(values, list) or not values:
            raise ConfigurationError("verify.grid_values must be a nonempty list", details={"value": values})
        settings["grid_values"] = tuple(_positive_int("verify", "grid_values", v) for v in values)
    if "order" in series:
        settings["series_order"] = _positive_int("series", "order", series["order"])
    if "budget" in oracle:
        settings["oracle_budget"] = _positive_int("oracle", "budget", oracle["budget"])
    if "guard_digits" in oracle:
        settings["guard_digits"] = _positive_int("oracle", "guard_digits", oracle["guard_digits"], minimum=0)
    if "precision" in padic:
        settings["padic_precision"] = _positive_int("padic", "precision", padic["precision"])
    sections = {"verify": verify, "series": series, "oracle": oracle, "padic": padic}
    return Settings(**settings, sections=sections)


def load_settings(path: Path | str | None = None) -> Settings:
    """Load settings from a TOML file; ``None`` gives the built-in defaults."""
    if path is None:
        return Settings()
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigurationError(f"Configuration file not found at {config_path!s}", details={"path": str(path)})
    try:
        with config_path.open("rb") as config_file:
            config_data = tomllib.load(config_file)
    except tomllib.TOMLDecodeError as err:
        raise ConfigurationError(f"Malformed TOML in {config_path!s}: {err}", details={"path": str(path)}) from err
    settings = settings_from_mapping(config_data)
    logger.info("Loaded settings from %s", config_path)
    return settings


def configure_logging(level: int = logging.INFO) -> None:
    """Send log records to stderr in the package format; stdout is left for results."""
    if logging.root.handlers:
        for handler in logging.root.handlers:
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.root.setLevel(level)
    else:
        logging.basicConfig(level=level, format=LOG_FORMAT)
