"""Command-line front end.

``qbernoulli compute`` tabulates closed-form values, ``verify`` runs the
identity catalog, ``oracle`` runs brute-force convergence studies and
``limit`` compares q -> 1 limits with Barnes polynomials. Results go to
stdout (or ``--out``) as JSON Lines or CSV; logs and error payloads go to
stderr.

Exit codes: 0 success, 1 identity failure, 2 usage error, 3 budget exceeded.
"""

import argparse
import csv
import io
import json
import logging
import shlex
import sys
from collections.abc import Callable, Iterable, Sequence
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

from .changhee import ChangheeParams, padic_closed_form, q_limit, reduced_closed_form
from .config import Settings, configure_logging, load_settings
from .config_checksum import compute_config_checksum
from .core import EXIT_OK, IdentityFailure, ParameterError, QBernoulliError, handle_error
from .exactq import QPoint, format_rational, parse_int_range, parse_rational, parse_rational_list
from .identities import SCHEMA_VERSION, ParameterGrid, catalog, get_identity, resolve_identity_ids, verify_suite
from .oracle import (
    ChangheeTarget,
    ClassicalTarget,
    WeightedPolynomial,
    check_budget,
    convergence_report,
    shift_identity_check,
)
from .padic import PadicContext, from_rational, valuation
from .series import barnes_series

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")

COMPUTE_COLUMNS = ["n", "k", "a", "b", "w", "q", "beta"]
VERIFY_COLUMNS = ["identity", "mode", "params", "q", "residual", "status", "elapsed_ms"]
ORACLE_COLUMNS = ["level", "distance_exponent", "elapsed_ms", "exact"]
LIMIT_COLUMNS = ["n", "k", "a", "b", "w", "limit", "barnes_reference", "equal"]


@dataclass(frozen=True)
class RunConfig:
    """A parsed invocation. ``to_flags()`` renders the canonical command line."""

    command: str
    format: str = "json"
    out: str | None = None
    timings: bool = False
    config: str | None = None
    n: tuple[int, ...] | None = None
    k: tuple[int, ...] | None = None
    a: tuple[int, ...] | None = None
    b: tuple[int, ...] | None = None
    w: tuple[int, ...] | None = None
    l: tuple[int, ...] | None = None
    h: tuple[int, ...] | None = None
    i: tuple[int, ...] | None = None
    values: tuple[int, ...] | None = None
    q: tuple[Fraction, ...] | None = None
    p: int | None = None
    levels: tuple[int, ...] | None = None
    precision: int | None = None
    order: int | None = None
    padic: int | None = None
    identity: str | None = None
    mode: str | None = None
    certify: bool = False
    jobs: int | None = None
    list_catalog: bool = False
    target: str | None = None
    shift: int | None = None
    r: int | None = None
    x: Fraction | None = None
    allow_large: bool = False

    def to_flags(self) -> str:
        words: list[str] = ["--format", self.format]
        if self.out is not None:
            words += ["--out", self.out]
        if self.timings:
            words.append("--timings")
        if self.config is not None:
            words += ["--config", self.config]
        words.append(self.command)
        for spec in fields(self):
            if spec.name in _GLOBAL_FIELDS or spec.name in ("command", "target", "shift"):
                continue
            value = getattr(self, spec.name)
            if value is None or value is False:
                continue
            flag = _FLAG_NAMES.get(spec.name, "--" + spec.name.replace("_", "-"))
            if value is True:
                words.append(flag)
            else:
                words.append(f"{flag}={_render(value)}")
        if self.target == "shift":
            words.append(f"--shift={self.shift}")
        elif self.target is not None:
            words.append("--" + self.target)
        return shlex.join(words)

    def to_dict(self) -> dict[str, Any]:
        return {key: value for key, value in asdict(self).items() if value is not None and value is not False}


_GLOBAL_FIELDS = ("format", "out", "timings", "config")
_FLAG_NAMES = {"list_catalog": "--list"}


def _render(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(_render(v) for v in value)
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _argument(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    """Adapt a codec function so argparse reports its errors as usage errors."""

    def convert(text: str) -> Any:
        try:
            return parse(text)
        except ParameterError as err:
            raise argparse.ArgumentTypeError(err.message) from err

    convert.__name__ = parse.__name__
    return convert


_ints = _argument(parse_int_range)
_rationals = _argument(parse_rational_list)
_rational = _argument(parse_rational)


def _add_params(parser: argparse.ArgumentParser, *, lists: bool = True) -> None:
    parser.add_argument("--n", type=_ints, help="degree n: value, comma list or lo..hi")
    parser.add_argument("--k", type=_ints, help="order k")
    parser.add_argument("--a", type=_ints, help="a_1..a_k (a single value is broadcast)")
    parser.add_argument("--b", type=_ints, help="b_1..b_k (a single value is broadcast)")
    parser.add_argument("--w", type=_ints, help="shift w")
    if lists:
        parser.add_argument("--q", type=_rationals, help="q samples as rationals, e.g. 2,1/2,5/3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbernoulli",
        description="Exact computation and verification of Changhee q-Bernoulli polynomials.",
    )
    parser.add_argument("--config", help="TOML settings file")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    parser.add_argument("--format", choices=FORMATS, default="json", help="output format (default: json)")
    parser.add_argument("--out", help="write results to this file instead of stdout")
    parser.add_argument("--timings", action="store_true", help="record elapsed_ms (otherwise 0)")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="tabulate reduced closed-form values")
    _add_params(compute)
    compute.add_argument("--padic", type=int, metavar="P", help="add the p-adic closed form over Q_P")
    compute.add_argument("--precision", type=int, help="p-adic precision M")

    verify = commands.add_parser("verify", help="run identity checks")
    verify.add_argument("--identity", help="catalog id, comma list, or 'all'")
    verify.add_argument("--mode", help="corrected, paper-literal or diagnostic")
    verify.add_argument("--list", dest="list_catalog", action="store_true", help="print the identity catalog")
    verify.add_argument("--certify", action="store_true", help="sample at enough points to prove the identity")
    verify.add_argument("--jobs", type=int, help="worker processes")
    verify.add_argument("--max-n", type=int, help="shorthand for --n 0..MAX_N")
    verify.add_argument("--max-k", type=int, help="shorthand for --k 1..MAX_K")
    verify.add_argument("--values", type=_ints, help="a_j and b_j values to sweep when --a/--b are absent")
    verify.add_argument("--order", type=int, help="series truncation order")
    verify.add_argument("--l", type=_ints, help="distribution base exponents")
    verify.add_argument("--h", type=_ints, help="h values for the unit-a family")
    verify.add_argument("--i", type=_ints, help="shift counts for thm2.4")
    _add_params(verify)

    oracle = commands.add_parser("oracle", help="brute-force convergence of level sums")
    target = oracle.add_mutually_exclusive_group(required=True)
    target.add_argument("--classical", dest="target", action="store_const", const="classical")
    target.add_argument("--changhee", dest="target", action="store_const", const="changhee")
    target.add_argument("--shift", type=int, help="check I(f_s) = I(f) + sum f'(i) for f(x) = x^n")
    _add_params(oracle)
    oracle.add_argument("--p", type=int, required=True, help="odd prime p")
    oracle.add_argument("--levels", type=_ints, required=True, help="levels N, e.g. 2..5")
    oracle.add_argument("--precision", type=int, help="p-adic precision M")
    oracle.add_argument("--r", type=int, help="number of variables for --classical")
    oracle.add_argument("--x", type=_rational, help="shift x for --classical")
    oracle.add_argument("--allow-large", action="store_true", help="ignore the level-sum budget")

    limit = commands.add_parser("limit", help="q -> 1 limits against Barnes polynomials")
    _add_params(limit, lists=False)
    limit.add_argument("--order", type=int, help="series truncation order")
    return parser


def _single(values: tuple[int, ...] | None, name: str, default: int) -> int:
    if values is None:
        return default
    if len(values) != 1:
        raise ParameterError(f"--{name} takes a single value here", details={name: list(values)})
    return values[0]


def _from_namespace(ns: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    for spec in fields(RunConfig):
        value = getattr(ns, spec.name, None)
        if isinstance(value, list):
            value = tuple(value)
        if value is not None:
            values[spec.name] = value
    if getattr(ns, "max_n", None) is not None:
        if ns.n is not None:
            raise ParameterError("--n and --max-n are mutually exclusive")
        values["n"] = tuple(range(ns.max_n + 1))
    if getattr(ns, "max_k", None) is not None:
        if ns.k is not None:
            raise ParameterError("--k and --max-k are mutually exclusive")
        values["k"] = tuple(range(1, ns.max_k + 1))
    if getattr(ns, "shift", None) is not None:
        values["target"] = "shift"
    return RunConfig(**values)


def parse_run_config(argv: Sequence[str]) -> tuple[RunConfig, argparse.Namespace]:
    ns = build_parser().parse_args(list(argv))
    return _from_namespace(ns), ns


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list | tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return str(value)


def render(records: Iterable[dict[str, Any]], fmt: str, columns: Sequence[str]) -> str:
    """JSON Lines (one object per record) or CSV with a fixed header."""
    if fmt == "json":
        return "".join(json.dumps(record) + "\n" for record in records)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([_csv_cell(record.get(column)) for column in columns])
    return buffer.getvalue()


def _write(config: RunConfig, records: list[dict[str, Any]], columns: Sequence[str]) -> None:
    text = render(records, config.format, columns)
    if config.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(config.out).write_text(text)
        logger.info("Wrote %d record(s) to %s", len(records), config.out)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _checksum(config: RunConfig, settings: Settings) -> str:
    flags = {key: value for key, value in config.to_dict().items() if key not in ("out", "config")}
    return compute_config_checksum(config.command, flags, settings.to_dict())


def _padic_column(params: ChangheeParams, q: Fraction, p: int, precision: int) -> str | None:
    if q.denominator % p == 0 or valuation(q - 1, p) < 1:
        return None
    ctx = PadicContext(p, precision)
    return padic_closed_form(params, from_rational(q, ctx)).to_text()


def cmd_compute(config: RunConfig, settings: Settings) -> int:
    checksum = _checksum(config, settings)
    samples = config.q or settings.q_samples
    precision = config.precision or settings.padic_precision
    columns = COMPUTE_COLUMNS + (["padic"] if config.padic is not None else [])
    records = []
    for n in config.n or (0,):
        for k in config.k or (1,):
            for w in config.w or (0,):
                params = ChangheeParams.build(n, k, config.a or 1, config.b or 1, w)
                for q in samples:
                    record: dict[str, Any] = {
                        "n": n,
                        "k": k,
                        "a": list(params.a),
                        "b": list(params.b),
                        "w": w,
                        "q": format_rational(q),
                        "beta": format_rational(reduced_closed_form(params, QPoint.of(q))),
                    }
                    if config.padic is not None:
                        record["padic"] = _padic_column(params, Fraction(q), config.padic, precision)
                    record["checksum"] = checksum
                    records.append(record)
    logger.info("compute produced %d row(s), checksum %s", len(records), checksum)
    _write(config, records, columns)
    return EXIT_OK


def _catalog_records() -> list[dict[str, Any]]:
    return [
        {
            "identity": entry.identity_id,
            "title": entry.title,
            "kind": entry.kind,
            "modes": list(entry.modes),
            "diagnostic_modes": sorted(entry.diagnostic_modes),
        }
        for entry in catalog()
    ]


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    if config.list_catalog:
        _write(config, _catalog_records(), ["identity", "title", "kind", "modes", "diagnostic_modes"])
        return EXIT_OK
    if config.identity is None:
        raise ParameterError("verify needs --identity (or --list)")
    identity_ids = resolve_identity_ids(config.identity)
    if config.mode is not None and config.identity != "all":
        for identity_id in identity_ids:
            identity = get_identity(identity_id)
            if config.mode not in identity.modes:
                raise ParameterError(
                    f"{identity_id} does not support mode {config.mode!r}",
                    details={"modes": list(identity.modes)},
                )
    defaults = ParameterGrid()
    grid = ParameterGrid(
        n_values=config.n or defaults.n_values,
        k_values=config.k or defaults.k_values,
        values=config.values or settings.grid_values,
        w_values=config.w or defaults.w_values,
        a=config.a,
        b=config.b,
        h_values=config.h,
        l_values=config.l or defaults.l_values,
        i_values=config.i,
    )
    reports = verify_suite(
        identity_ids,
        grid,
        config.q or settings.q_samples,
        mode=config.mode,
        certify=config.certify,
        order=config.order,
        jobs=config.jobs or 1,
        timings=config.timings,
    )
    records = [record for report in reports for record in report.records()]
    _write(config, records, VERIFY_COLUMNS)
    failures = sum(report.failed for report in reports)
    if failures:
        raise IdentityFailure(f"{failures} identity check(s) failed", failures=failures)
    return EXIT_OK


def _oracle_rows(config: RunConfig, settings: Settings) -> tuple[str, int, list[dict[str, Any]]]:
    p = config.p
    if p is None:
        raise ParameterError("oracle needs --p")
    levels = list(config.levels or ())
    n = _single(config.n, "n", 1)
    precision = config.precision or settings.padic_precision
    options = {"budget": settings.oracle_budget, "allow_large": config.allow_large}

    if config.target == "shift":
        if config.shift is None or config.shift < 1:
            raise ParameterError("--shift must be >= 1", details={"shift": config.shift})
        for level in levels:
            check_budget(p, level, 1, **options)
        working = max(precision, max(levels) + n + settings.guard_digits + 7)
        rows = []
        f = WeightedPolynomial.monomial(n)
        for level in levels:
            report = shift_identity_check(f, config.shift, p, level, precision=working, **options)
            rows.append(
                {
                    "level": level,
                    "distance_exponent": int(report.distance_exponent),
                    "elapsed_ms": 0,
                    "exact": report.exact,
                }
            )
        return f"shift x^{n} by {config.shift}", working, rows

    if config.target == "classical":
        target: ClassicalTarget | ChangheeTarget = ClassicalTarget(
            n, p, r=config.r or 1, x=config.x if config.x is not None else Fraction(0)
        )
        label = f"classical B_{n}^({target.r})({format_rational(target.x)})"
    else:
        k = _single(config.k, "k", 1)
        q_values = config.q or ()
        if len(q_values) != 1:
            raise ParameterError("--changhee needs exactly one --q value", details={"q": list(q_values)})
        params = ChangheeParams.build(n, k, config.a or 1, config.b or 1, _single(config.w, "w", 0))
        target = ChangheeTarget(params, q_values[0], p)
        label = f"changhee n={n} k={k} q={format_rational(q_values[0])}"
    report = convergence_report(
        target,
        levels,
        precision=precision,
        guard_digits=settings.guard_digits,
        timings=config.timings,
        **options,
    )
    logger.info("%s: monotone=%s", label, report.monotone)
    return label, report.precision, report.to_dict()["rows"]


def cmd_oracle(config: RunConfig, settings: Settings) -> int:
    checksum = _checksum(config, settings)
    label, precision, rows = _oracle_rows(config, settings)
    records = [
        {"schema": SCHEMA_VERSION, "target": label, "p": config.p, "precision": precision, **row, "checksum": checksum}
        for row in rows
    ]
    _write(config, records, ORACLE_COLUMNS)
    return EXIT_OK


def cmd_limit(config: RunConfig, settings: Settings) -> int:
    checksum = _checksum(config, settings)
    order = config.order or settings.series_order
    records = []
    for n in config.n or (0,):
        for k in config.k or (1,):
            for w in config.w or (0,):
                params = ChangheeParams.build(n, k, config.a or 1, config.b or 1, w)
                value = q_limit(params, order)
                reference = barnes_series(k, w, params.a, n)[n]
                records.append(
                    {
                        "n": n,
                        "k": k,
                        "a": list(params.a),
                        "b": list(params.b),
                        "w": w,
                        "limit": format_rational(value),
                        "barnes_reference": format_rational(reference),
                        "equal": value == reference,
                        "checksum": checksum,
                    }
                )
    _write(config, records, LIMIT_COLUMNS)
    mismatches = sum(not record["equal"] for record in records)
    if mismatches:
        raise IdentityFailure(f"{mismatches} limit(s) differ from the Barnes reference", failures=mismatches)
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig, Settings], int]] = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "limit": cmd_limit,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the process exit code."""
    try:
        config, ns = parse_run_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2
    except QBernoulliError as err:
        payload, code = handle_error(err)
        sys.stderr.write(json.dumps(payload) + "\n")
        return code

    configure_logging(logging.DEBUG if ns.verbose else logging.WARNING if ns.quiet else logging.INFO)
    logger.info("Running %s", config.to_flags())
    try:
        settings = load_settings(config.config)
        return HANDLERS[config.command](config, settings)
    except Exception as err:
        payload, code = handle_error(err)
        sys.stderr.write(json.dumps(payload) + "\n")
        return code
