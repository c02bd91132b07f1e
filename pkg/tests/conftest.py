from __future__ import annotations

import json
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from qbernoulli.cli import main
from qbernoulli.padic import PadicContext


def _write_config(path: Path, body: str) -> None:
    path.write_text(body.lstrip())


@pytest.fixture
def make_config(tmp_path: Path) -> Callable[[str], Path]:
    """Write a TOML settings file and return its path."""

    def _make(body: str) -> Path:
        config_path = tmp_path / "qbernoulli.toml"
        _write_config(config_path, body)
        return config_path

    return _make


@pytest.fixture
def ctx3() -> PadicContext:
    return PadicContext(3, 12)


@pytest.fixture
def ctx5() -> PadicContext:
    return PadicContext(5, 12)


@pytest.fixture
def run_cli(capsys: pytest.CaptureFixture[str]) -> Callable[..., tuple[int, list[dict], str]]:
    """Run ``main(argv)`` and return (exit code, JSON records on stdout, stderr)."""

    def _run(*argv: str) -> tuple[int, list[dict], str]:
        code = main(list(argv))
        captured = capsys.readouterr()
        records = [json.loads(line) for line in captured.out.splitlines() if line.strip()]
        return code, records, captured.err

    return _run


@pytest.fixture
def bernoulli_reference() -> Callable[[int, Fraction | int], Fraction]:
    """``B_n(x)`` from sympy's Bernoulli polynomial (``B_1 = -1/2`` at x = 0)."""

    def _bernoulli(n: int, x: Fraction | int = 0) -> Fraction:
        x = Fraction(x)
        symbol = sympy.Symbol("x")
        value = sympy.bernoulli(n, symbol).subs(symbol, sympy.Rational(x.numerator, x.denominator))
        value = sympy.Rational(value)
        return Fraction(int(value.p), int(value.q))

    return _bernoulli
