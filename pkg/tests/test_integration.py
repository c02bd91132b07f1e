import json
import subprocess
import sys

import pytest

pytestmark = pytest.mark.integration


def _run(*argv: str) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "qbernoulli", *argv],
        capture_output=True,
        text=True,
        timeout=120,
        check=False,
    )


class TestIntegration:
    """The installed module run as a separate process."""

    def test_compute(self) -> None:
        result = _run("compute", "--n=1", "--q=2")
        assert result.returncode == 0
        assert json.loads(result.stdout)["beta"] == "-1/3"

    def test_logs_go_to_stderr(self) -> None:
        result = _run("-v", "limit", "--n=2")
        assert result.returncode == 0
        assert json.loads(result.stdout)["limit"] == "1/6"
        assert "qbernoulli.cli - INFO" in result.stderr

    def test_usage_error_exit_code(self) -> None:
        result = _run("verify", "--identity=nope")
        assert result.returncode == 2
        assert result.stdout == ""
        assert json.loads(result.stderr.strip().splitlines()[-1])["error"]["type"] == "ParameterError"

    def test_budget_exit_code(self) -> None:
        result = _run("oracle", "--classical", "--p=3", "--levels=30")
        assert result.returncode == 3

    def test_suite_passes(self) -> None:
        result = _run(
            "-q", "verify", "--identity=thm2.3,eq2.8-addition,cor2.2", "--max-n=3", "--max-k=2", "--values=1,2"
        )
        assert result.returncode == 0
        statuses = {json.loads(line)["status"] for line in result.stdout.splitlines()}
        assert statuses == {"pass"}
