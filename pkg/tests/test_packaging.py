import tomllib
from pathlib import Path

import pytest

pytestmark = pytest.mark.unit

PYPROJECT = Path(__file__).resolve().parent.parent / "pyproject.toml"


@pytest.fixture(scope="module")
def pyproject() -> dict:
    with PYPROJECT.open("rb") as handle:
        return tomllib.load(handle)


class TestVersioning:
    def test_version_comes_from_vcs(self, pyproject):
        assert pyproject["project"]["dynamic"] == ["version"]
        assert pyproject["tool"]["hatch"]["version"]["source"] == "vcs"

    def test_scheme_is_read_by_hatch_vcs(self, pyproject):
        raw = pyproject["tool"]["hatch"]["version"]["raw-options"]
        assert raw["version_scheme"] == "release-branch-semver"
        assert raw["local_scheme"] == "no-local-version"

    def test_no_setuptools_scm_section(self, pyproject):
        assert "setuptools_scm" not in pyproject["tool"]


class TestEntryPoints:
    def test_console_script(self, pyproject):
        assert pyproject["project"]["scripts"] == {"qbernoulli": "qbernoulli.cli:main"}
