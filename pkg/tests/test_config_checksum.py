import pytest

from qbernoulli.config import Settings
from qbernoulli.config_checksum import compute_config_checksum

pytestmark = pytest.mark.unit


class TestComputeConfigChecksum:
    def _base(self):
        flags = {"n": [0, 1, 2], "k": [1], "a": [1], "b": [1], "w": [0], "q": ["2"]}
        settings = Settings().to_dict()
        return "compute", flags, settings

    def test_identical_runs_same_checksum(self):
        c, f, s = self._base()
        assert compute_config_checksum(c, f, s) == compute_config_checksum(c, f, s)

    def test_different_command_different_checksum(self):
        c, f, s = self._base()
        assert compute_config_checksum(c, f, s) != compute_config_checksum("limit", f, s)

    def test_different_flag_different_checksum(self):
        c, f, s = self._base()
        f2 = dict(f, q=["1/2"])
        assert compute_config_checksum(c, f, s) != compute_config_checksum(c, f2, s)

    def test_different_setting_different_checksum(self):
        c, f, s = self._base()
        s2 = dict(s, padic={"precision": 30})
        assert compute_config_checksum(c, f, s) != compute_config_checksum(c, f, s2)

    def test_key_ordering_does_not_affect_checksum(self):
        c, f, s = self._base()
        f_reordered = dict(reversed(list(f.items())))
        assert compute_config_checksum(c, f, s) == compute_config_checksum(c, f_reordered, s)

    def test_output_is_16_hex_chars(self):
        c, f, s = self._base()
        result = compute_config_checksum(c, f, s)
        assert isinstance(result, str)
        assert len(result) == 16
        assert all(ch in "0123456789abcdef" for ch in result)
