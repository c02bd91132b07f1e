import hashlib
import json
from typing import Any


def compute_config_checksum(command: str, flags: dict[str, Any], settings: dict[str, Any]) -> str:
    """Fingerprint of a run: the command, its resolved flags and the effective settings."""
    payload = {"command": command, "flags": flags, "settings": settings}
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
