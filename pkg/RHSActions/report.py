import json
from datetime import datetime, timezone
from typing import Optional

import numpy as np
import yaml
from attrs import define, field

from . import __version__

doc = """
Report documents written by the command line: one canonical JSON rendering (sorted
keys, two-space indent, ASCII only, trailing newline) and a YAML text rendering of
the same content.
"""

SCHEMA_VERSION = 1


def plain(value):
    """Reduce a payload to JSON types: dict, list, str, int, bool and None."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else list(value)
        return [plain(v) for v in items]
    raise TypeError(f"{type(value).__name__} values cannot appear in a report")


@define(frozen=True)
class ReportDocument:
    command: str
    input: Optional[str]
    normalized: Optional[str]
    payload: object = field(converter=plain)
    errors: dict = field(factory=dict, converter=plain)
    timestamp: Optional[str] = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def create(cls, command: str, input, normalized, payload, errors=None, deterministic: bool = False):
        timestamp = None if deterministic else datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(command, input, normalized, payload, errors or {}, timestamp)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "command": self.command,
            "input": self.input,
            "normalized_spec": self.normalized,
            "payload": self.payload,
            "errors": self.errors,
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_text(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True, default_flow_style=False)


def canonical_json(data) -> str:
    return json.dumps(plain(data), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def json_line(data) -> str:
    """Compact single-line canonical JSON, for newline-delimited listings."""
    return json.dumps(plain(data), sort_keys=True, separators=(",", ":"), ensure_ascii=True)
