import json
import logging
from typing import Type, Union

doc = """
This module contains helpers for turning loosely typed values (command-line key=value
pairs, environment variables, YAML entries) into the integers, booleans and lists the
engine expects.
"""


def sanitize_attribute(
    value: str | bytes | int | None, default_type: Type = int
) -> Union[str, int, bool, list, None]:
    """
    Tries to convert the value to:
      - None (for "null"/"none")
      - bool (for "true"/"false")
      - list (for JSON arrays)
      - default_type
      - leave as string
    """
    if value is None:
        return None

    if isinstance(value, bytes):
        value = value.decode("utf-8")

    if not isinstance(value, str):
        return value

    stripped = value.strip()
    if stripped.lower() in ("null", "none", "~"):
        return None
    if stripped.lower() in ("true", "yes"):
        return True
    if stripped.lower() in ("false", "no"):
        return False

    value = try_string_as_list(stripped)
    if isinstance(value, str):  # conversion did not succeed
        try:
            value = default_type(value)
        except ValueError:
            logging.debug(f"could not cast {value=} to {default_type}, keeping it as string")
    return value


def try_string_as_list(value: str) -> Union[str, list]:
    """
    Tries to convert the value to a list
    """
    if isinstance(value, str):
        value = value.strip()
        if len(value) > 0 and value[0] == "[":  # sign it's a list
            try:
                value = json.loads(value)
            except json.JSONDecodeError:
                logging.debug(f"{value!r} looks like a list but is not valid JSON")
    return value
