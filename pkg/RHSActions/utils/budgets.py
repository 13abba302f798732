import logging
import os
from importlib import resources
from pathlib import Path
from typing import Optional

import attrs
import yaml
from attrs import define

from ..errors import ConfigurationError
from .data_utils import sanitize_attribute

BUDGET_ENVIRONMENT_VARIABLE = "RHS_ACTIONS_BUDGET"

# bounds that count group elements; the environment variable sets all of them
ELEMENT_COUNT_BOUNDS = (
    "closure_order_bound",
    "isomorphism_order_bound",
    "h2_order_bound",
    "extension_order_bound",
    "quotient_search_order_bound",
)


def _positive(instance, attribute, value):
    if value is not None and (isinstance(value, bool) or not isinstance(value, int) or value < 1):
        raise ConfigurationError(f"budget {attribute.name} must be a positive integer, got {value!r}")


@define(frozen=True)
class Budgets:
    closure_order_bound: int = attrs.field(default=20000, validator=_positive)
    isomorphism_order_bound: int = attrs.field(default=2048, validator=_positive)
    h2_order_bound: int = attrs.field(default=64, validator=_positive)
    bar_cell_budget: int = attrs.field(default=4_000_000, validator=_positive)
    class_enumeration_limit: int = attrs.field(default=4096, validator=_positive)
    extension_order_bound: int = attrs.field(default=2048, validator=_positive)
    quotient_search_order_bound: int = attrs.field(default=256, validator=_positive)
    m_bound: Optional[int] = attrs.field(default=None, validator=_positive)
    verify_catalog: bool = True

    def updated(self, values: dict) -> "Budgets":
        """Return a copy with the given entries replaced; unknown keys are an error."""
        known = {a.name for a in attrs.fields(Budgets)}
        unknown = sorted(set(values) - known)
        if unknown:
            logging.error(f"unknown budget entries: {unknown}")
            raise ConfigurationError(f"unknown budget entries: {unknown}")
        cleaned = {k: sanitize_attribute(v) for k, v in values.items()}
        return attrs.evolve(self, **cleaned)


def read_budget_file(file_path: Path | str | None = None) -> dict:
    """Read a budgets YAML file; without a path the packaged defaults are read."""
    if file_path is None:
        text = resources.files("RHSActions").joinpath("default_budgets.yaml").read_text()
    else:
        with open(file_path, "r") as file:
            text = file.read()
    try:
        content = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ConfigurationError(f"could not read budgets from {file_path}: {e}")
    if not isinstance(content, dict):
        raise ConfigurationError(f"budget file {file_path} must contain a mapping")
    return content


def load_budgets(
    config_file: Path | str | None = None,
    overrides: dict | None = None,
    environ: dict | None = None,
) -> Budgets:
    """
    Assemble budgets from the packaged defaults, an optional user file, the
    RHS_ACTIONS_BUDGET environment variable and explicit overrides, in that order.
    """
    budgets = Budgets().updated(read_budget_file())
    if config_file is not None:
        budgets = budgets.updated(read_budget_file(config_file))
        logging.info(f"budgets read from {config_file}")

    environ = os.environ if environ is None else environ
    env_value = environ.get(BUDGET_ENVIRONMENT_VARIABLE)
    if env_value is not None and env_value.strip():
        try:
            bound = int(env_value)
        except ValueError:
            raise ConfigurationError(f"{BUDGET_ENVIRONMENT_VARIABLE}={env_value!r} is not an integer")
        budgets = budgets.updated({name: bound for name in ELEMENT_COUNT_BOUNDS})
        logging.info(f"{BUDGET_ENVIRONMENT_VARIABLE} sets element-count bounds to {bound}")

    if overrides:
        budgets = budgets.updated(overrides)
    logging.debug(f"{budgets=}")
    return budgets


_active = Budgets()


def get_budgets() -> Budgets:
    return _active


def set_budgets(budgets: Budgets) -> Budgets:
    """Install process-wide budgets, returning the previous ones."""
    global _active
    previous = _active
    _active = budgets
    return previous
