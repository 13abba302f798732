import pytest

from RHSActions.errors import ConfigurationError
from RHSActions.utils.budgets import Budgets, get_budgets, load_budgets, read_budget_file, set_budgets
from RHSActions.utils.data_utils import sanitize_attribute


def test_packaged_defaults_match_the_class_defaults():
    assert load_budgets(environ={}) == Budgets()
    assert read_budget_file()["isomorphism_order_bound"] == 2048


def test_user_file_then_environment_then_overrides(tmp_path):
    config = tmp_path / "budgets.yaml"
    config.write_text("h2_order_bound: 96\nquotient_search_order_bound: 128\n")
    budgets = load_budgets(config, environ={})
    assert (budgets.h2_order_bound, budgets.quotient_search_order_bound) == (96, 128)

    budgets = load_budgets(config, environ={"RHS_ACTIONS_BUDGET": "500"})
    assert budgets.h2_order_bound == 500
    assert budgets.closure_order_bound == 500
    assert budgets.class_enumeration_limit == 4096

    budgets = load_budgets(config, {"h2_order_bound": "32", "verify_catalog": "false"}, environ={"RHS_ACTIONS_BUDGET": "500"})
    assert budgets.h2_order_bound == 32
    assert budgets.verify_catalog is False


def test_blank_environment_variable_is_ignored():
    assert load_budgets(environ={"RHS_ACTIONS_BUDGET": "  "}) == Budgets()


@pytest.mark.parametrize(
    "overrides",
    [{"no_such_budget": "1"}, {"h2_order_bound": "0"}, {"h2_order_bound": "many"}, {"m_bound": "-3"}],
)
def test_invalid_overrides(overrides):
    with pytest.raises(ConfigurationError):
        load_budgets(overrides=overrides, environ={})


def test_invalid_environment_variable():
    with pytest.raises(ConfigurationError):
        load_budgets(environ={"RHS_ACTIONS_BUDGET": "lots"})


def test_budget_file_must_hold_a_mapping(tmp_path):
    config = tmp_path / "budgets.yaml"
    config.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigurationError):
        load_budgets(config, environ={})


def test_m_bound_accepts_null():
    assert Budgets().updated({"m_bound": "null"}).m_bound is None
    assert Budgets().updated({"m_bound": "12"}).m_bound == 12


def test_set_budgets_returns_the_previous_budgets():
    small = Budgets(h2_order_bound=8)
    previous = set_budgets(small)
    try:
        assert get_budgets() is small
    finally:
        set_budgets(previous)
    assert get_budgets() is previous


@pytest.mark.parametrize(
    "raw, value",
    [("12", 12), (" true ", True), ("No", False), ("null", None), ("[1, 2]", [1, 2]), ("[1,", "[1,"), (b"7", 7), (5, 5)],
)
def test_sanitize_attribute(raw, value):
    assert sanitize_attribute(raw) == value
