import pytest

from RHSActions.utils.budgets import Budgets, set_budgets


@pytest.fixture(autouse=True)
def default_budgets():
    """Every test starts from the packaged default budgets and leaves them untouched."""
    previous = set_budgets(Budgets())
    yield
    set_budgets(previous)


@pytest.fixture
def budgets():
    """Install budgets with the given overrides for the rest of the test."""

    def install(**overrides):
        set_budgets(Budgets(**overrides))

    return install
