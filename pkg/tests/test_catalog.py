"""Tests for the period-four families, their recognizers and the catalog enumeration."""

from math import gcd

import pytest

from RHSActions.catalog import (
    catalog_entries,
    dihedral_times_cyclic_check,
    make_O48kl,
    make_Q8nkl,
    make_standard,
    milnor_type,
)
from RHSActions.errors import BadParameterError, UnrecognizedError
from RHSActions.group_spec import build_group
from RHSActions.groups import center, cyclic_group, derived_series, quotient, semidirect_cyclic
from RHSActions.structure import classify_2group, is_periodic, period, sylow_group


@pytest.mark.parametrize(
    "family, params, order",
    [
        ("C", (7,), 7),
        ("D", (3,), 6),
        ("Q", (2,), 8),
        ("Q2k", (4,), 16),
        ("BT", (), 24),
        ("BO", (), 48),
        ("BI", (), 120),
        ("SL2", (7,), 336),
    ],
)
def test_standard_families(family, params, order):
    assert make_standard(family, *params).order == order


def test_binary_polyhedral_groups():
    BO = make_standard("BO")
    _, S = sylow_group(BO, 2)
    assert classify_2group(S).tag == "generalized_quaternion"
    assert S.order == 16
    assert period(BO).period == 4
    assert [H.order for H in derived_series(make_standard("BI"))] == [120]
    assert center(make_standard("SL2", 7)).order == 2


def test_standard_family_parameters():
    with pytest.raises(BadParameterError):
        make_standard("SL2", 4)
    with pytest.raises(BadParameterError):
        make_standard("SL2", 17)
    with pytest.raises(BadParameterError):
        make_standard("X", 1)
    with pytest.raises(BadParameterError):
        make_standard("BT", 3)


def test_q8nkl_construction():
    G = make_Q8nkl(2, 3, 1)
    assert G.order == 48
    assert period(G).period == 4
    assert center(G).order == 2
    # k = l = 1 is the binary dihedral group itself
    assert make_Q8nkl(2, 1, 1).order == 16


@pytest.mark.parametrize("params", [(2, 3, 3), (1, 3, 1), (2, 2, 1), (2, 1, 3)])
def test_q8nkl_parameter_checks(params):
    with pytest.raises(BadParameterError):
        make_Q8nkl(*params)


def test_o48kl_construction():
    G = make_O48kl(5, 1)
    assert G.order == 240
    assert period(G).period == 4
    with pytest.raises(BadParameterError):
        make_O48kl(3, 1)


@pytest.mark.parametrize(
    "spec, tag, family, cofactor",
    [
        ("C(5)", "hopf", "cyclic", 1),
        ("Q(8)", "hopf", "Q", 1),
        ("Q(8) x C(3)", "hopf", "Q", 3),
        ("BT x C(5)", "hopf", "BT", 5),
        ("D(6)", "dihedral_product", "D", 1),
        ("D(6) x C(5)", "dihedral_product", "D", 5),
        ("Q(16,3,1)", "type_B", "Q8nkl", 1),
        ("Q(24,5,1)", "type_A", "Q8nkl", 1),
        ("Q(16,3,1) x C(5)", "product_with_cyclic", "type_B", 5),
        ("O(48,5,1)", "type_C", "O48kl", 1),
        ("C(2) x C(2)", "not_period_four", None, 1),
    ],
)
def test_milnor_type(spec, tag, family, cofactor):
    kind = milnor_type(build_group(spec))
    assert (kind.tag, kind.family, kind.cofactor) == (tag, family, cofactor)


def test_milnor_type_parameters():
    assert milnor_type(build_group("Q(16,3,1)")).parameters == (2, 3, 1)
    assert milnor_type(build_group("Q(40,3,1)")).parameters == (5, 3, 1)
    assert milnor_type(build_group("O(48,5,1)")).parameters == (5, 1)


def test_milnor_type_of_an_unlisted_periodic_group():
    # C(3) x| C(8) with inversion has period four and a cyclic Sylow 2-subgroup of order 8
    G = semidirect_cyclic(3, cyclic_group(8), {1: -1})
    assert period(G).period == 4
    with pytest.raises(UnrecognizedError):
        milnor_type(G)


def test_central_quotient_of_a_type_b_group_is_not_periodic():
    G = make_Q8nkl(2, 3, 1)
    Q, _ = quotient(G, center(G))
    assert Q.order == 24
    assert milnor_type(Q).tag == "not_period_four"


def test_dihedral_times_cyclic_check():
    assert dihedral_times_cyclic_check(build_group("D(6) x C(5)")) == (6, 5)
    assert dihedral_times_cyclic_check(build_group("D(8)")) == (8, 1)
    assert dihedral_times_cyclic_check(build_group("Q(8)")) is None
    assert dihedral_times_cyclic_check(build_group("C(15)")) is None


def test_catalog_up_to_order_16():
    entries = catalog_entries(16)
    specs = [e.spec for e in entries]
    assert len(entries) == 22
    assert specs[0] == "C(1)"
    assert {"D(6)", "D(10)", "D(14)", "Q(8)", "Q(12)", "Q(16)"} <= set(specs)
    keys = [(e.order, e.spec) for e in entries]
    assert keys == sorted(keys)


def test_catalog_type_filters():
    assert [e.spec for e in catalog_entries(48, "B")] == ["Q(16,3,1)"]
    assert catalog_entries(48, "A") == []
    assert [e.spec for e in catalog_entries(120, "A")] == ["Q(24,5,1)", "Q(40,3,1)"]
    assert [e.spec for e in catalog_entries(240, "C")] == ["O(48,5,1)"]
    with pytest.raises(BadParameterError):
        catalog_entries(16, "D")


def test_catalog_entries_build_their_groups():
    for entry in catalog_entries(120, "A") + catalog_entries(48, "B") + catalog_entries(30, "dihedral"):
        G = entry.build()
        assert G.order == entry.order
        assert is_periodic(G)


def _milnor_parameters(max_order):
    for n in range(2, max_order // 8 + 1):
        for k in range(2, max_order // (8 * n) + 1):
            for l in range(1, k):
                if 8 * n * k * l <= max_order and gcd(8 * n, k) == gcd(8 * n, l) == gcd(k, l) == 1:
                    yield n, k, l


@pytest.mark.slow
def test_milnor_families_up_to_order_2000():
    """Order formula, period four, and 16 | order exactly for the types B and C."""
    for n, k, l in _milnor_parameters(2000):
        G = make_Q8nkl(n, k, l)
        assert G.order == 8 * n * k * l
        assert is_periodic(G)
        assert period(G).period == 4
        type_b = n % 2 == 0
        assert (G.order % 16 == 0) == type_b
    for k in range(2, 2000 // 48 + 1):
        for l in range(1, 2000 // (48 * k) + 1):
            if gcd(48, k) == gcd(48, l) == gcd(k, l) == 1:
                G = make_O48kl(k, l)
                assert G.order == 48 * k * l
                assert is_periodic(G)
                assert period(G).period == 4
                assert G.order % 16 == 0
