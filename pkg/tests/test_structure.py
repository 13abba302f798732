import pytest

from RHSActions.catalog import make_standard
from RHSActions.errors import NotA2GroupError, NotPrimeError
from RHSActions.group_spec import build_group
from RHSActions.groups import cyclic_group, semidirect_cyclic, trivial_group
from RHSActions.structure import PeriodReport, classify_2group, is_cyclic, is_periodic, p_rank, period


@pytest.mark.parametrize(
    "spec, cyclic",
    [
        ("C(1)", True),
        ("C(6)", True),
        ("C(2) x C(3)", True),
        ("C(2) x C(2)", False),
        ("D(6)", False),
        ("D(10)", False),
        ("Q(12)", False),
        ("D(6) x C(5)", False),
    ],
)
def test_is_cyclic(spec, cyclic):
    assert is_cyclic(build_group(spec)) is cyclic


@pytest.mark.parametrize(
    "spec, tag",
    [
        ("C(8)", "cyclic"),
        ("C(2) x C(2)", "klein_four"),
        ("D(8)", "dihedral"),
        ("D(16)", "dihedral"),
        ("Q(8)", "generalized_quaternion"),
        ("Q(16)", "generalized_quaternion"),
        ("C(2) x C(4)", "other"),
        ("C(2) x C(2) x C(2)", "other"),
        ("quot(Q(32), Z)", "dihedral"),
    ],
)
def test_classify_2group(spec, tag):
    assert classify_2group(build_group(spec)).tag == tag


def test_semidihedral_and_modular_groups_of_order_16():
    assert classify_2group(semidirect_cyclic(8, cyclic_group(2), {1: 3})).tag == "semidihedral"
    assert classify_2group(semidirect_cyclic(8, cyclic_group(2), {1: 5})).tag == "other"


def test_classify_2group_rejects_other_orders():
    with pytest.raises(NotA2GroupError):
        classify_2group(cyclic_group(6))


def test_p_rank():
    assert p_rank(build_group("C(2) x C(2) x C(2)"), 2) == 3
    assert p_rank(build_group("D(8)"), 2) == 2
    assert p_rank(build_group("D(8) x C(2)"), 2) == 3
    assert p_rank(build_group("Q(8)"), 2) == 1
    assert p_rank(build_group("Q(8) x Q(8)"), 2) == 2
    assert p_rank(cyclic_group(6), 3) == 1
    assert p_rank(cyclic_group(5), 2) == 0
    with pytest.raises(NotPrimeError):
        p_rank(cyclic_group(6), 6)


@pytest.mark.parametrize(
    "spec, periodic",
    [
        ("Q(8) x C(3)", True),
        ("C(2) x C(2)", False),
        ("C(15)", True),
        ("BT", True),
        ("D(6) x C(5)", True),
        ("C(3) x C(3)", False),
        ("Q(16,3,1)", True),
    ],
)
def test_is_periodic(spec, periodic):
    assert is_periodic(build_group(spec)) is periodic


@pytest.mark.parametrize(
    "spec, expected",
    [("C(7)", 2), ("Q(8)", 4), ("D(6)", 4), ("BT", 4), ("BI", 4), ("D(10)", 4), ("Q(12)", 4), ("C(2) x C(2)", None)],
)
def test_period(spec, expected):
    report = period(build_group(spec))
    assert report.period == expected
    assert report.periodic is (expected is not None)


def test_period_of_the_trivial_group_is_two():
    report = period(trivial_group())
    assert report.periodic
    assert report.period == 2
    assert report.per_prime == {}


def test_per_prime_data_of_s3():
    report = period(make_standard("D", 3))
    three = report.per_prime[3]
    assert (three.sylow_class, three.phi_order, three.p_period) == ("cyclic", 2, 4)
    two = report.per_prime[2]
    assert (two.sylow_class, two.p_rank, two.p_period) == ("cyclic", 1, 2)
    assert report.to_dict()["per_prime"]["3"]["p_period"] == 4


def test_period_report_invariant():
    with pytest.raises(ValueError):
        PeriodReport(True, None)
    with pytest.raises(ValueError):
        PeriodReport(False, 4)
