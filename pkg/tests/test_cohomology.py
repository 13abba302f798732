import itertools
from math import gcd

import numpy as np
import pytest

from RHSActions.cohomology import (
    TwoCocycle,
    bar_cohomology,
    class_exponent,
    extension_from_cocycle,
    find_complement,
    h2_trivial,
    is_split_class,
    restrict_class,
    tate_cyclic,
)
from RHSActions.errors import BadParameterError, BudgetExceededError, InvalidCocycleError
from RHSActions.group_spec import build_group
from RHSActions.groups import center, cyclic_group, is_isomorphic, subgroup_generated, trivial_group
from RHSActions.structure import is_periodic, period

SMALL_GROUPS = ["C(1)", "C(2)", "C(3)", "C(4)", "C(2) x C(2)", "C(5)", "C(6)", "D(6)", "C(7)"]
ORDER_EIGHT = ["C(8)", "C(2) x C(4)", "C(2) x C(2) x C(2)", "D(8)", "Q(8)"]


@pytest.mark.parametrize(
    "spec, m, factors",
    [
        ("C(2) x C(2)", 2, [2, 2, 2]),
        ("C(2) x C(2)", 4, [2, 2, 2]),
        ("C(4)", 2, [2]),
        ("C(6)", 4, [2]),
        ("C(5)", 3, []),
        ("Q(8)", 2, [2, 2]),
        ("D(6)", 2, [2]),
        ("D(6)", 3, []),
        ("D(8)", 2, [2, 2, 2]),
    ],
)
def test_h2_trivial(spec, m, factors):
    H2 = h2_trivial(build_group(spec), m)
    assert H2.invariant_factors == factors
    for f in H2.generators:
        assert f.is_normalized
        assert f.verify(exhaustive=True)


def test_h2_of_the_trivial_group():
    H2 = h2_trivial(trivial_group(), 5)
    assert H2.invariant_factors == []
    assert H2.order == 1


def test_h2_respects_budget(budgets):
    budgets(h2_order_bound=4)
    with pytest.raises(BudgetExceededError):
        h2_trivial(cyclic_group(8), 2)


def test_coordinates_ignore_coboundaries():
    G = build_group("C(2) x C(4)")
    H2 = h2_trivial(G, 4)
    rng = np.random.default_rng(3)
    u = rng.integers(0, 4, size=G.order)
    u[0] = 0
    for coords in [[1] * len(H2.invariant_factors), [0] * len(H2.invariant_factors)]:
        f = H2.cocycle(coords)
        shifted = f + TwoCocycle.coboundary(G, 4, u)
        assert shifted.verify(exhaustive=True)
        assert H2.coordinates(shifted) == H2.coordinates(f)


def test_enumerated_representatives_are_pairwise_inequivalent():
    G = build_group("C(2) x C(2)")
    H2 = h2_trivial(G, 2, enumerate=True)
    assert H2.enumerated
    assert len(H2.representatives) == 8
    for f, g in itertools.combinations(H2.representatives, 2):
        assert not is_split_class(f - g)


def test_non_cocycle_is_rejected():
    G = cyclic_group(3)
    values = np.zeros((3, 3), dtype=np.int64)
    values[1, 1] = 1
    f = TwoCocycle(G, 3, values)
    assert not f.verify()
    assert not f.verify(exhaustive=True)
    with pytest.raises(InvalidCocycleError):
        extension_from_cocycle(G, 3, f)


def test_cocycle_table_shape_is_checked():
    with pytest.raises(InvalidCocycleError):
        TwoCocycle(cyclic_group(3), 3, np.zeros((2, 2)))


def test_extensions_of_the_klein_four_group_by_z2():
    G = build_group("C(2) x C(2)")
    H2 = h2_trivial(G, 2, enumerate=True)
    candidates = {spec: build_group(spec) for spec in ["C(2) x C(2) x C(2)", "C(2) x C(4)", "D(8)", "Q(8)"]}
    counts = dict.fromkeys(candidates, 0)
    for f in H2.representatives:
        total = extension_from_cocycle(G, 2, f).total
        for spec, H in candidates.items():
            if is_isomorphic(total, H)[0]:
                counts[spec] += 1
    assert counts == {"C(2) x C(2) x C(2)": 1, "C(2) x C(4)": 3, "D(8)": 3, "Q(8)": 1}


def _quaternion_class(G, H2):
    for f in H2.representatives:
        total = extension_from_cocycle(G, 2, f).total
        if int((total.element_orders == 2).sum()) == 1:
            return f
    raise AssertionError("no quaternion class found")


def test_quaternion_extension_of_the_klein_four_group():
    G = build_group("C(2) x C(2)")
    f = _quaternion_class(G, h2_trivial(G, 2, enumerate=True))
    ext = extension_from_cocycle(G, 2, f)
    assert ext.total.order == 8
    assert center(ext.total).mask[ext.kernel.member_array].all()
    assert ext.projection.verify()
    assert np.array_equal(ext.section_cocycle().values, f.values)
    assert find_complement(ext) is None
    assert not is_split_class(f)
    assert class_exponent(f) == 2
    subgroups = [subgroup_generated(G, [x]) for x in range(1, G.order)]
    assert len(subgroups) == 3
    assert all(not is_split_class(restrict_class(f, S)) for S in subgroups)


def test_split_extension_has_a_complement():
    G = build_group("D(6)")
    zero = TwoCocycle.zero(G, 3)
    ext = extension_from_cocycle(G, 3, zero)
    complement = find_complement(ext)
    assert complement is not None
    assert complement.order == G.order
    assert is_split_class(zero)
    assert class_exponent(zero) == 1


def test_coboundaries_split():
    G = build_group("C(2) x C(4)")
    u = np.arange(G.order) % 4
    u[0] = 0
    assert is_split_class(TwoCocycle.coboundary(G, 4, u))


def test_tate_cyclic():
    assert tate_cyclic(6, None, 2) == 6
    assert tate_cyclic(6, None, 3) == 1
    assert tate_cyclic(6, 4, 1) == 2


def test_bar_cohomology_of_the_klein_four_group():
    G = build_group("C(2) x C(2)")
    assert bar_cohomology(G, None, 0).invariant_factors == [4]
    assert bar_cohomology(G, None, 1).invariant_factors == []
    assert bar_cohomology(G, None, 2).invariant_factors == [2, 2]
    assert bar_cohomology(G, None, 3).invariant_factors == [2]
    assert bar_cohomology(G, 2, 2).invariant_factors == [2, 2, 2]


def test_bar_cohomology_of_cyclic_groups_is_periodic():
    G = cyclic_group(5)
    assert bar_cohomology(G, None, 2).invariant_factors == [5]
    assert bar_cohomology(G, None, 3).invariant_factors == []
    assert bar_cohomology(G, None, 4).invariant_factors == [5]


def test_bar_cohomology_degree_range():
    with pytest.raises(BadParameterError):
        bar_cohomology(cyclic_group(2), None, 5)


def _brute_force_h2(G, m):
    """Order and exponent of H^2(G, Z/m) from all normalized tables and all coboundaries."""
    n = G.order
    cells = [(g, h) for g in range(1, n) for h in range(1, n)]
    table = G.table.astype(np.int64)
    cocycles = []
    for values in itertools.product(range(m), repeat=len(cells)):
        f = np.zeros((n, n), dtype=np.int64)
        for (g, h), v in zip(cells, values):
            f[g, h] = v
        lhs = f[:, :, None] + f[table[:, :, None], np.arange(n)[None, None, :]]
        rhs = f[None, :, :] + f[np.arange(n)[:, None, None], table[None, :, :]]
        if ((lhs - rhs) % m == 0).all():
            cocycles.append(f)
    coboundaries = set()
    for u in itertools.product(range(m), repeat=n - 1):
        u = np.array((0,) + u, dtype=np.int64)
        coboundaries.add(((u[:, None] + u[None, :] - u[table]) % m).tobytes())

    def order_of(f):
        for d in range(1, m + 1):
            if ((d * f) % m).tobytes() in coboundaries:
                return d

    return len(cocycles) // len(coboundaries), max((order_of(f) for f in cocycles), default=1)


@pytest.mark.parametrize(
    "spec, m",
    [("C(2)", 2), ("C(2)", 4), ("C(3)", 3), ("C(3)", 2), ("C(2) x C(2)", 2), ("C(4)", 2), ("C(4)", 3)],
)
def test_h2_matches_brute_force_enumeration(spec, m):
    G = build_group(spec)
    factors = h2_trivial(G, m).invariant_factors
    order, exponent = _brute_force_h2(G, m)
    assert int(np.prod(factors, dtype=np.int64)) == order
    assert max(factors, default=1) == exponent


@pytest.mark.slow
@pytest.mark.parametrize("spec", SMALL_GROUPS + ORDER_EIGHT)
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_h2_matches_the_bar_complex(spec, m):
    G = build_group(spec)
    assert h2_trivial(G, m).invariant_factors == bar_cohomology(G, m, 2).invariant_factors


def _bar_period(G):
    for d in (2, 4):
        H = bar_cohomology(G, None, d)
        if H.is_cyclic and H.order == G.order:
            return d
    return None


@pytest.mark.slow
@pytest.mark.parametrize("spec", SMALL_GROUPS + ORDER_EIGHT)
def test_period_matches_the_bar_complex(spec):
    G = build_group(spec)
    report = period(G)
    assert report.period == _bar_period(G)
    if not is_periodic(G):
        assert report.period is None


def test_cyclic_closed_form_matches_the_bar_complex():
    for n in (2, 3, 4):
        G = cyclic_group(n)
        for m in (2, 3, 4):
            assert bar_cohomology(G, m, 2).order == tate_cyclic(n, m, 2) == gcd(n, m)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("degree", range(5))
def test_cyclic_closed_form_matches_the_bar_complex_in_all_degrees(n, degree):
    G = cyclic_group(n)
    for coeff in (None, 1, 2, 3, 4, 5, 6):
        H = bar_cohomology(G, coeff, degree)
        assert H.is_cyclic
        assert H.order == tate_cyclic(n, coeff, degree), f"C({n}), degree {degree}, coefficients {coeff}"
