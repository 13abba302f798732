import itertools
import logging
from math import gcd, prod
from typing import Optional, Sequence

import numpy as np
import sympy
from attrs import define, field

from .errors import BadParameterError, BudgetExceededError, InvalidCocycleError, SubgroupMismatchError
from .group_elements import FiniteGroup, Homomorphism, Subgroup, per_group_cache
from .groups import check_order, extend_generator_map, subgroup_as_group, subgroup_from_mask
from .linalg import invariant_factors as chain_of, matmul_mod, smith_normal_form_mod
from .utils.budgets import get_budgets
from .utils.validators import validate_positive_int

doc = """
Cohomology with trivial coefficients: 2-cocycles and H^2(G, Z/m), central extensions
built from cocycles, restriction and splitting of classes, closed forms for cyclic
groups and the normalized bar complex up to degree 4.
"""


def _as_cocycle_table(values) -> np.ndarray:
    table = np.array(values, dtype=np.int64)
    table.setflags(write=False)
    return table


@define(frozen=True, slots=False, eq=False)
class TwoCocycle:
    """f(g, h) in Z/modulus, stored as values[g, h] over the element indices of `group`."""

    group: FiniteGroup
    modulus: int
    values: np.ndarray = field(converter=_as_cocycle_table)

    def __attrs_post_init__(self):
        n = self.group.order
        if self.values.shape != (n, n):
            raise InvalidCocycleError(f"cocycle table has shape {self.values.shape}, expected {(n, n)}")
        if self.modulus < 1:
            raise InvalidCocycleError(f"modulus must be positive, got {self.modulus}")
        if self.values.min(initial=0) < 0 or self.values.max(initial=0) >= self.modulus:
            object.__setattr__(self, "values", _as_cocycle_table(self.values % self.modulus))

    @classmethod
    def zero(cls, G: FiniteGroup, m: int) -> "TwoCocycle":
        return cls(G, m, np.zeros((G.order, G.order), dtype=np.int64))

    @classmethod
    def coboundary(cls, G: FiniteGroup, m: int, u: Sequence[int]) -> "TwoCocycle":
        """(du)(g, h) = u(g) + u(h) - u(gh); normalized when u(e) = 0."""
        u = np.asarray(u, dtype=np.int64) % m
        return cls(G, m, (u[:, None] + u[None, :] - u[G.table]) % m)

    @property
    def is_normalized(self) -> bool:
        return not (self.values[0].any() or self.values[:, 0].any())

    @property
    def is_zero(self) -> bool:
        return not self.values.any()

    def _compatible(self, other: "TwoCocycle"):
        if other.group is not self.group or other.modulus != self.modulus:
            raise InvalidCocycleError("cocycles live on different groups or moduli")

    def __add__(self, other: "TwoCocycle") -> "TwoCocycle":
        self._compatible(other)
        return TwoCocycle(self.group, self.modulus, (self.values + other.values) % self.modulus)

    def __sub__(self, other: "TwoCocycle") -> "TwoCocycle":
        self._compatible(other)
        return TwoCocycle(self.group, self.modulus, (self.values - other.values) % self.modulus)

    def scaled(self, k: int) -> "TwoCocycle":
        return TwoCocycle(self.group, self.modulus, (self.values * k) % self.modulus)

    def verify(self, exhaustive: bool = False) -> bool:
        """
        Cocycle identity f(g,h) + f(gh,k) = f(h,k) + f(g,hk). Checking k over a
        generating set is equivalent; `exhaustive` checks all triples.
        """
        G, f, m = self.group, self.values, self.modulus
        ks = np.arange(G.order) if exhaustive else np.asarray(G.generators, dtype=np.int64)
        if len(ks) == 0:
            return self.is_normalized
        table = G.table.astype(np.int64)
        gh = table[:, :, None]
        hk = table[:, ks][None, :, :]
        lhs = f[:, :, None] + f[gh, ks[None, None, :]]
        rhs = f[:, ks][None, :, :] + f[np.arange(G.order)[:, None, None], hk]
        return bool(((lhs - rhs) % m == 0).all())

    def as_table(self) -> list:
        return self.values.tolist()


# second cohomology


@define(frozen=True, slots=False, eq=False)
class _CayleyTree:
    """Breadth-first spanning tree of the right Cayley graph: x = parent[x] * gens[via[x]]."""

    group: FiniteGroup
    gens: tuple
    parent: np.ndarray
    via: np.ndarray
    order: tuple


def _cayley_tree(G: FiniteGroup) -> _CayleyTree:
    gens = tuple(G.generators)
    parent = np.full(G.order, -1, dtype=np.int64)
    via = np.full(G.order, -1, dtype=np.int64)
    order = [0]
    for x in order:
        for i, s in enumerate(gens):
            y = int(G.table[x, s])
            if y != 0 and parent[y] == -1:
                parent[y] = x
                via[y] = i
                order.append(y)
    return _CayleyTree(G, gens, parent, via, tuple(order))


def _holonomy_constraints(tree: _CayleyTree, m: int) -> np.ndarray:
    """
    Rows over the unknowns f(h, s), h != e: the holonomy of every fundamental cycle of
    the Cayley graph must not change under left translation by a generator.
    """
    G, k = tree.group, len(tree.gens)
    n = G.order
    edges = n * k
    gens = np.asarray(tree.gens, dtype=np.int64)
    paths = np.zeros((n, edges), dtype=np.int64)
    tree_edges = np.zeros(edges, dtype=bool)
    for x in tree.order[1:]:
        p = tree.parent[x]
        paths[x] = paths[p]
        paths[x, p * k + tree.via[x]] += 1
        tree_edges[p * k + tree.via[x]] = True
    xs, ts = np.divmod(np.flatnonzero(~tree_edges), k)
    targets = G.table[xs, gens[ts]]
    cycles = paths[xs] - paths[targets]
    cycles[np.arange(len(xs)), xs * k + ts] += 1

    edge_x, edge_t = np.divmod(np.arange(edges), k)
    rows = []
    for s in gens:
        moved = G.table[s, edge_x].astype(np.int64) * k + edge_t
        translated = np.zeros_like(cycles)
        translated[:, moved] = cycles
        rows.append(translated - cycles)
    A = np.vstack(rows)[:, k:] % m
    A = A[A.any(axis=1)]
    return np.unique(A, axis=0) if len(A) else A.reshape(0, (n - 1) * k)


def _restricted_coboundaries(tree: _CayleyTree, m: int) -> np.ndarray:
    """Columns u(x), x != e, mapped to the generator values u(h) + u(s) - u(hs)."""
    G, k = tree.group, len(tree.gens)
    n = G.order
    h, t = np.divmod(np.arange((n - 1) * k), k)
    h = h + 1
    s = np.asarray(tree.gens, dtype=np.int64)[t]
    hs = G.table[h, s].astype(np.int64)
    B = np.zeros(((n - 1) * k, n - 1), dtype=np.int64)
    rows = np.arange((n - 1) * k)
    np.add.at(B, (rows, h - 1), 1)
    np.add.at(B, (rows, s - 1), 1)
    keep = hs != 0
    np.add.at(B, (rows[keep], hs[keep] - 1), -1)
    return B % m


def _expand_cocycle(tree: _CayleyTree, phi: np.ndarray, m: int) -> np.ndarray:
    """The full normalized cocycle with f(h, s) = phi[h, s] on the generators."""
    G = tree.group
    table = G.table.astype(np.int64)
    F = np.zeros((G.order, G.order), dtype=np.int64)
    for x in tree.order[1:]:
        p, t = tree.parent[x], tree.via[x]
        F[:, x] = (F[:, p] + phi[table[:, p], t] - phi[p, t]) % m
    return F


@define(frozen=True, slots=False, eq=False)
class _H2Basis:
    """
    Cocycles are parametrised by y = V^-1 phi with y_i in k_i Z/m; z = y / k runs over
    the sum of Z/g_i, and H^2 is that sum modulo the coboundaries Z_B, put in Smith
    form by U2.
    """

    tree: _CayleyTree
    modulus: int
    V: np.ndarray
    V_inv: np.ndarray
    k: np.ndarray
    U2: np.ndarray
    U2_inv: np.ndarray
    exponents: list
    nontrivial: list

    @property
    def invariant_factors(self) -> list:
        return [self.exponents[i] for i in self.nontrivial]

    def generator_values(self, f: np.ndarray) -> np.ndarray:
        k = len(self.tree.gens)
        return f[1:, list(self.tree.gens)].reshape((self.tree.group.order - 1) * k)

    def coordinates(self, f: np.ndarray) -> list:
        m = self.modulus
        y = matmul_mod(self.V_inv, self.generator_values(f), m)
        if (y % self.k).any():
            raise InvalidCocycleError("values violate the cocycle identity")
        c = matmul_mod(self.U2, y // self.k, m)
        return [int(c[i] % self.exponents[i]) for i in self.nontrivial]

    def representative(self, coords: Sequence[int]) -> np.ndarray:
        m, tree = self.modulus, self.tree
        n, k = tree.group.order, len(tree.gens)
        c = np.zeros(len(self.exponents), dtype=np.int64)
        for i, value in zip(self.nontrivial, coords):
            c[i] = int(value) % self.exponents[i]
        z = matmul_mod(self.U2_inv, c, m)
        y = (self.k * z) % m
        phi = np.zeros((n, k), dtype=np.int64)
        phi[1:] = matmul_mod(self.V, y, m).reshape(n - 1, k)
        return _expand_cocycle(tree, phi, m)


@per_group_cache
def _h2_basis(G: FiniteGroup, m: int) -> _H2Basis:
    tree = _cayley_tree(G)
    A = _holonomy_constraints(tree, m)
    B = _restricted_coboundaries(tree, m)
    N = B.shape[0]
    first = smith_normal_form_mod(A, m, right=True)
    k = np.ones(N, dtype=np.int64)
    for i, d in enumerate(first.diagonal):
        if d:
            k[i] = m // gcd(d, m)
    g = m // k
    Z_B = matmul_mod(first.V_inv, B, m) // k[:, None]
    relations = np.hstack([Z_B, np.diag(g % m)])
    second = smith_normal_form_mod(relations, m, left=True)
    exponents = [d if d else m for d in second.diagonal]
    nontrivial = [i for i, e in enumerate(exponents) if e > 1]
    logging.debug(
        f"H^2({G.origin}, Z/{m}): {A.shape[0]} holonomy constraints on {N} unknowns, "
        f"factors {[exponents[i] for i in nontrivial]}"
    )
    return _H2Basis(tree, m, first.V, first.V_inv, k, second.U, second.U_inv, exponents, nontrivial)


@define(frozen=True, slots=False, eq=False)
class CohomologyGroup:
    """
    A finite abelian cohomology group given by its invariant factors d1 | d2 | ...
    Degree-2 groups computed by h2_trivial also carry class representatives and can
    translate between cocycles and class coordinates.
    """

    degree: int
    modulus: Optional[int]
    invariant_factors: list
    representatives: list = field(factory=list)
    generators: list = field(factory=list)
    group: Optional[FiniteGroup] = field(default=None, repr=False)
    enumerated: bool = False
    _basis: Optional[_H2Basis] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def _require_basis(self):
        if self._basis is None:
            raise SubgroupMismatchError("class coordinates are only available for H^2(G, Z/m) from h2_trivial")

    def coordinates(self, f: TwoCocycle) -> list:
        """Coordinates of the class of f with respect to the invariant factors."""
        self._require_basis()
        if f.group is not self.group or f.modulus != self.modulus:
            raise SubgroupMismatchError("the cocycle belongs to another group or modulus")
        if not f.is_normalized:
            raise InvalidCocycleError("class coordinates need a normalized cocycle")
        return self._basis.coordinates(f.values)

    def cocycle(self, coords: Sequence[int]) -> TwoCocycle:
        """The normalized representative of the class with the given coordinates."""
        self._require_basis()
        if len(coords) != len(self.invariant_factors):
            raise BadParameterError(f"expected {len(self.invariant_factors)} coordinates, got {len(coords)}")
        return TwoCocycle(self.group, self.modulus, self._basis.representative(coords))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": "Z" if self.modulus is None else f"Z/{self.modulus}",
            "invariant_factors": list(self.invariant_factors),
            "order": self.order,
        }


def h2_trivial(G: FiniteGroup, m: int, enumerate: bool = False) -> CohomologyGroup:
    """
    H^2(G, Z/m) with trivial action as normalized cocycles modulo coboundaries.

    Representatives are one cocycle per class when `enumerate` is set and the group
    is small enough, otherwise the generator classes only.
    """
    m = validate_positive_int("m", m)
    budgets = get_budgets()
    if G.order > budgets.h2_order_bound:
        logging.warning(f"H^2 of a group of order {G.order} exceeds h2_order_bound={budgets.h2_order_bound}")
        raise BudgetExceededError(f"|G|={G.order} exceeds h2_order_bound={budgets.h2_order_bound}")
    if G.order == 1 or m == 1:
        zero = TwoCocycle.zero(G, m)
        return CohomologyGroup(2, m, [], [zero], [], G, True, None)

    basis = _h2_basis(G, m)
    factors = basis.invariant_factors
    generators = []
    for i in range(len(factors)):
        unit = [0] * len(factors)
        unit[i] = 1
        generators.append(TwoCocycle(G, m, basis.representative(unit)))
    order = prod(factors)
    if enumerate and order <= budgets.class_enumeration_limit:
        representatives = [
            TwoCocycle(G, m, basis.representative(c)) for c in itertools.product(*(range(e) for e in factors))
        ]
        enumerated = True
    else:
        if enumerate:
            logging.info(f"|H^2| = {order} exceeds class_enumeration_limit, keeping generators only")
        representatives = list(generators)
        enumerated = False
    return CohomologyGroup(2, m, factors, representatives, generators, G, enumerated, basis)


# central extensions


@define(frozen=True, slots=False, eq=False)
class CentralExtension:
    """1 -> kernel -> total -> G -> 1 with the kernel cyclic of order m and central."""

    total: FiniteGroup
    kernel: Subgroup
    projection: Homomorphism
    cocycle: TwoCocycle

    @property
    def base(self) -> FiniteGroup:
        return self.projection.target

    def kernel_logarithm(self) -> np.ndarray:
        """log[x] = a when x is the a-th power of the kernel generator, -1 outside the kernel."""
        log = np.full(self.total.order, -1, dtype=np.int64)
        log[0] = 0
        if self.kernel.order > 1:
            z = self.kernel.generators[0]
            x = 0
            for a in range(self.kernel.order):
                log[x] = a
                x = int(self.total.table[x, z])
        return log

    def section_cocycle(self, section: Optional[Sequence[int]] = None) -> TwoCocycle:
        """
        Cocycle of a set-theoretic section g -> section[g] (by default the first
        element of each fibre), written in kernel coordinates.
        """
        G, Q = self.base, self.total
        if section is None:
            fibre_order = np.argsort(self.projection.images, kind="stable")
            firsts = np.searchsorted(self.projection.images[fibre_order], np.arange(G.order))
            section = fibre_order[firsts]
        section = np.asarray(section, dtype=np.int64)
        if section[0] != 0 or not np.array_equal(self.projection.images[section], np.arange(G.order)):
            raise InvalidCocycleError("the section must map e to the identity and g into the fibre over g")
        products = Q.table[np.ix_(section, section)]
        z = Q.table[products, Q.inverses[section[G.table]]]
        log = self.kernel_logarithm()[z]
        if (log < 0).any():
            raise InvalidCocycleError("section products leave the kernel")
        return TwoCocycle(G, self.kernel.order, log)


def extension_from_cocycle(G: FiniteGroup, m: int, f: TwoCocycle) -> CentralExtension:
    """Pairs (a, g) at index a*|G| + g with (a, g)(b, h) = (a + b + f(g, h), gh)."""
    m = validate_positive_int("m", m)
    if f.group is not G or f.modulus != m:
        raise InvalidCocycleError("the cocycle belongs to another group or modulus")
    if not f.is_normalized or not f.verify():
        logging.error(f"rejecting an invalid cocycle on {G.origin}")
        raise InvalidCocycleError("the values are not a normalized 2-cocycle")
    n = G.order
    check_order(m * n, what="central extension")
    a = np.arange(m, dtype=np.int64)
    first = (a[:, None, None, None] + a[None, None, :, None] + f.values[None, :, None, :]) % m
    table = first * n + G.table[None, :, None, :]
    hint = ((n,) if m > 1 else ()) + tuple(G.generators)
    total = FiniteGroup(table.reshape(m * n, m * n), origin=f"extension of {G.origin} by C({m})", generator_hint=hint)
    kernel = Subgroup(total, np.arange(m) * n, (n,) if m > 1 else ())
    projection = Homomorphism(total, G, np.arange(m * n) % n)
    return CentralExtension(total, kernel, projection, f)


def find_complement(ext: CentralExtension) -> Optional[Subgroup]:
    """A subgroup of the total group mapped isomorphically onto the base, by exhaustive search."""
    if ext.total.order > 128:
        raise BudgetExceededError(f"complement search is limited to total order 128, got {ext.total.order}")
    G, Q = ext.base, ext.total
    gens = list(G.generators)
    if not gens:
        return Subgroup(Q, (0,), ())
    fibres = [np.flatnonzero(ext.projection.images == g).tolist() for g in gens]
    for images in itertools.product(*fibres):
        fmap = extend_generator_map(G, Q, list(zip(gens, images)))
        if fmap is None or (fmap < 0).any():
            continue
        section = Homomorphism(G, Q, fmap)
        if section.verify():
            mask = np.zeros(Q.order, dtype=bool)
            mask[fmap] = True
            return subgroup_from_mask(Q, mask)
    return None


# restriction and splitting


def restrict_class(f: TwoCocycle, S: Subgroup) -> TwoCocycle:
    if S.parent is not f.group:
        raise SubgroupMismatchError("the subgroup does not belong to the cocycle's group")
    H, members = subgroup_as_group(S)
    return TwoCocycle(H, f.modulus, f.values[np.ix_(members, members)])


@define(frozen=True, slots=False, eq=False)
class _CoboundarySolver:
    """Solves u(h) + u(s) - u(hs) = f(h, s) over Z/m via U B V = D."""

    tree: _CayleyTree
    modulus: int
    U: np.ndarray
    diagonal: list

    def solves(self, f: np.ndarray) -> bool:
        k = len(self.tree.gens)
        phi = f[1:, list(self.tree.gens)].reshape((self.tree.group.order - 1) * k)
        b = matmul_mod(self.U, phi, self.modulus)
        for i, value in enumerate(b):
            d = self.diagonal[i] if i < len(self.diagonal) else 0
            if (d == 0 and value != 0) or (d and value % gcd(d, self.modulus)):
                return False
        return True


@per_group_cache
def _coboundary_solver(G: FiniteGroup, m: int) -> _CoboundarySolver:
    tree = _cayley_tree(G)
    B = _restricted_coboundaries(tree, m)
    result = smith_normal_form_mod(B, m, left=True)
    return _CoboundarySolver(tree, m, result.U, result.diagonal)


def is_split_class(f: TwoCocycle) -> bool:
    """True when f is a coboundary (the extension splits)."""
    G, m = f.group, f.modulus
    if not f.is_normalized:
        raise InvalidCocycleError("splitting is decided for normalized cocycles")
    if G.order == 1 or m == 1 or f.is_zero:
        return True
    return _coboundary_solver(G, m).solves(f.values)


def class_exponent(f: TwoCocycle) -> int:
    """Order of the class of f in H^2; it divides gcd(|G|, m)."""
    for d in sympy.divisors(gcd(f.group.order, f.modulus)):
        if is_split_class(f.scaled(d)):
            return int(d)
    raise InvalidCocycleError("class order does not divide gcd(|G|, m); the values are not a cocycle")


# closed forms and the bar complex


def tate_cyclic(n: int, coeff: Optional[int], degree: int) -> int:
    """Order of the cyclic group Ĥ^degree(C(n), coeff); coeff None means Z."""
    n = validate_positive_int("n", n)
    if coeff is None:
        return n if degree % 2 == 0 else 1
    m = validate_positive_int("m", coeff)
    return gcd(n, m)


def _bar_coboundary(G: FiniteGroup, d: int) -> np.ndarray:
    """Matrix of delta: C^(d-1) -> C^d of the normalized bar complex, trivial coefficients."""
    n = G.order
    r = n - 1
    cells = r**d * r ** (d - 1)
    budget = get_budgets().bar_cell_budget
    if cells > budget:
        logging.warning(f"bar coboundary in degree {d} for order {n} has {cells} cells, budget {budget}")
        raise BudgetExceededError(f"bar coboundary of {cells} cells exceeds bar_cell_budget={budget}")
    tuples = np.indices((r,) * d).reshape(d, -1).T + 1
    rows = np.arange(len(tuples))

    def encode(columns: list) -> np.ndarray:
        code = np.zeros(len(tuples), dtype=np.int64)
        for c in columns:
            code = code * r + (c - 1)
        return code

    M = np.zeros((r**d, r ** (d - 1)), dtype=np.int64)
    cols = [tuples[:, j] for j in range(d)]
    np.add.at(M, (rows, encode(cols[1:])), 1)
    for i in range(1, d):
        merged = G.table[cols[i - 1], cols[i]].astype(np.int64)
        keep = merged != 0
        code = encode(cols[: i - 1] + [np.where(keep, merged, 1)] + cols[i + 1 :])
        np.add.at(M, (rows[keep], code[keep]), (-1) ** i)
    np.add.at(M, (rows, encode(cols[:-1])), (-1) ** d)
    return M


@per_group_cache
def _integral_cohomology(G: FiniteGroup, d: int) -> tuple:
    """Invariant factors of H^d(G; Z), d >= 1: the torsion of the cokernel of delta^(d-1)."""
    if d == 1 or G.order == 1:
        return ()
    M = _bar_coboundary(G, d)
    divisors = smith_normal_form_mod(M, 2 * G.order).diagonal
    return tuple(chain_of(x for x in divisors if x > 1))


def bar_cohomology(G: FiniteGroup, coeff: Optional[int], degree: int) -> CohomologyGroup:
    """
    Ĥ^degree(G; Z) (coeff None) or Ĥ^degree(G; Z/coeff) for 0 <= degree <= 4 from the
    normalized bar complex. Degree 0 is the Tate group; Z/m coefficients follow from
    the integral groups in degrees d and d + 1 by universal coefficients.
    """
    if not 0 <= degree <= 4:
        raise BadParameterError(f"bar cohomology is computed in degrees 0..4, got {degree}")
    n = G.order
    if coeff is None:
        if degree == 0:
            factors = [n] if n > 1 else []
        else:
            factors = list(_integral_cohomology(G, degree))
    else:
        m = validate_positive_int("m", coeff)
        if degree == 0:
            factors = [gcd(n, m)] if gcd(n, m) > 1 else []
        else:
            parts = [gcd(a, m) for a in _integral_cohomology(G, degree)]
            parts += [gcd(b, m) for b in _integral_cohomology(G, degree + 1)]
            factors = chain_of(x for x in parts if x > 1)
    logging.debug(f"bar cohomology of {G.origin} in degree {degree}, coefficients {coeff or 'Z'}: {factors}")
    return CohomologyGroup(degree, coeff, factors, group=G)
