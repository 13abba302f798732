import logging
from functools import cached_property, wraps
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np
from attrs import define, field

from .errors import InvalidPermutationError

doc = """
Data models of the engine: permutations, finite groups given by their multiplication
table, subgroups and homomorphisms. Groups are immutable after construction, so every
query below is safe to call from several threads.
"""


def _as_images(values) -> tuple:
    return tuple(int(v) for v in values)


def _as_sorted_images(values) -> tuple:
    return tuple(sorted(int(v) for v in values))


@define(frozen=True)
class Permutation:
    """A bijection of {0, ..., degree-1}; images[i] is the image of point i."""

    images: tuple = field(converter=_as_images)

    def __attrs_post_init__(self):
        n = len(self.images)
        if n < 1:
            raise InvalidPermutationError("a permutation needs a positive degree")
        if sorted(self.images) != list(range(n)):
            raise InvalidPermutationError(f"{self.images} is not a bijection of 0..{n - 1}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: Optional[int] = None) -> "Permutation":
        """Build from disjoint cycles such as [(0, 1, 2), (3, 4)]; points are 0-based."""
        cycles = [tuple(int(p) for p in c) for c in cycles]
        points = [p for c in cycles for p in c]
        if any(p < 0 for p in points):
            raise InvalidPermutationError(f"negative point in {cycles}")
        if len(points) != len(set(points)):
            raise InvalidPermutationError(f"cycles {cycles} are not disjoint")
        if degree is None:
            degree = max(points, default=0) + 1
        if points and max(points) >= degree:
            raise InvalidPermutationError(f"cycles {cycles} exceed degree {degree}")
        images = list(range(degree))
        for c in cycles:
            for i, p in enumerate(c):
                images[p] = c[(i + 1) % len(c)]
        return cls(images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # apply self first, then other
        if self.degree != other.degree:
            raise InvalidPermutationError("cannot multiply permutations of different degree")
        return Permutation(other.images[i] for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        result = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            p = self.images[start]
            while p != start:
                cycle.append(p)
                seen.add(p)
                p = self.images[p]
            result.append(tuple(cycle))
        return result


def _as_table(values) -> np.ndarray:
    table = np.array(values, dtype=np.int32)
    table.setflags(write=False)
    return table


def closure_mask(table: np.ndarray, gens: Iterable[int], start: Iterable[int] = (0,)) -> np.ndarray:
    """Boolean mask of the subgroup generated by gens (and the start elements)."""
    gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
    mask = np.zeros(table.shape[0], dtype=bool)
    frontier = np.unique(np.asarray(list(start) + [0], dtype=np.int64))
    mask[frontier] = True
    if len(gens) == 0:
        return mask
    while len(frontier):
        reached = np.unique(table[np.ix_(frontier, gens)].ravel())
        frontier = reached[~mask[reached]]
        mask[frontier] = True
    return mask


def per_group_cache(function):
    """
    Memoize function(G, *args) in G.memo. The entries live and die with G, also when
    the cached value refers back to G.
    """
    name = f"{function.__module__}.{function.__qualname__}"

    @wraps(function)
    def wrapper(G, *args):
        store = G.memo.setdefault(name, {})
        if args not in store:
            store[args] = function(G, *args)
        return store[args]

    return wrapper

@define(frozen=True, slots=False, eq=False)
class FiniteGroup:
    """
    A finite group on the element indices 0..n-1, given by its multiplication table:
    table[i, j] is the index of e_i * e_j and index 0 is the identity.

    Groups born from permutations keep them in `perms` (row i is element i); other
    constructions use the right regular representation as element carrier.
    """

    table: np.ndarray = field(converter=_as_table)
    origin: str = ""
    perms: Optional[np.ndarray] = None
    generator_hint: tuple = field(default=(), converter=_as_images)

    def __attrs_post_init__(self):
        n = self.table.shape[0]
        if self.table.ndim != 2 or self.table.shape[1] != n or n < 1:
            raise ValueError(f"multiplication table must be square and non-empty, got {self.table.shape}")
        arange = np.arange(n)
        if not (np.array_equal(self.table[0], arange) and np.array_equal(self.table[:, 0], arange)):
            raise ValueError("element 0 must be the identity of the multiplication table")
        if self.perms is not None:
            self.perms.setflags(write=False)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, origin={self.origin!r})"

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def powers(self, k: int) -> np.ndarray:
        """x**k for every element x, by vectorized square-and-multiply."""
        result = np.zeros(self.order, dtype=np.int64)
        base = np.arange(self.order, dtype=np.int64)
        k = int(k)
        if k < 0:
            base = self.inverses.astype(np.int64)
            k = -k
        while k:
            if k & 1:
                result = self.table[result, base].astype(np.int64)
            base = self.table[base, base].astype(np.int64)
            k >>= 1
        return result

    def conjugate(self, x: int, g: int) -> int:
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverses[g]])

    def element(self, i: int) -> Permutation:
        if self.perms is not None:
            return Permutation(self.perms[i])
        return Permutation(self.table[:, i])

    @cached_property
    def memo(self) -> dict:
        """Per-group store of derived data, see `per_group_cache`."""
        return {}

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1)
        inv.setflags(write=False)
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        arange = np.arange(n)
        current = arange.copy()
        k = 1
        while (orders == 0).any():
            k += 1
            current = self.table[current, arange]
            hit = (current == 0) & (orders == 0)
            orders[hit] = k
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(lcm(*(int(o) for o in np.unique(self.element_orders))))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def commuting(self) -> np.ndarray:
        """commuting[x, y] is True when x and y commute"""
        return self.table == self.table.T

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return self.commuting.sum(axis=1)

    @cached_property
    def generators(self) -> tuple:
        """A small deterministic generating set, greedy by decreasing element order."""
        if self.order == 1:
            return ()
        candidates = sorted(range(1, self.order), key=lambda x: (-int(self.element_orders[x]), x))
        gens = []
        mask = closure_mask(self.table, gens)
        for x in candidates:
            if mask[x]:
                continue
            gens.append(x)
            mask = closure_mask(self.table, gens)
            if mask.all():
                break
        logging.debug(f"generators of {self!r}: {gens}")
        return tuple(gens)

    def spot_check(self, samples: int = 64, seed: int = 0) -> bool:
        """Associativity and inverse laws on random element triples."""
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, self.order, size=(3, samples))
        left = self.table[self.table[a, b], c]
        right = self.table[a, self.table[b, c]]
        inverse_ok = (self.table[a, self.inverses[a]] == 0).all()
        return bool(np.array_equal(left, right) and inverse_ok)


@define(frozen=True, slots=False, eq=False)
class Subgroup:
    """Members are sorted element indices of the parent; generators witness them."""

    parent: FiniteGroup
    members: tuple = field(converter=_as_sorted_images)
    generators: tuple = field(default=(), converter=_as_images)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, parent={self.parent!r})"

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.members)] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def member_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def same_members(self, other: "Subgroup") -> bool:
        return self.parent is other.parent and self.members == other.members

    def verify(self) -> bool:
        """Closure, inverses, Lagrange and the generator witness."""
        members = self.member_array
        table = self.parent.table
        closed = self.mask[table[np.ix_(members, members)]].all()
        inverses = self.mask[self.parent.inverses[members]].all()
        lagrange = self.parent.order % self.order == 0
        generated = np.array_equal(closure_mask(table, self.generators), self.mask)
        return bool(closed and inverses and lagrange and generated)


@define(frozen=True, slots=False, eq=False)
class Homomorphism:
    """images[i] is the image in target of source element i."""

    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray = field(converter=lambda v: np.asarray(v, dtype=np.int64))

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def verify(self) -> bool:
        if self.images.shape != (self.source.order,) or self.images[0] != 0:
            return False
        if self.images.min() < 0 or self.images.max() >= self.target.order:
            return False
        img = self.images
        lhs = img[self.source.table]
        rhs = self.target.table[np.ix_(img, img)]
        return bool(np.array_equal(lhs, rhs))

    def kernel(self) -> Subgroup:
        from .groups import subgroup_from_mask

        return subgroup_from_mask(self.source, self.images == 0)

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.images)) == self.target.order

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.source.order
