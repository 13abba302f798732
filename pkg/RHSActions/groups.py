import logging
import weakref
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegreeMismatchError,
    InconsistentClassificationError,
    NotAnActionError,
    NotNormalError,
    OrderBoundExceededError,
    SubgroupMismatchError,
)
from .group_elements import FiniteGroup, Homomorphism, Permutation, Subgroup, closure_mask
from .utils.budgets import get_budgets
from .utils.validators import validate_positive_int, validate_prime

doc = """
Group-core operations: constructions (closure of permutations, direct and semidirect
products, quotients) and the standard subgroup queries (center, derived series, Sylow
subgroups, normalizers and centralizers) plus an exact isomorphism test.
"""


def check_order(order: int, order_bound: Optional[int] = None, what: str = "group") -> None:
    bound = get_budgets().closure_order_bound if order_bound is None else order_bound
    if order > bound:
        logging.warning(f"{what} of order {order} exceeds the order bound {bound}")
        raise OrderBoundExceededError(f"{what} of order {order} exceeds the order bound {bound}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int32), origin="C(1)")


def cyclic_group(n: int) -> FiniteGroup:
    n = validate_positive_int("n", n)
    check_order(n)
    arange = np.arange(n)
    table = np.add.outer(arange, arange) % n
    return FiniteGroup(table, origin=f"C({n})", generator_hint=(1,) if n > 1 else ())


def power(G: FiniteGroup, x: int, k: int) -> int:
    """x**k in G; negative k allowed."""
    k = int(k) % int(G.element_orders[x])
    result, base = 0, int(x)
    while k:
        if k & 1:
            result = G.mul(result, base)
        base = G.mul(base, base)
        k >>= 1
    return result


def group_from_permutations(gens: Sequence[Permutation], order_bound: Optional[int] = None) -> FiniteGroup:
    """
    Breadth-first closure of the generators. Elements are then ordered
    lexicographically by their image tuples, which puts the identity first.
    """
    gens = list(gens)
    bound = get_budgets().closure_order_bound if order_bound is None else order_bound
    origin = "perm[" + "; ".join("".join(str(c).replace(",", "") for c in g.cycles()) for g in gens) + "]"
    if not gens:
        return FiniteGroup(np.zeros((1, 1), dtype=np.int32), origin=origin, perms=np.zeros((1, 1), dtype=np.int64))
    degrees = {g.degree for g in gens}
    if len(degrees) != 1:
        logging.error(f"generators have different degrees: {sorted(degrees)}")
        raise DegreeMismatchError(f"generators have different degrees: {sorted(degrees)}")
    degree = degrees.pop()

    gen_arrays = [np.asarray(g.images, dtype=np.int64) for g in gens]
    identity = np.arange(degree, dtype=np.int64)
    elements = [identity]
    index = {identity.tobytes(): 0}
    parents = [(-1, -1)]
    right = [[] for _ in gens]
    i = 0
    while i < len(elements):
        x = elements[i]
        for s_idx, s in enumerate(gen_arrays):
            y = s[x]  # x then s
            key = y.tobytes()
            j = index.get(key)
            if j is None:
                j = len(elements)
                if j + 1 > bound:
                    logging.warning(f"closure exceeds the order bound {bound}")
                    raise OrderBoundExceededError(f"closure of {len(gens)} generators exceeds the order bound {bound}")
                elements.append(y)
                index[key] = j
                parents.append((i, s_idx))
            right[s_idx].append(j)
        i += 1

    n = len(elements)
    logging.info(f"closure of {len(gens)} permutations of degree {degree} has order {n}")
    right = [np.asarray(r, dtype=np.int64) for r in right]
    perms = np.vstack(elements)
    old_table = _table_from_right_actions(n, parents, right)

    order = np.lexsort(perms.T[::-1])
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    table = rank[old_table][np.ix_(order, order)]
    hint = tuple(int(rank[index[g.tobytes()]]) for g in gen_arrays if not (g == identity).all())
    return FiniteGroup(table, origin=origin, perms=perms[order], generator_hint=hint)


def _table_from_right_actions(n: int, parents: list, right: list) -> np.ndarray:
    """Column j of the table is the right action of e_j, composed along the BFS tree."""
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        p, s = parents[j]
        table[:, j] = right[s][table[:, p]]
    return table


# subgroups


def subgroup_from_mask(G: FiniteGroup, mask: np.ndarray) -> Subgroup:
    members = np.flatnonzero(mask)
    candidates = sorted((int(x) for x in members if x != 0), key=lambda x: (-int(G.element_orders[x]), x))
    gens = []
    current = closure_mask(G.table, gens)
    for x in candidates:
        if current[x]:
            continue
        gens.append(x)
        current = closure_mask(G.table, gens)
        if np.array_equal(current, mask):
            break
    return Subgroup(G, members, gens)


def subgroup_generated(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    elements = [int(x) for x in elements]
    mask = closure_mask(G.table, elements)
    return Subgroup(G, np.flatnonzero(mask), [x for x in elements if x != 0])


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, range(G.order), G.generators)


def subgroup_as_group(S: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """Re-index S as a standalone group; returns it with the embedding (local -> parent index)."""
    members = S.member_array
    local = np.full(S.parent.order, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    table = local[S.parent.table[np.ix_(members, members)]]
    perms = S.parent.perms[members] if S.parent.perms is not None else None
    hint = tuple(int(local[g]) for g in S.generators)
    group = FiniteGroup(table, origin=f"subgroup of order {S.order} of {S.parent.origin}", perms=perms, generator_hint=hint)
    return group, members


# products and quotients


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Pairs (g, h) are stored at index g*|H| + h."""
    nG, nH = G.order, H.order
    check_order(nG * nH, what="direct product")
    table = G.table.astype(np.int64)[:, None, :, None] * nH + H.table[None, :, None, :]
    hint = tuple(g * nH for g in G.generators) + tuple(H.generators)
    return FiniteGroup(table.reshape(nG * nH, nG * nH), origin=f"{G.origin} x {H.origin}", generator_hint=hint)


def direct_product_projections(G: FiniteGroup, H: FiniteGroup, GH: FiniteGroup) -> tuple[Homomorphism, Homomorphism]:
    arange = np.arange(GH.order)
    return Homomorphism(GH, G, arange // H.order), Homomorphism(GH, H, arange % H.order)


def semidirect_cyclic(n: int, G: FiniteGroup, act: dict) -> FiniteGroup:
    """
    (Z/n) x| G on pairs (a, g) stored at index a*|G| + g, with
    (a, g)(b, h) = (a + act(g) b, gh), so conjugation by (0, g) multiplies Z/n by act(g).

    `act` maps element indices generating G to units mod n; it is extended along the
    Cayley graph and checked on every edge.
    """
    n = validate_positive_int("n", n)
    m = G.order
    check_order(n * m, what="semidirect product")
    act = {int(g): int(u) % n for g, u in act.items()}
    for g, u in act.items():
        if not 0 <= g < m:
            raise NotAnActionError(f"{g} is not an element of the acting group")
        if gcd(u, n) != 1:
            raise NotAnActionError(f"{u} is not a unit mod {n}")
    gens = sorted(act)
    if not closure_mask(G.table, gens).all():
        raise NotAnActionError(f"the elements {gens} do not generate the acting group")

    phi = np.full(m, -1, dtype=np.int64)
    phi[0] = 1 % n
    frontier = np.array([0])
    while len(frontier):
        new = []
        for g in gens:
            y = G.table[frontier, g]
            fresh = phi[y] == -1
            phi[y[fresh]] = (phi[frontier[fresh]] * act[g]) % n
            new.append(y[fresh])
        frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
    for g in gens:
        if not np.array_equal(phi[G.table[:, g]], (phi * act[g]) % n):
            logging.error(f"action {act} does not respect the multiplication of {G.origin}")
            raise NotAnActionError(f"action {act} does not extend to a homomorphism into (Z/{n})^x")

    a = np.arange(n, dtype=np.int64)
    first = (a[:, None, None] + phi[None, :, None] * a[None, None, :]) % n
    table = first[:, :, :, None] * m + G.table[None, :, None, :]
    hint = ((m,) if n > 1 else ()) + tuple(G.generators)
    origin = f"C({n}) x| {G.origin}" if n > 1 else G.origin
    return FiniteGroup(table.reshape(n * m, n * m), origin=origin, generator_hint=hint)


def is_normal(G: FiniteGroup, N: Subgroup) -> bool:
    conj = G.table[G.table[:, N.member_array], G.inverses[:, None]]
    return bool(N.mask[conj].all())


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    if N.parent is not G:
        raise SubgroupMismatchError("the subgroup does not belong to this group")
    if not is_normal(G, N):
        logging.error(f"subgroup of order {N.order} is not normal in {G.origin}")
        raise NotNormalError(f"subgroup of order {N.order} is not normal")
    labels = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if labels[g] == -1:
            labels[G.table[g, N.member_array]] = len(reps)
            reps.append(g)
    table = labels[G.table[np.ix_(reps, reps)]]
    Q = FiniteGroup(table, origin=f"{G.origin} / <order {N.order}>")
    return Q, Homomorphism(G, Q, labels)


# characteristic subgroups


def center(G: FiniteGroup) -> Subgroup:
    return subgroup_from_mask(G, G.commuting.all(axis=1))


def commutator_subgroup(G: FiniteGroup, S: Optional[Subgroup] = None) -> Subgroup:
    """[S, S] for a subgroup S of G (all of G by default)."""
    members = np.arange(G.order) if S is None else S.member_array
    inv = G.inverses
    left = G.table[np.ix_(inv[members], inv[members])]
    right = G.table[np.ix_(members, members)]
    commutators = np.unique(G.table[left, right])
    return subgroup_from_mask(G, closure_mask(G.table, commutators))


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """G, G', G'', ... up to the first term that equals its own commutator subgroup."""
    series = [whole_group(G)]
    while True:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    logging.debug(f"derived series orders of {G.origin}: {[s.order for s in series]}")
    return series


def normalizer_mask(G: FiniteGroup, S: Subgroup) -> np.ndarray:
    conj = G.table[G.table[:, S.member_array], G.inverses[:, None]]
    return S.mask[conj].all(axis=1)


def centralizer_mask(G: FiniteGroup, S: Subgroup) -> np.ndarray:
    return G.commuting[:, S.member_array].all(axis=1)


def norm_cent(G: FiniteGroup, S: Subgroup) -> tuple[Subgroup, Subgroup]:
    if S.parent is not G:
        raise SubgroupMismatchError("the subgroup does not belong to this group")
    return subgroup_from_mask(G, normalizer_mask(G, S)), subgroup_from_mask(G, centralizer_mask(G, S))


def p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


def sylow(G: FiniteGroup, p: int) -> Subgroup:
    """
    Grow a p-subgroup P one step at a time: while P is not Sylow, some x in N(P)
    outside P has x^p in P, and P<x> is a p-subgroup of order p|P|.
    """
    p = validate_prime(p)
    target = p_part(G.order, p)
    gens = []
    if target == 1:
        return Subgroup(G, (0,), ())
    powers = G.powers(p)
    P = Subgroup(G, (0,), ())
    while P.order < target:
        candidates = normalizer_mask(G, P) & ~P.mask & P.mask[powers]
        hits = np.flatnonzero(candidates)
        if len(hits) == 0:
            raise InconsistentClassificationError(f"Sylow growth stalled at order {P.order} for p={p}")
        gens.append(int(hits[0]))
        mask = closure_mask(G.table, gens)
        P = Subgroup(G, np.flatnonzero(mask), gens)
    logging.debug(f"Sylow {p}-subgroup of {G.origin} has order {P.order}")
    return P


def central_cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    found = {}
    for z in center(G).members:
        members = tuple(np.flatnonzero(closure_mask(G.table, [z])).tolist())
        if members not in found:
            found[members] = Subgroup(G, members, (z,) if z != 0 else ())
    return sorted(found.values(), key=lambda S: (S.order, S.members))


# isomorphism testing

_invariant_cache = weakref.WeakKeyDictionary()


def _signatures(G: FiniteGroup) -> np.ndarray:
    """Per-element invariants preserved by isomorphisms: order, centralizer size, number of square roots."""
    roots = np.bincount(G.powers(2), minlength=G.order)
    return np.stack([G.element_orders, G.centralizer_sizes, roots], axis=1)


def _invariants(G: FiniteGroup) -> dict:
    cached = _invariant_cache.get(G)
    if cached is None:
        signatures = _signatures(G)
        profile = sorted(map(tuple, signatures.tolist()))
        cached = {
            "signatures": signatures,
            "profile": profile,
            "center": int(G.commuting.all(axis=1).sum()),
            "derived": commutator_subgroup(G).order,
        }
        _invariant_cache[G] = cached
    return cached


def extend_generator_map(G: FiniteGroup, H: FiniteGroup, assigned: list) -> Optional[np.ndarray]:
    """
    Extend the generator assignment [(g, h), ...] along the Cayley graph of <g, ...>;
    None if it is not an injective homomorphism on that subgroup.
    """
    fmap = np.full(G.order, -1, dtype=np.int64)
    used = np.zeros(H.order, dtype=bool)
    fmap[0] = 0
    used[0] = True
    queue = [0]
    Gt, Ht = G.table, H.table
    for x in queue:
        fx = fmap[x]
        for g, h in assigned:
            y = int(Gt[x, g])
            v = int(Ht[fx, h])
            fy = fmap[y]
            if fy == -1:
                if used[v]:
                    return None
                fmap[y] = v
                used[v] = True
                queue.append(y)
            elif fy != v:
                return None
    return fmap


def _words_agree(G: FiniteGroup, H: FiniteGroup, gs: list, hs: list) -> bool:
    """Orders of short words in the newest generator and each earlier one must agree."""
    g, h = gs[-1], hs[-1]
    for g0, h0 in zip(gs[:-1], hs[:-1]):
        words_g = (
            G.table[g0, g],
            G.table[g0, G.inverses[g]],
            G.table[G.table[g0, g0], g],
            G.table[g0, G.table[g, g]],
            G.table[G.table[G.inverses[g0], G.inverses[g]], G.table[g0, g]],
        )
        words_h = (
            H.table[h0, h],
            H.table[h0, H.inverses[h]],
            H.table[H.table[h0, h0], h],
            H.table[h0, H.table[h, h]],
            H.table[H.table[H.inverses[h0], H.inverses[h]], H.table[h0, h]],
        )
        for wg, wh in zip(words_g, words_h):
            if G.element_orders[wg] != H.element_orders[wh]:
                return False
    return True


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> tuple[bool, Optional[Homomorphism]]:
    bound = get_budgets().isomorphism_order_bound
    check_order(max(G.order, H.order), bound, what="isomorphism test input")
    if G is H:
        return True, Homomorphism(G, G, np.arange(G.order))
    if G.order != H.order:
        return False, None
    inv_G, inv_H = _invariants(G), _invariants(H)
    for key in ("profile", "center", "derived"):
        if inv_G[key] != inv_H[key]:
            logging.debug(f"isomorphism screening rejects on {key}")
            return False, None

    gens = list(G.generators)
    sig_G, sig_H = inv_G["signatures"], inv_H["signatures"]
    candidates = [np.flatnonzero((sig_H == sig_G[g]).all(axis=1)).tolist() for g in gens]

    def search(level: int, images: list) -> Optional[np.ndarray]:
        if level == len(gens):
            fmap = extend_generator_map(G, H, list(zip(gens, images)))
            if fmap is not None and (fmap >= 0).all():
                return fmap
            return None
        for h in candidates[level]:
            trial = images + [h]
            if not _words_agree(G, H, gens[: level + 1], trial):
                continue
            if level + 1 < len(gens) and extend_generator_map(G, H, list(zip(gens[: level + 1], trial))) is None:
                continue
            found = search(level + 1, trial)
            if found is not None:
                return found
        return None

    fmap = search(0, [])
    if fmap is None:
        return False, None
    return True, Homomorphism(G, H, fmap)
