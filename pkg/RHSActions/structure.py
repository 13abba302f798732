import logging
from math import lcm, log
from typing import Optional

import numpy as np
import sympy
from attrs import define, field

from .errors import InconsistentClassificationError, NotA2GroupError
from .group_elements import FiniteGroup, Subgroup, closure_mask, per_group_cache
from .groups import norm_cent, subgroup_as_group, sylow
from .utils.validators import validate_prime

doc = """
Structural classification of finite groups: p-ranks, the maximal-class 2-group
taxonomy, periodicity of cohomology (checked along two independent routes) and the
cohomological period from the prime-local data.
"""

TWO_GROUP_TAGS = ("cyclic", "klein_four", "dihedral", "semidihedral", "generalized_quaternion", "other")

# klein four counts as the dihedral group of order 4
DIHEDRAL_TAGS = ("klein_four", "dihedral")


def _check_tag(instance, attribute, value):
    if value not in TWO_GROUP_TAGS:
        raise ValueError(f"unknown 2-group tag {value!r}")


@define(frozen=True)
class TwoGroupClass:
    tag: str = field(validator=_check_tag)
    order: int

    @property
    def is_dihedral(self) -> bool:
        return self.tag in DIHEDRAL_TAGS


@define(frozen=True)
class PrimeData:
    """Prime-local data: the Sylow subgroup's class, p-rank, |Φ_p| and p-period (None when not periodic at p)."""

    prime: int
    sylow_order: int
    sylow_class: str
    p_rank: int
    phi_order: int
    p_period: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "sylow_order": self.sylow_order,
            "sylow_class": self.sylow_class,
            "p_rank": self.p_rank,
            "phi_order": self.phi_order,
            "p_period": self.p_period,
        }


@define(frozen=True)
class PeriodReport:
    periodic: bool
    period: Optional[int]
    per_prime: dict = field(factory=dict)

    def __attrs_post_init__(self):
        if self.periodic != (self.period is not None):
            raise ValueError("a period is reported exactly for periodic groups")

    def to_dict(self) -> dict:
        return {
            "periodic": self.periodic,
            "period": self.period,
            "per_prime": {str(p): data.to_dict() for p, data in sorted(self.per_prime.items())},
        }


def is_cyclic(G: FiniteGroup) -> bool:
    # some element has order |G|; exponent == |G| also holds for D(6)
    return bool((G.element_orders == G.order).any())


@per_group_cache
def sylow_group(G: FiniteGroup, p: int) -> tuple[Subgroup, FiniteGroup]:
    """The Sylow p-subgroup of G, both as a subgroup and re-indexed as a group."""
    P = sylow(G, p)
    return P, subgroup_as_group(P)[0]


def _elementary_abelian_rank(P: FiniteGroup, p: int) -> int:
    """Largest rank of an elementary abelian subgroup of the p-group P."""
    order_p = np.flatnonzero(P.element_orders == p)
    if len(order_p) == 0:
        return 0
    if len(order_p) == p - 1:
        return 1
    if P.is_abelian:
        return round(log(len(order_p) + 1, p))

    ceiling = round(log(P.order, p))
    best = 1
    seen = set()

    def grow(mask: np.ndarray, rank: int, candidates: np.ndarray):
        nonlocal best
        best = max(best, rank)
        for x in candidates:
            if best == ceiling:
                return
            if mask[x]:
                continue
            bigger = closure_mask(P.table, np.flatnonzero(mask).tolist() + [int(x)])
            key = bigger.tobytes()
            if key in seen:
                continue
            seen.add(key)
            remaining = candidates[~bigger[candidates] & P.commuting[x, candidates]]
            if int(bigger.sum()) + len(remaining) < p ** (best + 1):
                best = max(best, rank + 1)
                continue
            grow(bigger, rank + 1, remaining)

    for x in order_p:
        start = closure_mask(P.table, [int(x)])
        key = start.tobytes()
        if key in seen:
            continue
        seen.add(key)
        grow(start, 1, order_p[~start[order_p] & P.commuting[x, order_p]])
    return best


def p_rank(G: FiniteGroup, p: int) -> int:
    """Largest r such that (Z/p)^r embeds in G, searched inside a Sylow p-subgroup."""
    p = validate_prime(p)
    if G.order % p:
        return 0
    _, P = sylow_group(G, p)
    rank = _elementary_abelian_rank(P, p)
    logging.debug(f"{p}-rank of {G.origin} is {rank}")
    return rank


def classify_2group(P: FiniteGroup) -> TwoGroupClass:
    """
    Maximal-class 2-groups are recognised through a cyclic subgroup <r> of index 2
    and the exponent j of s r s^-1 = r^j for s outside <r>.
    """
    n = P.order
    if n & (n - 1):
        logging.error(f"classify_2group needs a 2-group, got order {n}")
        raise NotA2GroupError(f"order {n} is not a power of 2")
    if is_cyclic(P):
        return TwoGroupClass("cyclic", n)
    if n == 4:
        return TwoGroupClass("klein_four", n)

    half = n // 2
    candidates = np.flatnonzero(P.element_orders == half)
    if len(candidates) == 0:
        return TwoGroupClass("other", n)
    r = int(candidates[0])
    cyclic = closure_mask(P.table, [r])
    logarithm = np.full(n, -1, dtype=np.int64)
    x = 0
    for i in range(half):
        logarithm[x] = i
        x = int(P.table[x, r])
    outside = np.flatnonzero(~cyclic)
    s = int(outside[0])
    j = int(logarithm[P.conjugate(r, s)])
    involution_outside = bool((P.element_orders[outside] == 2).any())

    if j == half - 1:
        if involution_outside:
            tag = "dihedral"
        elif (P.element_orders[outside] == 4).all():
            tag = "generalized_quaternion"
        else:
            tag = "other"
    elif n >= 16 and j == half // 2 - 1 and involution_outside:
        tag = "semidihedral"
    else:
        tag = "other"
    logging.debug(f"2-group {P.origin} of order {n} classified as {tag}")
    return TwoGroupClass(tag, n)


def _sylow_class(G: FiniteGroup, p: int) -> str:
    _, P = sylow_group(G, p)
    if p == 2:
        return classify_2group(P).tag
    return "cyclic" if is_cyclic(P) else "other"


def _unique_subgroup_of_order_p(G: FiniteGroup, p: int) -> bool:
    """p-rank one: the Sylow p-subgroup has exactly p - 1 elements of order p."""
    _, P = sylow_group(G, p)
    return int((P.element_orders == p).sum()) == p - 1


def is_periodic(G: FiniteGroup) -> bool:
    """
    Periodic cohomology, decided twice: every p-rank is 1, and every odd Sylow is
    cyclic with Syl_2 cyclic or generalized quaternion.
    """
    primes = sympy.primefactors(G.order)
    by_rank = all(_unique_subgroup_of_order_p(G, p) for p in primes)
    by_sylow = all(_sylow_class(G, p) in (("cyclic", "generalized_quaternion") if p == 2 else ("cyclic",)) for p in primes)
    if by_rank != by_sylow:
        logging.error(f"periodicity routes disagree for {G.origin}: rank {by_rank}, Sylow {by_sylow}")
        raise InconsistentClassificationError(f"rank route says {by_rank}, Sylow route says {by_sylow}")
    return by_rank


def prime_data(G: FiniteGroup, p: int) -> PrimeData:
    P, _ = sylow_group(G, p)
    sylow_class = _sylow_class(G, p)
    rank = p_rank(G, p)
    normalizer, centralizer = norm_cent(G, P)
    phi_order = normalizer.order // centralizer.order
    if sylow_class == "cyclic":
        p_period = 2 if p == 2 else 2 * phi_order
    elif p == 2 and sylow_class == "generalized_quaternion":
        p_period = 4
    else:
        p_period = None
    return PrimeData(p, P.order, sylow_class, rank, phi_order, p_period)


def period(G: FiniteGroup) -> PeriodReport:
    """Cohomological period as the lcm of the p-periods; the trivial group has period 2."""
    per_prime = {p: prime_data(G, p) for p in sympy.primefactors(G.order)}
    periodic = is_periodic(G)
    if not periodic:
        return PeriodReport(False, None, per_prime)
    value = lcm(2, *(data.p_period for data in per_prime.values()))
    logging.info(f"{G.origin} is periodic with period {value}")
    return PeriodReport(True, value, per_prime)
