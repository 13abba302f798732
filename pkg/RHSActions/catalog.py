import logging
from functools import lru_cache
from math import gcd
from typing import Optional

import attrs
import numpy as np
import sympy
from attrs import define, field
from sympy.ntheory.modular import crt

from .errors import BadParameterError, CatalogVerificationError, UnrecognizedError
from .group_elements import FiniteGroup, Subgroup, closure_mask
from .groups import (
    center,
    check_order,
    commutator_subgroup,
    cyclic_group,
    direct_product,
    is_isomorphic,
    p_part,
    semidirect_cyclic,
    subgroup_as_group,
)
from .structure import classify_2group, is_cyclic, is_periodic, period, sylow_group
from .utils.budgets import get_budgets
from .utils.validators import validate_positive_int

doc = """
The period-four families: cyclic, binary dihedral and binary polyhedral groups,
SL(2, p), Milnor's Q(8n, k, l) and O(48, k, l), recognizers for these families and
an enumeration of all members up to a given order.
"""

MILNOR_TAGS = ("hopf", "type_A", "type_B", "type_C", "product_with_cyclic", "dihedral_product", "not_period_four")
STANDARD_FAMILIES = ("C", "D", "Q", "Q2k", "BT", "BO", "BI", "SL2")
TYPE_FILTERS = ("hopf", "A", "B", "C", "dihedral")


def _check_milnor_tag(instance, attribute, value):
    if value not in MILNOR_TAGS:
        raise ValueError(f"unknown Milnor tag {value!r}")


@define(frozen=True)
class MilnorType:
    """
    `family` names the recognised construction ("cyclic", "Q", "BT", "BO", "BI",
    "Q8nkl", "O48kl", "D"); for product_with_cyclic it holds the inner tag.
    """

    tag: str = field(validator=_check_milnor_tag)
    family: Optional[str] = None
    parameters: tuple = ()
    cofactor: int = 1

    def to_dict(self) -> dict:
        return {"tag": self.tag, "family": self.family, "parameters": list(self.parameters), "cofactor": self.cofactor}


# standard families


def _binary_dihedral(n: int) -> FiniteGroup:
    """Q(4n) = <x, y | x^2 = y^n, x y x^-1 = y^-1>; y^a x^b sits at index b*2n + a."""
    size = 2 * n
    a, b = np.divmod(np.arange(2 * size), size)[::-1]
    A, B = a[:, None], b[:, None]
    C, D = a[None, :], b[None, :]
    exponent = np.where(B == 0, A + C, A - C) + np.where((B == 1) & (D == 1), n, 0)
    table = ((B + D) % 2) * size + exponent % size
    return FiniteGroup(table, origin=f"Q({4 * n})", generator_hint=(1, size))


def _special_linear(p: int) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """SL(2, p) with the identity first, then matrices ordered by their entries; also returns entries and lookup."""
    r = np.arange(p)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a * d - b * c) % p == 1
    entries = np.stack([a, b, c, d], axis=1)[keep]
    codes = ((entries[:, 0] * p + entries[:, 1]) * p + entries[:, 2]) * p + entries[:, 3]
    identity_code = p**3 + 1
    ordering = sorted(range(len(codes)), key=lambda i: (codes[i] != identity_code, codes[i]))
    entries, codes = entries[ordering], codes[ordering]
    lookup = np.full(p**4, -1, dtype=np.int64)
    lookup[codes] = np.arange(len(codes))
    A, B, C, D = (entries[:, i].astype(np.int64) for i in range(4))
    pa = (A[:, None] * A[None, :] + B[:, None] * C[None, :]) % p
    pb = (A[:, None] * B[None, :] + B[:, None] * D[None, :]) % p
    pc = (C[:, None] * A[None, :] + D[:, None] * C[None, :]) % p
    pd = (C[:, None] * B[None, :] + D[:, None] * D[None, :]) % p
    table = lookup[((pa * p + pb) * p + pc) * p + pd]
    return FiniteGroup(table, origin=f"SL(2,{p})"), entries, lookup


def _binary_octahedral() -> FiniteGroup:
    """<s, t> in SL(2, 7) with s of order 6, t of order 8, st of order 4 and 48 elements."""
    G, _, _ = _special_linear(7)
    orders = G.element_orders
    for s in np.flatnonzero(orders == 6):
        for t in np.flatnonzero(orders == 8):
            if orders[G.table[s, t]] != 4:
                continue
            mask = closure_mask(G.table, [int(s), int(t)])
            if mask.sum() == 48:
                BO, _ = subgroup_as_group(Subgroup(G, np.flatnonzero(mask), (int(s), int(t))))
                return attrs.evolve(BO, origin="BO", perms=None)
    raise CatalogVerificationError("no binary octahedral subgroup found in SL(2,7)")


@lru_cache(maxsize=8)
def _standard(family: str, params: tuple) -> FiniteGroup:
    if family == "C":
        return cyclic_group(params[0])
    if family == "D":
        n = params[0]
        group = semidirect_cyclic(n, cyclic_group(2), {1: -1})
        return attrs.evolve(group, origin=f"D({2 * n})")
    if family == "Q":
        return _binary_dihedral(params[0])
    if family == "SL2":
        p = params[0]
        group, _, _ = _special_linear(p)
        return attrs.evolve(group, origin={3: "BT", 5: "BI"}.get(p, f"SL(2,{p})"))
    if family == "BO":
        return _binary_octahedral()
    raise BadParameterError(f"unknown family {family!r}")


def _built(family: str, params: tuple) -> FiniteGroup:
    sizes = {"C": lambda n: n, "D": lambda n: 2 * n, "Q": lambda n: 4 * n, "SL2": lambda p: p * (p * p - 1)}
    check_order(sizes[family](*params) if family in sizes else 48, what=f"{family}{params}")
    return _standard(family, params)


def make_standard(family: str, *params: int) -> FiniteGroup:
    """
    C(n) cyclic of order n, D(n) dihedral of order 2n, Q(n) binary dihedral of order 4n,
    Q2k(k) generalized quaternion of order 2^k, BT, BO, BI and SL2(p) for odd p <= 13.
    """
    expected = {"C": 1, "D": 1, "Q": 1, "Q2k": 1, "SL2": 1, "BT": 0, "BO": 0, "BI": 0}
    if family not in expected:
        logging.error(f"unknown standard family {family!r}")
        raise BadParameterError(f"unknown family {family!r}; choose from {STANDARD_FAMILIES}")
    if len(params) != expected[family]:
        raise BadParameterError(f"{family} takes {expected[family]} parameter(s), got {len(params)}")
    if family == "C":
        return _built("C", (validate_positive_int("n", params[0]),))
    if family == "D":
        return _built("D", (validate_positive_int("n", params[0], minimum=2),))
    if family == "Q":
        return _built("Q", (validate_positive_int("n", params[0]),))
    if family == "Q2k":
        k = validate_positive_int("k", params[0], minimum=3)
        return _built("Q", (2 ** (k - 2),))
    if family == "SL2":
        p = validate_positive_int("p", params[0], minimum=3)
        if not sympy.isprime(p) or p > 13:
            logging.error(f"SL(2, {p}) is outside the supported odd primes <= 13")
            raise BadParameterError(f"SL(2, p) needs an odd prime p <= 13, got {p}")
        return _built("SL2", (p,))
    if family == "BT":
        return _built("SL2", (3,))
    if family == "BI":
        return _built("SL2", (5,))
    return _built("BO", ())


# Milnor's families


def _pairwise_coprime(*values: int) -> bool:
    return all(gcd(a, b) == 1 for i, a in enumerate(values) for b in values[i + 1 :])


def _twist(k: int, l: int) -> int:
    """The unit r mod kl with r = -1 mod k and r = 1 mod l."""
    if k * l == 1:
        return 0
    r, _ = crt([k, l], [k - 1, 1 % l])
    return int(r) % (k * l)


def _verify_period_four(G: FiniteGroup, expected_order: int, two_part: int) -> None:
    problems = []
    if G.order != expected_order:
        problems.append(f"order {G.order} != {expected_order}")
    if not is_periodic(G):
        problems.append("not periodic")
    elif period(G).period != 4:
        problems.append(f"period {period(G).period} != 4")
    if two_part > 1:
        _, S = sylow_group(G, 2)
        tag = classify_2group(S).tag
        if S.order != two_part or tag != "generalized_quaternion":
            problems.append(f"Sylow 2-subgroup is {tag} of order {S.order}")
    if problems:
        logging.error(f"verification of {G.origin} failed: {problems}")
        raise CatalogVerificationError(f"{G.origin}: {'; '.join(problems)}")


def _check_q8nkl(n: int, k: int, l: int) -> tuple[int, int, int]:
    n = validate_positive_int("n", n)
    k = validate_positive_int("k", k)
    l = validate_positive_int("l", l)
    if not _pairwise_coprime(8 * n, k, l):
        logging.error(f"Q(8n,k,l) needs 8n={8 * n}, k={k}, l={l} pairwise coprime")
        raise BadParameterError(f"8n={8 * n}, k={k} and l={l} must be pairwise coprime")
    if not (k == l == 1 or (n >= 2 and k > l >= 1)):
        logging.error(f"Q(8n,k,l) needs k = l = 1, or n >= 2 and k > l >= 1; got {n=}, {k=}, {l=}")
        raise BadParameterError(f"Q({8 * n},{k},{l}) needs k = l = 1, or n >= 2 and k > l >= 1")
    return n, k, l


@lru_cache(maxsize=8)
def _q8nkl(n: int, k: int, l: int) -> FiniteGroup:
    Q = make_standard("Q", 2 * n)
    x, y = 4 * n, 1
    kl = k * l
    group = semidirect_cyclic(kl, Q, {x: _twist(k, l), y: kl - 1})
    return attrs.evolve(group, origin=f"Q({8 * n},{k},{l})")


def make_Q8nkl(n: int, k: int, l: int, verify: Optional[bool] = None) -> FiniteGroup:
    """
    Q(8n, k, l) = (Z/kl) x| Q(8n) with Q(8n) = <x, y | x^2 = y^2n, x y x^-1 = y^-1>;
    x acts on Z/kl by r (r = -1 mod k, r = 1 mod l) and y acts by -1.
    """
    n, k, l = _check_q8nkl(n, k, l)
    group = _q8nkl(n, k, l)
    if get_budgets().verify_catalog if verify is None else verify:
        _verify_period_four(group, 8 * n * k * l, p_part(8 * n, 2))
    return group


def _check_o48kl(k: int, l: int) -> tuple[int, int]:
    k = validate_positive_int("k", k)
    l = validate_positive_int("l", l)
    if not _pairwise_coprime(48, k, l):
        logging.error(f"O(48,k,l) needs 48, k={k}, l={l} pairwise coprime")
        raise BadParameterError(f"48, k={k} and l={l} must be pairwise coprime")
    return k, l


@lru_cache(maxsize=8)
def _o48kl(k: int, l: int) -> FiniteGroup:
    BO = make_standard("BO")
    BT = commutator_subgroup(BO)
    r = _twist(k, l)
    act = {g: (1 if g in BT else r) for g in BO.generators}
    group = semidirect_cyclic(k * l, BO, act)
    return attrs.evolve(group, origin=f"O(48,{k},{l})" if k * l > 1 else "BO")


def make_O48kl(k: int, l: int, verify: Optional[bool] = None) -> FiniteGroup:
    """O(48, k, l) = (Z/kl) x| BO; elements outside BT = [BO, BO] act by r, those of BT trivially."""
    k, l = _check_o48kl(k, l)
    group = _o48kl(k, l)
    if get_budgets().verify_catalog if verify is None else verify:
        _verify_period_four(group, 48 * k * l, 16)
    return group


def _with_cofactor(G: FiniteGroup, m: int) -> FiniteGroup:
    return G if m == 1 else direct_product(G, make_standard("C", m))


# recognition


def _hopf_candidates(n: int):
    """(family, parameters, cofactor, builder) for the constructible Hopf-list groups of order n."""
    for m in sympy.divisors(n):
        base = n // m
        if base % 4 == 0 and base >= 8 and gcd(base, m) == 1:
            yield "Q", (base,), m, lambda b=base, m=m: _with_cofactor(make_standard("Q", b // 4), m)
        for name, size in (("BT", 24), ("BO", 48), ("BI", 120)):
            if base == size and gcd(size, m) == 1:
                yield name, (), m, lambda name=name, m=m: _with_cofactor(make_standard(name), m)


def _dihedral_candidates(n: int, odd_only: bool):
    for m in sympy.divisors(n):
        base = n // m
        if base % 2 or base < 4 or gcd(base, m) != 1:
            continue
        if odd_only and (base // 2) % 2 == 0:
            continue
        yield base, m


def _q8nkl_candidates(n: int):
    """(n, k, l, m) with k > 1 and 8nklm = order."""
    if n % 8:
        return
    for m in sympy.divisors(n):
        rest = n // m
        for k in sympy.divisors(rest):
            for l in sympy.divisors(rest // k):
                if (rest // (k * l)) % 8:
                    continue
                a = rest // (k * l * 8)
                if k > l >= 1 and k > 1 and a >= 2 and _pairwise_coprime(8 * a, k, l, m):
                    yield a, k, l, m


def _o48kl_candidates(n: int):
    if n % 48:
        return
    rest = n // 48
    for k in sympy.divisors(rest):
        l = rest // k
        if k > 1 and _pairwise_coprime(48, k, l):
            yield k, l


def _matches(G: FiniteGroup, builder) -> bool:
    H = builder()
    if H.order != G.order:
        return False
    found, _ = is_isomorphic(G, H)
    return found


def milnor_type(G: FiniteGroup) -> MilnorType:
    """
    Period-four groups are matched by isomorphism against the constructible families
    of their order: cyclic, Hopf list, dihedral products, Q(8n,k,l) x C(m) and O(48,k,l).

    The Hopf list here is Q(4n) x C(m) and BT, BO, BI x C(m). The generalized families
    C(m) x| C(2^k) with k >= 3 and the extended binary tetrahedral groups of order
    8 * 3^k with k >= 2 are not constructed, so their members (e.g. C3 x| C8) raise
    UnrecognizedError.
    """
    check_order(G.order, get_budgets().isomorphism_order_bound, what="milnor_type input")
    report = period(G)
    if not report.periodic or 4 % report.period:
        return MilnorType("not_period_four")
    n = G.order
    if is_cyclic(G):
        return MilnorType("hopf", "cyclic", (n,))
    for family, params, m, builder in _hopf_candidates(n):
        if _matches(G, builder):
            return MilnorType("hopf", family, params, m)
    for base, m in _dihedral_candidates(n, odd_only=True):
        if _matches(G, lambda b=base, m=m: _with_cofactor(make_standard("D", b // 2), m)):
            return MilnorType("dihedral_product", "D", (base,), m)
    for a, k, l, m in _q8nkl_candidates(n):
        if _matches(G, lambda a=a, k=k, l=l, m=m: _with_cofactor(make_Q8nkl(a, k, l, verify=False), m)):
            inner = "type_A" if a % 2 else "type_B"
            if m > 1:
                return MilnorType("product_with_cyclic", inner, (a, k, l), m)
            return MilnorType(inner, "Q8nkl", (a, k, l))
    for k, l in _o48kl_candidates(n):
        if _matches(G, lambda k=k, l=l: make_O48kl(k, l, verify=False)):
            return MilnorType("type_C", "O48kl", (k, l))
    logging.warning(f"{G.origin} has period dividing 4 but matches no constructible family")
    raise UnrecognizedError(f"group of order {n} has period {report.period} but matches no constructible family")


def dihedral_times_cyclic_check(G: FiniteGroup) -> Optional[tuple[int, int]]:
    """(2n, m) when G is isomorphic to D(2n) x C(m) with gcd(2n, m) = 1."""
    n = G.order
    if n % 2:
        return None
    check_order(n, get_budgets().isomorphism_order_bound, what="dihedral product check")
    center_order = center(G).order
    derived_order = commutator_subgroup(G).order
    for base, m in _dihedral_candidates(n, odd_only=False):
        half = base // 2
        if base == 4:
            expected_center, expected_derived = 4 * m, 1
        elif half % 2:
            expected_center, expected_derived = m, half
        else:
            expected_center, expected_derived = 2 * m, half // 2
        if (center_order, derived_order) != (expected_center, expected_derived):
            continue
        if _matches(G, lambda b=base, m=m: _with_cofactor(make_standard("D", b // 2), m)):
            return base, m
    return None


# enumeration


@define(frozen=True)
class CatalogEntry:
    """A catalog member with its group specification; `milnor_tag` is the tag of its construction."""

    spec: str
    family: str
    parameters: tuple
    cofactor: int
    order: int
    milnor_tag: str

    def build(self) -> FiniteGroup:
        from .group_spec import build_group

        return build_group(self.spec)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "family": self.family,
            "parameters": list(self.parameters),
            "cofactor": self.cofactor,
            "order": self.order,
            "milnor_tag": self.milnor_tag,
        }


def _spec(base: str, m: int) -> str:
    return base if m == 1 else f"{base} x C({m})"


def catalog_entries(max_order: int, type_filter: Optional[str] = None) -> list[CatalogEntry]:
    """All catalog members of order <= max_order, sorted by order then specification."""
    max_order = validate_positive_int("max_order", max_order)
    if type_filter is not None and type_filter not in TYPE_FILTERS:
        raise BadParameterError(f"unknown type filter {type_filter!r}; choose from {TYPE_FILTERS}")
    entries = []

    def wanted(kind: str) -> bool:
        return type_filter is None or type_filter == kind

    if wanted("hopf"):
        for n in range(1, max_order + 1):
            entries.append(CatalogEntry(f"C({n})", "cyclic", (n,), 1, n, "hopf"))
        for base in range(8, max_order + 1, 4):
            for m in range(1, max_order // base + 1):
                if gcd(base, m) == 1:
                    entries.append(CatalogEntry(_spec(f"Q({base})", m), "Q", (base,), m, base * m, "hopf"))
        for name, size in (("BT", 24), ("BO", 48), ("BI", 120)):
            for m in range(1, max_order // size + 1):
                if gcd(size, m) == 1:
                    entries.append(CatalogEntry(_spec(name, m), name, (), m, size * m, "hopf"))
    if wanted("dihedral"):
        for base in range(6, max_order + 1, 4):
            for m in range(1, max_order // base + 1):
                if gcd(base, m) == 1:
                    entries.append(CatalogEntry(_spec(f"D({base})", m), "D", (base,), m, base * m, "dihedral_product"))
    if wanted("A") or wanted("B"):
        for a in range(2, max_order // 8 + 1):
            tag = "type_A" if a % 2 else "type_B"
            if not wanted(tag[-1]):
                continue
            for k in range(2, max_order // (8 * a) + 1):
                for l in range(1, k):
                    for m in range(1, max_order // (8 * a * k * l) + 1):
                        if _pairwise_coprime(8 * a, k, l, m):
                            spec = _spec(f"Q({8 * a},{k},{l})", m)
                            entries.append(CatalogEntry(spec, "Q8nkl", (a, k, l), m, 8 * a * k * l * m, tag))
    if wanted("C"):
        for k in range(2, max_order // 48 + 1):
            for l in range(1, max_order // (48 * k) + 1):
                if _pairwise_coprime(48, k, l):
                    entries.append(CatalogEntry(f"O(48,{k},{l})", "O48kl", (k, l), 1, 48 * k * l, "type_C"))
    entries.sort(key=lambda e: (e.order, e.spec))
    logging.info(f"catalog up to order {max_order} ({type_filter or 'all types'}): {len(entries)} entries")
    return entries
