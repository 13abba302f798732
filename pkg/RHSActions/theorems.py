import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from math import gcd, prod
from typing import Optional

import numpy as np
import sympy
from attrs import define, field
from sympy.ntheory import n_order

from .catalog import MilnorType, catalog_entries, milnor_type
from .cohomology import (
    CentralExtension,
    TwoCocycle,
    class_exponent,
    extension_from_cocycle,
    h2_trivial,
    is_split_class,
    restrict_class,
)
from .errors import (
    BadInvariantFactorsError,
    BadPrimesError,
    BudgetExceededError,
    EvenDError,
    NotAPGroupError,
    NotCentralCyclicError,
    RHSActionsError,
    WrongTypeError,
)
from .group_elements import FiniteGroup, Homomorphism, Subgroup
from .groups import (
    center,
    central_cyclic_subgroups,
    check_order,
    cyclic_group,
    derived_series,
    is_isomorphic,
    p_part,
    quotient,
    subgroup_generated,
)
from .structure import DIHEDRAL_TAGS, PeriodReport, classify_2group, is_cyclic, is_periodic, p_rank, period, sylow_group
from .utils.budgets import get_budgets
from .utils.validators import validate_positive_int

doc = """
Verdicts on free homologically trivial actions on rational homology 3-spheres:
homological constraints on G, the search for periodic central extensions, the
central-quotient obstruction for the groups of types B and C, the constructive
routes through quotients of Hopf-list groups, the p-group dichotomy, the
conditional transfer for type A quotients and the numeric Swan-subgroup criteria.
"""

CONSTRAINT_RULES = (
    "rank_bound",
    "p_part_not_cyclic",
    "syl2_not_cyclic_or_dihedral",
    "sylp_odd_not_cyclic",
    "syl_not_cyclic_or_quaternion",
    "pgroup_dichotomy",
)

VERDICT_TAGS = ("cannot_act", "necessary_conditions_met", "no_obstruction_found", "can_act_by_construction")


def _check_rule(instance, attribute, value):
    if value not in CONSTRAINT_RULES:
        raise ValueError(f"unknown constraint rule {value!r}")


def _check_verdict_tag(instance, attribute, value):
    if value not in VERDICT_TAGS:
        raise ValueError(f"unknown verdict tag {value!r}")


@define(frozen=True)
class ConstraintViolation:
    rule: str = field(validator=_check_rule)
    prime: Optional[int] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"rule": self.rule, "prime": self.prime, "detail": self.detail}


@define(frozen=True)
class H1Requirement:
    """Shape forced on H_1(M; Z): cyclic, of order coprime to `coprime_to`, and/or fixed p-parts."""

    cyclic: bool = False
    coprime_to: Optional[int] = None
    prime_parts: dict = field(factory=dict)

    def describe(self) -> str:
        parts = []
        if self.cyclic:
            parts.append("cyclic")
        if self.coprime_to is not None:
            parts.append(f"order coprime to {self.coprime_to}")
        for p, factors in sorted(self.prime_parts.items()):
            parts.append(f"{p}-part " + (" + ".join(f"Z/{d}" for d in factors) or "0"))
        return ", ".join(parts)

    def to_dict(self) -> dict:
        return {
            "cyclic": self.cyclic,
            "coprime_to": self.coprime_to,
            "prime_parts": {str(p): list(f) for p, f in sorted(self.prime_parts.items())},
            "description": self.describe(),
        }


@define(frozen=True, slots=False, eq=False)
class QuotientCertificate:
    """G is isomorphic to cover / subgroup with the subgroup central and cyclic."""

    spec: str
    family: str
    parameters: tuple
    subgroup_order: int
    isomorphism: Optional[Homomorphism] = field(default=None, repr=False)
    cover: Optional[FiniteGroup] = field(default=None, repr=False)
    subgroup: Optional[Subgroup] = field(default=None, repr=False)

    def verify(self, G: FiniteGroup) -> bool:
        """Re-check centrality, cyclicity and the isomorphism onto G."""
        if self.cover is None or self.subgroup is None or self.isomorphism is None:
            return False
        Z = center(self.cover)
        if not Z.mask[self.subgroup.member_array].all():
            return False
        S = self.subgroup
        if S.order > 1 and not (self.cover.element_orders[S.member_array] == S.order).any():
            return False
        iso = self.isomorphism
        return (
            iso.target is G
            and iso.source.order * S.order == self.cover.order
            and iso.verify()
            and iso.is_injective
            and iso.is_surjective
        )

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "family": self.family,
            "parameters": list(self.parameters),
            "cover_order": self.cover.order if self.cover is not None else None,
            "subgroup_order": self.subgroup_order,
        }


@define(frozen=True, slots=False, eq=False)
class Verdict:
    """
    The answer of one route. `cannot_act` always carries a violation or a
    certificate; `can_act_by_construction` always carries a certificate or a
    constructive condition.
    """

    tag: str = field(validator=_check_verdict_tag)
    route: str
    violations: list = field(factory=list)
    certificate: Optional[QuotientCertificate] = None
    conditions: list = field(factory=list)
    required_h1: Optional[H1Requirement] = None
    notes: list = field(factory=list)

    def __attrs_post_init__(self):
        if self.tag == "cannot_act" and not (self.violations or self.certificate):
            raise ValueError("cannot_act needs a violation or a certificate")
        if self.tag == "can_act_by_construction" and not (self.certificate or self.conditions):
            raise ValueError("can_act_by_construction needs a certificate or a construction")

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "route": self.route,
            "violations": [v.to_dict() for v in self.violations],
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
            "conditions": list(self.conditions),
            "required_h1": self.required_h1.to_dict() if self.required_h1 is not None else None,
            "notes": list(self.notes),
        }


@define(frozen=True, slots=False, eq=False)
class PeriodicExtensionWitness:
    """A central extension 1 -> C(m) -> Q -> G -> 1 with Q periodic of period 2 or 4."""

    m: int
    cocycle: TwoCocycle = field(repr=False)
    extension: CentralExtension = field(repr=False)
    period: int
    nonsplit_primes: tuple
    coordinates: tuple

    @property
    def total(self) -> FiniteGroup:
        return self.extension.total

    def order_p_elements_in_kernel(self, p: int) -> bool:
        """True when every element of order p of the total group lies in the kernel."""
        Q = self.total
        return bool(self.extension.kernel.mask[Q.element_orders == p].all())

    def to_dict(self) -> dict:
        Q = self.total
        return {
            "m": self.m,
            "coordinates": list(self.coordinates),
            "period": self.period,
            "nonsplit_primes": list(self.nonsplit_primes),
            "total_order": Q.order,
            "total_involutions": int((Q.element_orders == 2).sum()),
            "class_exponent": class_exponent(self.cocycle),
        }


@define(frozen=True)
class SwanChecks:
    d: int
    a: int
    b: int
    mod8_ok: bool
    square_ok: bool
    root: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "a": self.a,
            "b": self.b,
            "mod8_ok": self.mod8_ok,
            "square_ok": self.square_ok,
            "root": self.root,
        }


# homological constraints


def _validate_h1(h1) -> list[int]:
    try:
        factors = [int(d) for d in h1]
    except (TypeError, ValueError):
        raise BadInvariantFactorsError(f"invariant factors must be integers, got {h1!r}")
    for i, d in enumerate(factors):
        if d < 2:
            logging.error(f"invariant factor {d} at position {i} is not >= 2")
            raise BadInvariantFactorsError(f"invariant factors must be >= 2, got {factors}")
        if i and d % factors[i - 1]:
            logging.error(f"{factors[i - 1]} does not divide {d}")
            raise BadInvariantFactorsError(f"{factors} is not a divisor chain d1 | d2 | ...")
    return factors


def homology_constraints(G: FiniteGroup, h1) -> list[ConstraintViolation]:
    """
    Every rule violated by G under the hypothesis that it acts freely and
    homologically trivially on a rational homology 3-sphere M with H_1(M; Z) of the
    given invariant factors. Violations are accumulated, never short-circuited.
    """
    factors = _validate_h1(h1)
    h1_order = prod(factors)
    violations = []
    for p in sympy.primefactors(G.order):
        rank = p_rank(G, p)
        if rank > 2:
            violations.append(ConstraintViolation("rank_bound", p, f"elementary abelian {p}-subgroup of rank {rank} > 2"))

        _, P = sylow_group(G, p)
        tag = classify_2group(P).tag if p == 2 else ("cyclic" if is_cyclic(P) else "other")
        divides_h1 = h1_order % p == 0
        if divides_h1:
            p_factors = [d for d in factors if d % p == 0]
            if len(p_factors) > 1:
                parts = [p_part(d, p) for d in p_factors]
                violations.append(
                    ConstraintViolation("p_part_not_cyclic", p, f"{p}-part of H_1 is {parts}, not cyclic")
                )
        if p == 2 and divides_h1 and tag not in ("cyclic",) + DIHEDRAL_TAGS:
            violations.append(
                ConstraintViolation("syl2_not_cyclic_or_dihedral", 2, f"Sylow 2-subgroup is {tag} of order {P.order}")
            )
        if p != 2 and tag != "cyclic":
            violations.append(
                ConstraintViolation("sylp_odd_not_cyclic", p, f"Sylow {p}-subgroup of order {P.order} is not cyclic")
            )
        if not divides_h1 and tag not in ("cyclic", "generalized_quaternion"):
            violations.append(
                ConstraintViolation(
                    "syl_not_cyclic_or_quaternion",
                    p,
                    f"{p} does not divide |H_1| and the Sylow {p}-subgroup is {tag} of order {P.order}",
                )
            )
    logging.debug(f"homology constraints for {G.origin} with H_1 {factors}: {[v.rule for v in violations]}")
    return violations


# periodic central extensions


def _order_p_subgroups(G: FiniteGroup, p: int) -> list[Subgroup]:
    found = {}
    for x in np.flatnonzero(G.element_orders == p):
        S = subgroup_generated(G, [int(x)])
        found.setdefault(S.members, S)
    return [found[k] for k in sorted(found)]


def _nonsplit_primes(G: FiniteGroup, m: int, f: TwoCocycle) -> tuple:
    """Primes p | gcd(m, |G|) at which f restricts non-trivially to every subgroup of order p."""
    primes = []
    for p in sympy.primefactors(gcd(m, G.order)):
        if all(not is_split_class(restrict_class(f, S)) for S in _order_p_subgroups(G, p)):
            primes.append(p)
    return tuple(primes)


def _class_coordinates(factors: list, limit: int) -> list:
    """Every class of H^2 when |H^2| <= limit, otherwise only the generating classes."""
    if prod(factors) <= limit:
        return [tuple(c) for c in itertools.product(*(range(e) for e in factors))]
    logging.warning(f"|H^2| = {prod(factors)} exceeds class_enumeration_limit={limit}; searching the generators only")
    return [tuple(int(i == j) for j in range(len(factors))) for i in range(len(factors))]


def search_is_truncated(G: FiniteGroup, m: int) -> bool:
    """True when periodic_extension_search(G, m) only visits the generating classes."""
    if m == 1 or G.order == 1:
        return False
    return h2_trivial(G, m).order > get_budgets().class_enumeration_limit


def periodic_extension_search(G: FiniteGroup, m: int) -> list[PeriodicExtensionWitness]:
    """
    Central extensions of G by Z/m, one per class of H^2(G, Z/m) (only the generating
    classes beyond class_enumeration_limit), whose total group has periodic
    cohomology of period 2 or 4. The kernel of each witness is the
    designated central Z/m by construction.
    """
    m = validate_positive_int("m", m)
    budgets = get_budgets()
    if m * G.order > budgets.extension_order_bound:
        logging.warning(f"extensions of order {m * G.order} exceed extension_order_bound={budgets.extension_order_bound}")
        raise BudgetExceededError(
            f"total order {m * G.order} exceeds extension_order_bound={budgets.extension_order_bound}"
        )

    if m == 1:
        classes = [((), TwoCocycle.zero(G, 1))]
    else:
        H2 = h2_trivial(G, m)
        coords = _class_coordinates(H2.invariant_factors, budgets.class_enumeration_limit)
        classes = ((c, H2.cocycle(c)) for c in coords)

    witnesses = []
    searched = 0
    for coordinates, f in classes:
        searched += 1
        extension = extension_from_cocycle(G, m, f)
        if not is_periodic(extension.total):
            continue
        report = period(extension.total)
        if report.period not in (2, 4):
            continue
        witness = PeriodicExtensionWitness(m, f, extension, report.period, _nonsplit_primes(G, m, f), coordinates)
        witnesses.append(witness)
    logging.info(f"periodic extensions of {G.origin} by C({m}): {len(witnesses)} of {searched} classes")
    return witnesses


# quotient searches over the catalog


def _quotient_certificate(G: FiniteGroup, entry) -> Optional[QuotientCertificate]:
    if entry.order % G.order:
        return None
    index = entry.order // G.order
    Q = entry.build()
    for S in central_cyclic_subgroups(Q):
        if S.order != index:
            continue
        quot, _ = quotient(Q, S)
        found, iso = is_isomorphic(quot, G)
        if found:
            return QuotientCertificate(entry.spec, entry.family, entry.parameters, S.order, iso, Q, S)
    return None


def _search_bound(order_bound: Optional[int]) -> int:
    if order_bound is None:
        return get_budgets().quotient_search_order_bound
    return validate_positive_int("order_bound", order_bound)


def central_quotient_obstruction(G: FiniteGroup, order_bound: Optional[int] = None) -> Verdict:
    """
    cannot_act when G is a quotient of a type B or C group (possibly times a coprime
    cyclic group) of order <= order_bound by a central cyclic subgroup, the trivial
    subgroup included; no_obstruction_found otherwise.
    """
    bound = _search_bound(order_bound)
    check_order(G.order, get_budgets().isomorphism_order_bound, what="obstruction search input")
    # central 2-elements of a type B or C group lie in the centre Z/2 of its quaternion Sylow 2-subgroup
    if p_part(G.order, 2) < 8:
        return Verdict(
            "no_obstruction_found",
            "central_quotient_obstruction",
            notes=[f"|G|_2 = {p_part(G.order, 2)} < 8, so G is no central quotient of a type B or C group"],
        )
    entries = catalog_entries(bound, "B") + catalog_entries(bound, "C")
    entries.sort(key=lambda e: (e.order, e.spec))
    for entry in entries:
        if entry.order % G.order or p_part(entry.order // G.order, 2) > 2:
            continue
        certificate = _quotient_certificate(G, entry)
        if certificate is not None:
            logging.info(f"{G.origin} is {entry.spec} modulo a central cyclic subgroup of order {certificate.subgroup_order}")
            return Verdict(
                "cannot_act",
                "central_quotient_obstruction",
                certificate=certificate,
                notes=[f"G is {entry.spec} modulo a central cyclic subgroup of order {certificate.subgroup_order}"],
            )
    return Verdict(
        "no_obstruction_found",
        "central_quotient_obstruction",
        notes=[f"no type B or C group of order <= {bound} has a central cyclic quotient isomorphic to G"],
    )


def hopf_quotient_construction(G: FiniteGroup, order_bound: Optional[int] = None) -> Verdict:
    """
    can_act_by_construction when G = Q/H for a Hopf-list group Q and a central cyclic
    H: the action of G on S^3/H is free and homologically trivial, with H_1 = H.
    """
    bound = _search_bound(order_bound)
    check_order(G.order, get_budgets().isomorphism_order_bound, what="Hopf quotient search input")
    if is_cyclic(G):
        C = cyclic_group(G.order)
        _, iso = is_isomorphic(C, G)
        certificate = QuotientCertificate(f"C({G.order})", "cyclic", (G.order,), 1, iso, C, Subgroup(C, (0,), ()))
        return Verdict(
            "can_act_by_construction",
            "hopf_quotient",
            certificate=certificate,
            conditions=["G acts freely and orthogonally on S^3"],
        )
    for entry in catalog_entries(bound, "hopf"):
        if entry.family == "cyclic" or entry.order % G.order:
            continue
        certificate = _quotient_certificate(G, entry)
        if certificate is not None:
            h = certificate.subgroup_order
            return Verdict(
                "can_act_by_construction",
                "hopf_quotient",
                certificate=certificate,
                conditions=[f"G acts on M = S^3/H for H central cyclic of order {h} in {entry.spec}, H_1(M; Z) = Z/{h}"],
            )
    return Verdict(
        "no_obstruction_found",
        "hopf_quotient",
        notes=[f"no Hopf-list group of order <= {bound} has a central cyclic quotient isomorphic to G"],
    )


# p-groups and type A


def p_group_verdict(P: FiniteGroup) -> Verdict:
    """
    A p-group acts freely and homologically trivially with non-trivial p-torsion in
    H_1 exactly when it is cyclic, or p = 2, H_1 has 2-part Z/2 and P is dihedral
    (the Klein four group counting as dihedral of order 4).
    """
    factors = sympy.factorint(P.order)
    if len(factors) > 1:
        logging.error(f"p_group_verdict needs a group of prime-power order, got {P.order}")
        raise NotAPGroupError(f"order {P.order} is not a prime power")
    p = next(iter(factors), None)
    if is_cyclic(P):
        return Verdict(
            "can_act_by_construction",
            "pgroup_dichotomy",
            conditions=[f"cyclic group of order {P.order}: quotient of a cyclic group acting on S^3"],
            notes=[] if p is None else [f"any non-trivial cyclic {p}-part of H_1 is realized"],
        )
    tag = classify_2group(P).tag if p == 2 else "other"
    if tag in DIHEDRAL_TAGS:
        return Verdict(
            "can_act_by_construction",
            "pgroup_dichotomy",
            conditions=[f"dihedral group of order {P.order} = Q({2 * P.order}) / centre, acting on S^3 / Z(Q)"],
            required_h1=H1Requirement(cyclic=False, prime_parts={2: [2]}),
        )
    violation = ConstraintViolation(
        "pgroup_dichotomy", p, f"{p}-group of order {P.order} ({tag}) is neither cyclic nor dihedral"
    )
    return Verdict(
        "cannot_act",
        "pgroup_dichotomy",
        violations=[violation],
        notes=["with non-trivial p-torsion in H_1"],
    )


def _is_type_a(kind: MilnorType) -> bool:
    return kind.tag == "type_A" or (kind.tag == "product_with_cyclic" and kind.family == "type_A")


def type_a_quotient_transfer(Q: FiniteGroup, T: Subgroup) -> Verdict:
    """
    Conditional verdict: if the type A group Q acts freely and homologically trivially
    on M, then Q/T does so on M/T. Existence for Q itself is never asserted.
    """
    if T.parent is not Q:
        raise NotCentralCyclicError("the subgroup does not belong to Q")
    return _transfer_verdict(Q, T, milnor_type(Q))


def _transfer_verdict(Q: FiniteGroup, T: Subgroup, kind: MilnorType) -> Verdict:
    if not _is_type_a(kind):
        logging.error(f"type_a_quotient_transfer needs a type A group, got {kind.tag}")
        raise WrongTypeError(f"{Q.origin} has Milnor type {kind.tag}, not type_A")
    if not center(Q).mask[T.member_array].all():
        raise NotCentralCyclicError(f"subgroup of order {T.order} is not central")
    if T.order > 1 and not (Q.element_orders[T.member_array] == T.order).any():
        raise NotCentralCyclicError(f"subgroup of order {T.order} is not cyclic")

    requirement = H1Requirement(cyclic=True, coprime_to=Q.order)
    certificate = QuotientCertificate(Q.origin, kind.family, tuple(kind.parameters), T.order, None, Q, T)
    return Verdict(
        "necessary_conditions_met",
        "type_a_transfer",
        certificate=certificate,
        conditions=[
            f"if {Q.origin} acts freely and homologically trivially on M (so H_1(M; Z) = Z/d with gcd(d, {Q.order}) = 1), "
            f"then the quotient of order {Q.order // T.order} acts freely and homologically trivially on M/T"
        ],
        required_h1=requirement,
        notes=["conditional: existence for type A groups is open"],
    )


# numeric Swan-subgroup criteria


def swan_numeric_checks(d: int, a: int, b: int) -> SwanChecks:
    d = validate_positive_int("d", d)
    a = validate_positive_int("a", a)
    b = validate_positive_int("b", b)
    if d % 2 == 0:
        logging.error(f"swan_numeric_checks needs odd d, got {d}")
        raise EvenDError(f"d must be odd, got {d}")
    modulus = 8 * a * b
    target = d % modulus
    root = next((r for r in range(modulus) if r * r % modulus == target), None)
    return SwanChecks(d, a, b, d % 8 in (1, 7), root is not None, root)


def swan_top_component_vanishes(p: int, q: int) -> str:
    """
    'vanishes' when (p, q) = (+-3, +-3) mod 8, or p = 1 mod 8, q = +-3 mod 8 and 2
    has odd order mod p; 'unknown' otherwise.
    """
    for name, value in (("p", p), ("q", q)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 3 or not sympy.isprime(int(value)):
            logging.error(f"{name}={value!r} is not an odd prime")
            raise BadPrimesError(f"{name}={value!r} is not an odd prime")
    p, q = int(p), int(q)
    if p <= q:
        raise BadPrimesError(f"need p > q, got p={p}, q={q}")
    if p % 8 in (3, 5) and q % 8 in (3, 5):
        return "vanishes"
    if p % 8 == 1 and q % 8 in (3, 5) and n_order(2, p) % 2 == 1:
        return "vanishes"
    return "unknown"


# classification


@define(frozen=True, slots=False, eq=False)
class ClassificationReport:
    """Everything known about G; fields that failed hold None and an entry in `errors`."""

    origin: str
    order: int
    structure: Optional[dict]
    period: Optional[PeriodReport]
    milnor: Optional[MilnorType]
    constraints: dict
    extensions: dict
    obstruction: Optional[Verdict]
    hopf_quotient: Optional[Verdict]
    p_group: Optional[Verdict]
    type_a_transfer: Optional[Verdict]
    required_h1: Optional[H1Requirement]
    verdict: Verdict
    search: dict
    errors: dict

    def to_dict(self) -> dict:
        def maybe(value):
            return value.to_dict() if value is not None else None

        return {
            "origin": self.origin,
            "order": self.order,
            "structure": self.structure,
            "period": maybe(self.period),
            "milnor_type": maybe(self.milnor),
            "homology_constraints": {
                name: [v.to_dict() for v in found] if found is not None else None
                for name, found in self.constraints.items()
            },
            "periodic_extensions": {
                str(m): [w.to_dict() for w in found] if found is not None else None
                for m, found in sorted(self.extensions.items())
            },
            "central_quotient_obstruction": maybe(self.obstruction),
            "hopf_quotient_construction": maybe(self.hopf_quotient),
            "p_group_verdict": maybe(self.p_group),
            "type_a_transfer": maybe(self.type_a_transfer),
            "required_h1": maybe(self.required_h1),
            "verdict": self.verdict.to_dict(),
            "search": dict(self.search),
            "errors": {k: dict(v) for k, v in sorted(self.errors.items())},
        }


def admissible_moduli(order: int, m_bound: int) -> list[int]:
    """1 and every m <= m_bound whose prime factors all divide `order`."""
    primes = set(sympy.primefactors(order))
    return [m for m in range(1, m_bound + 1) if set(sympy.primefactors(m)) <= primes]


def _structure_data(G: FiniteGroup) -> dict:
    orders, counts = np.unique(G.element_orders, return_counts=True)
    return {
        "order": G.order,
        "exponent": G.exponent,
        "is_abelian": G.is_abelian,
        "is_cyclic": is_cyclic(G),
        "center_order": center(G).order,
        "derived_series": [S.order for S in derived_series(G)],
        "element_orders": {str(int(o)): int(c) for o, c in zip(orders, counts)},
    }


def _obstructed_everywhere(trivial: list, generic: list) -> list:
    """
    The rules are local at each prime and only see whether that prime divides |H_1|,
    so a prime violated both with and without torsion is violated under every H_1.
    """
    both = {v.prime for v in trivial} & {v.prime for v in generic}
    return [v for v in generic if v.prime in both]


def _overall_verdict(fields: dict, m_bound: int) -> Verdict:
    obstruction = fields.get("obstruction")
    if obstruction is not None and obstruction.tag == "cannot_act":
        return obstruction
    hopf = fields.get("hopf_quotient")
    if hopf is not None and hopf.tag == "can_act_by_construction":
        return hopf
    p_group = fields.get("p_group")
    if p_group is not None and p_group.tag == "can_act_by_construction":
        return p_group

    constraints = fields.get("constraints") or {}
    trivial, generic = constraints.get("trivial"), constraints.get("generic")
    if trivial is not None and generic is not None:
        everywhere = _obstructed_everywhere(trivial, generic)
        if everywhere:
            return Verdict("cannot_act", "homology_constraints", violations=everywhere)

    extensions = fields.get("extensions") or {}
    found = sorted(m for m, witnesses in extensions.items() if witnesses)
    notes = [f"periodic extensions searched for m <= {m_bound}; larger m unknown beyond bound"]
    transfer = fields.get("type_a_transfer")
    if transfer is not None:
        return Verdict(
            "necessary_conditions_met",
            "type_a_transfer",
            certificate=transfer.certificate,
            conditions=list(transfer.conditions),
            required_h1=transfer.required_h1,
            notes=notes + list(transfer.notes),
        )
    if found:
        return Verdict(
            "necessary_conditions_met",
            "periodic_extension_search",
            conditions=[f"periodic central extensions exist for m in {found}"],
            notes=notes,
        )
    return Verdict("no_obstruction_found", "periodic_extension_search", notes=notes)


def classify(G: FiniteGroup, threads: int = 1) -> ClassificationReport:
    """
    Run every structural computation and verdict route on G. A failing field is
    recorded in `errors` and the remaining fields are still computed; the report
    does not depend on the order in which threads finish.
    """
    threads = validate_positive_int("threads", threads)
    budgets = get_budgets()
    n = G.order
    m_bound = budgets.m_bound if budgets.m_bound is not None else max(n, 1)
    radical = prod(sympy.primefactors(n))
    hypotheses = {"trivial": [], "generic": [radical] if n > 1 else []}
    moduli = admissible_moduli(n, m_bound)

    tasks = {
        "structure": lambda: _structure_data(G),
        "period": lambda: period(G),
        "milnor": lambda: milnor_type(G),
        "obstruction": lambda: central_quotient_obstruction(G),
        "hopf_quotient": lambda: hopf_quotient_construction(G),
    }
    for name, h1 in hypotheses.items():
        tasks[f"constraints.{name}"] = lambda h1=h1: homology_constraints(G, h1)
    for m in moduli:
        tasks[f"extensions.{m}"] = lambda m=m: periodic_extension_search(G, m)
    if n > 1 and len(sympy.factorint(n)) == 1:
        tasks["p_group"] = lambda: p_group_verdict(G)

    def guarded(name: str):
        try:
            return name, tasks[name](), None
        except RHSActionsError as e:
            logging.warning(f"classify {G.origin}: field {name} failed with {e.tag}: {e}")
            return name, None, {"tag": e.tag, "message": str(e)}

    names = list(tasks)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(guarded, names))
    else:
        results = [guarded(name) for name in names]

    values, errors = {}, {}
    for name, value, error in results:
        values[name] = value
        if error is not None:
            errors[name] = error

    constraints = {name: values[f"constraints.{name}"] for name in hypotheses}
    extensions = {m: values[f"extensions.{m}"] for m in moduli}
    milnor = values["milnor"]

    transfer = None
    required_h1 = None
    if milnor is not None and milnor.tag in ("type_A", "type_B", "type_C", "product_with_cyclic"):
        inner = milnor.family if milnor.tag == "product_with_cyclic" else milnor.tag
        if inner in ("type_A", "type_B", "type_C"):
            required_h1 = H1Requirement(cyclic=True, coprime_to=n)
        if inner == "type_A":
            try:
                transfer = _transfer_verdict(G, Subgroup(G, (0,), ()), milnor)
            except RHSActionsError as e:
                errors["type_a_transfer"] = {"tag": e.tag, "message": str(e)}

    fields = {
        "obstruction": values["obstruction"],
        "hopf_quotient": values["hopf_quotient"],
        "p_group": values.get("p_group"),
        "constraints": constraints,
        "extensions": extensions,
        "type_a_transfer": transfer,
    }
    verdict = _overall_verdict(fields, m_bound)
    logging.info(f"classification of {G.origin}: {verdict.tag} via {verdict.route}")
    return ClassificationReport(
        origin=G.origin,
        order=n,
        structure=values["structure"],
        period=values["period"],
        milnor=milnor,
        constraints=constraints,
        extensions=extensions,
        obstruction=values["obstruction"],
        hopf_quotient=values["hopf_quotient"],
        p_group=values.get("p_group"),
        type_a_transfer=transfer,
        required_h1=required_h1,
        verdict=verdict,
        search={
            "m_bound": m_bound,
            "moduli": moduli,
            "hypotheses": {k: list(v) for k, v in hypotheses.items()},
            "quotient_search_order_bound": budgets.quotient_search_order_bound,
            "class_enumeration_limit": budgets.class_enumeration_limit,
            "generators_only": [m for m in moduli if extensions[m] is not None and search_is_truncated(G, m)],
        },
        errors=errors,
    )
