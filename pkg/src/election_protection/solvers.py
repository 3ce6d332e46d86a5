"""Protection solvers: can the defender award voters so that every bribery fails?

``solve_bruteforce`` enumerates defense sets directly.  The two class
solvers enumerate defenses as counts per preference class, relying on the
dominance order: within a class, a heavier and cheaper voter is always at
least as useful to award (and to bribe) as a lighter, pricier one, so it
is enough to consider prefixes of the class sorted by dominance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable

from .attacks import (
    DEFAULT_MAX_N,
    DEFAULT_MAX_REWRITES,
    AttackCertificate,
    Check,
    constructive_attack_bruteforce,
    destructive_attack_best,
    destructive_attack_greedy_unit_price,
    rewrite_by_list_counts,
    top_bottom_list,
)
from .core import (
    Mode,
    ProtectionInstance,
    Voter,
    constructive_success,
    destructive_success,
    permutation_rank,
    tally,
)
from .errors import DomainError, GuardError
from .groups import count_vector_bound, count_vectors, identical_groups, pick, prefix_sums

DEFAULT_MAX_M = 4
UNDECIDED = "undecided at this scale"


@dataclass(frozen=True)
class PreferenceClass:
    class_id: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class DefenseCertificate:
    awarded: frozenset[int]
    cost: int


@dataclass(frozen=True)
class Verdict:
    protected: bool
    defense: DefenseCertificate | None
    counterattack: AttackCertificate | None
    solver: str


def dominates(a: Voter, b: Voter, a_index: int, b_index: int) -> bool:
    if a.pref != b.pref:
        return False
    ka = (a.weight, -a.price_award, -a.price_bribe)
    kb = (b.weight, -b.price_award, -b.price_bribe)
    if ka == kb:
        return b_index < a_index
    return all(x >= y for x, y in zip(ka, kb))


def dominance_key(instance: ProtectionInstance, j: int):
    v = instance.voter(j)
    return -v.weight, v.price_award, v.price_bribe, -j


def canonical_class_order(instance: ProtectionInstance, members: Iterable[int] | None = None) -> list[PreferenceClass]:
    """Voters grouped by preference list, classes by permutation rank, members by dominance."""
    members = range(1, instance.n + 1) if members is None else members
    by_pref: dict = {}
    for j in members:
        by_pref.setdefault(instance.voter(j).pref, []).append(j)
    classes = [
        PreferenceClass(permutation_rank(pref.order), tuple(sorted(js, key=lambda j: dominance_key(instance, j))))
        for pref, js in by_pref.items()
    ]
    return sorted(classes, key=lambda c: c.class_id)


def _defense_cost(instance, awarded) -> int:
    return sum(instance.voter(j).price_award for j in awarded)


def _certificate(instance, awarded) -> DefenseCertificate:
    awarded = frozenset(awarded)
    return DefenseCertificate(awarded, _defense_cost(instance, awarded))


def _run_defenses(instance, candidates, attack, solver) -> Verdict:
    """Try defenses in order; the first one no attack beats wins."""
    best, best_attack = None, None
    for awarded in candidates:
        cert = attack(awarded)
        if cert is None:
            return Verdict(True, _certificate(instance, awarded), None, solver)
        if best is None or _defense_cost(instance, awarded) > best.cost:
            best, best_attack = _certificate(instance, awarded), cert
    if best is None:
        # no feasible defense at all cannot happen: the empty set is always tried
        raise AssertionError("defense enumeration produced no candidates")
    return Verdict(False, best, best_attack, solver)


def _check_class_guard(instance, max_m):
    if instance.m > max_m:
        raise GuardError(f"m={instance.m} exceeds the class-solver cap of {max_m} ({factorial(instance.m)} classes)")


def inner_attack(instance: ProtectionInstance, *, max_n: int = DEFAULT_MAX_N):
    """Exact attack oracle for the instance's mode, as a function of the defense."""
    if instance.mode is Mode.DESTRUCTIVE:
        return lambda awarded: destructive_attack_best(instance, awarded)
    return lambda awarded: constructive_attack_bruteforce(instance, awarded, max_n=max_n)


def solve_bruteforce(instance: ProtectionInstance, *, max_n: int = DEFAULT_MAX_N) -> Verdict:
    """Exact solver over all defense sets, up to interchangeable voters.

    When protected, the reported defense is the smallest one (by size,
    then by sorted index tuple).  The enumeration is refused once it would
    exceed ``2**max_n`` defense configurations.
    """
    groups = identical_groups(instance, range(1, instance.n + 1))
    costs = [prefix_sums(instance.voter(j).price_award for j in g) for g in groups]
    F = instance.defense_budget
    if count_vector_bound(costs, F) > 2**max_n:
        raise GuardError(f"defense enumeration exceeds 2**{max_n} configurations")
    attack = inner_attack(instance, max_n=max_n)
    # awarding more never hurts, so the maximal defenses settle the verdict
    maximal = [pick(groups, k) for k in count_vectors(costs, F, maximal=True)]
    verdict = _run_defenses(instance, maximal, attack, "brute")
    if not verdict.protected:
        return verdict
    every = sorted((pick(groups, k) for k in count_vectors(costs, F)), key=lambda s: (len(s), s))
    return _run_defenses(instance, every, attack, "brute")


def _class_defenses(instance, classes, budget):
    members = [c.members for c in classes]
    costs = [prefix_sums(instance.voter(j).price_award for j in g) for g in members]
    for counts in count_vectors(costs, budget, maximal=True):
        yield pick(members, counts)


def solve_constm_destructive_weighted(instance: ProtectionInstance, *, max_m: int = DEFAULT_MAX_M) -> Verdict:
    """Destructive protection with unit prices and few candidates.

    Defenses are the heaviest voters of each preference class; each is
    checked with the top-B greedy attack.
    """
    if instance.mode is not Mode.DESTRUCTIVE:
        raise DomainError("solver handles destructive instances only")
    if not instance.unit_price:
        raise DomainError("solver needs every awarding and bribing price equal to 1")
    _check_class_guard(instance, max_m)
    classes = canonical_class_order(instance)
    return _run_defenses(
        instance,
        _class_defenses(instance, classes, instance.defense_budget),
        lambda awarded: destructive_attack_greedy_unit_price(instance, awarded),
        "constm-destructive",
    )


def _class_attack(instance, awarded, max_rewrites):
    """Attack search over cheapest-first class prefixes; unit weights, symmetric prices."""
    d, m = instance.designated, instance.m
    awarded = set(awarded)
    rest = [j for j in range(1, instance.n + 1) if j not in awarded]
    classes = canonical_class_order(instance, rest)
    members = [c.members for c in classes]
    costs = [prefix_sums(instance.voter(j).price_bribe for j in g) for g in members]
    targets = [c for c in range(1, m + 1) if c != d]
    for counts in count_vectors(costs, instance.attack_budget, maximal=True):
        bribed = pick(members, counts)
        cost = sum(instance.voter(j).price_bribe for j in bribed)
        if instance.mode is Mode.DESTRUCTIVE:
            for c in targets:
                lists = {j: top_bottom_list(m, c, d) for j in bribed}
                if destructive_success(tally(instance, lists), d):
                    return AttackCertificate(frozenset(bribed), lists, cost, c)
        else:
            if not bribed:
                if constructive_success(instance.no_bribery, d):
                    return AttackCertificate(frozenset(), {}, 0, d)
                continue
            lists = rewrite_by_list_counts(instance, bribed, max_rewrites)
            if lists is not None:
                return AttackCertificate(frozenset(bribed), lists, cost, d)
    return None


def solve_constm_symmetric_priced(
    instance: ProtectionInstance, *, max_m: int = DEFAULT_MAX_M, max_rewrites: int = DEFAULT_MAX_REWRITES
) -> Verdict:
    """Protection with unit weights and equal awarding/bribing prices, few candidates.

    Both the defense and the attack take the cheapest voters of each
    preference class; constructive rewrites are enumerated as counts over
    the lists that put the designated candidate first.
    """
    if not instance.unit_weight:
        raise DomainError("solver needs unit weights")
    if not instance.symmetric:
        raise DomainError("solver needs equal awarding and bribing prices per voter")
    _check_class_guard(instance, max_m)
    classes = canonical_class_order(instance)
    return _run_defenses(
        instance,
        _class_defenses(instance, classes, instance.defense_budget),
        lambda awarded: _class_attack(instance, awarded, max_rewrites),
        "constm-symmetric",
    )


def verify_defense_certificate(
    instance: ProtectionInstance, defense: DefenseCertificate, *, max_n: int = DEFAULT_MAX_N
) -> tuple[Check, AttackCertificate | None]:
    """Check a defense with the exact attack oracle.

    Returns ``(check, counterattack)``.  Raises ``GuardError`` when the
    attack question is beyond every exact oracle's reach.
    """
    awarded = frozenset(defense.awarded)
    if any(not 1 <= j <= instance.n for j in awarded):
        return Check(False, "unknown voter in defense"), None
    cost = _defense_cost(instance, awarded)
    if cost > instance.defense_budget:
        return Check(False, f"budget: cost {cost} exceeds F={instance.defense_budget}"), None
    if cost != defense.cost:
        return Check(False, f"stated cost {defense.cost} differs from actual {cost}"), None
    try:
        attack = inner_attack(instance, max_n=max_n)(awarded)
    except GuardError as exc:
        raise GuardError(f"{UNDECIDED}: {exc.message}") from exc
    if attack is not None:
        return Check(False, "an attack succeeds against this defense"), attack
    return Check(True, "no attack within budget"), None
