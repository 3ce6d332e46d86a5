"""Attack oracles for a fixed set of awarded (protected) voters.

The destructive oracles work in the score-gap view: bribing voter ``j`` and
moving ``c_i`` to the top and the designated candidate to the bottom
widens the gap ``W(c_i) - W(designated)`` by ``w_j * delta_ij`` where

    delta_ij = alpha_1 - alpha[pos_j(c_i)] + alpha[pos_j(designated)] - alpha_m

and no rewrite can widen it more.  A destructive attack therefore exists
iff for some competitor ``i`` a budget-feasible set of unprotected voters
has ``sum w_j * delta_ij > W(designated) - W(c_i)``.

``destructive_attack_bruteforce_sim`` does not use that shortcut: it
replays tallies for explicit rewrites and serves as the reference oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Callable, Iterable, Mapping

from .core import (
    Mode,
    PreferenceList,
    ProtectionInstance,
    ScoringRule,
    Voter,
    all_rankings_with_top,
    constructive_success,
    destructive_success,
    pref_excess,
    tally,
)
from .errors import E_MODE, E_STRUCT, DomainError, GuardError, ProtectionError
from .groups import count_vector_bound, count_vectors, group_voters, identical_groups, pick, prefix_sums, private_owners, score_signature

DEFAULT_BUDGET_CAP = 10**7
DEFAULT_MAX_N = 20
DEFAULT_MAX_REWRITES = 200_000


@dataclass(frozen=True)
class DeltaVector:
    candidates: tuple[int, ...]
    entries: tuple[int, ...]

    def __getitem__(self, c: int) -> int:
        return self.entries[self.candidates.index(c)]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class LambdaVector:
    """No-bribery totals, split into competitors and the designated candidate."""

    competitors: Mapping[int, int]
    designated: int
    designated_score: int


@dataclass(frozen=True)
class AttackCertificate:
    bribed: frozenset[int]
    new_prefs: Mapping[int, PreferenceList] = field(default_factory=dict)
    cost: int = 0
    target: int | None = None


@dataclass(frozen=True)
class Check:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def delta_vector(voter: Voter, rule: ScoringRule, designated: int, m: int) -> DeltaVector:
    ex = pref_excess(voter.pref, rule)
    lift = rule.spread + ex.get(designated, 0)
    cands = tuple(c for c in range(1, m + 1) if c != designated)
    return DeltaVector(cands, tuple(lift - ex.get(c, 0) for c in cands))


def lambda_vector(instance: ProtectionInstance) -> LambdaVector:
    scores = instance.no_bribery.scores
    d = instance.designated
    return LambdaVector({c: s for c, s in scores.items() if c != d}, d, scores[d])


def top_bottom_list(m: int, top: int, bottom: int) -> PreferenceList:
    """``top`` first, ``bottom`` last, everyone else ascending in between."""
    middle = [c for c in range(1, m + 1) if c != top and c != bottom]
    return PreferenceList((top, *middle, bottom), m)


def _require_mode(instance: ProtectionInstance, mode: Mode):
    if instance.mode is not mode:
        raise ProtectionError(E_MODE, f"oracle needs a {mode.value} instance, got {instance.mode.value}")


def _defense_set(instance: ProtectionInstance, defense: Iterable[int]) -> frozenset[int]:
    defense = frozenset(defense)
    bad = [j for j in defense if not 1 <= j <= instance.n]
    if bad:
        raise ProtectionError(E_STRUCT, f"defense names unknown voters {sorted(bad)}")
    return defense


def _bribable(instance: ProtectionInstance, defense: frozenset[int]) -> list[int]:
    B = instance.attack_budget
    return [j for j, v in enumerate(instance.voters, 1) if j not in defense and v.price_bribe <= B]


def _coordinates(instance: ProtectionInstance) -> list[int]:
    """Competitors in ascending order; candidates nobody scores above bottom collapse to one."""
    d = instance.designated
    hot = set()
    for ex in instance.excess:
        hot.update(ex)
    out, cold_seen = [], False
    for c in range(1, instance.m + 1):
        if c == d:
            continue
        if c not in hot:
            if cold_seen:
                continue
            cold_seen = True
        out.append(c)
    return out


def gain_ceiling(instance: ProtectionInstance, voters: list[int]) -> int:
    """Upper bound on the gap any affordable subset of ``voters`` can add, for every competitor."""
    d, spread = instance.designated, instance.rule.spread
    prices = sorted(instance.voter(j).price_bribe for j in voters)
    k, spent = 0, 0
    for p in prices:
        if spent + p > instance.attack_budget:
            break
        spent += p
        k += 1
    tops = sorted((instance.voter(j).weight * (spread + instance.excess[j - 1].get(d, 0)) for j in voters), reverse=True)
    return sum(tops[:k])


def _destructive_certificate(instance, bribed, target) -> AttackCertificate:
    bribed = frozenset(bribed)
    lst = top_bottom_list(instance.m, target, instance.designated)
    cost = sum(instance.voter(j).price_bribe for j in bribed)
    return AttackCertificate(bribed, {j: lst for j in sorted(bribed)}, cost, target)


def _gap_values(instance: ProtectionInstance, voters: list[int], i: int) -> list[int]:
    d = instance.designated
    spread = instance.rule.spread
    ex = instance.excess
    return [instance.voter(j).weight * (spread - ex[j - 1].get(i, 0) + ex[j - 1].get(d, 0)) for j in voters]


def knapsack_max(values: list[int], prices: list[int], budget: int, cap: int = DEFAULT_BUDGET_CAP):
    """0/1 knapsack by DP over spent budget.  Returns ``(best, chosen_positions)``."""
    items = [k for k, v in enumerate(values) if v > 0 and prices[k] <= budget]
    limit = min(budget, sum(prices[k] for k in items))
    if limit > cap:
        raise GuardError(f"knapsack budget {limit} exceeds cap {cap}", "B")
    best = [0] * (limit + 1)
    took = []
    for k in items:
        v, p = values[k], prices[k]
        row = bytearray(limit + 1)
        for b in range(limit, p - 1, -1):
            cand = best[b - p] + v
            if cand > best[b]:
                best[b] = cand
                row[b] = 1
        took.append(row)
    top = max(best)
    b = best.index(top)
    chosen = []
    for pos in range(len(items) - 1, -1, -1):
        if took[pos][b]:
            chosen.append(items[pos])
            b -= prices[items[pos]]
    return top, sorted(chosen)


def destructive_attack_best(
    instance: ProtectionInstance, defense: Iterable[int] = (), *, budget_cap: int = DEFAULT_BUDGET_CAP
) -> AttackCertificate | None:
    """Exact destructive oracle: one knapsack per competitor."""
    _require_mode(instance, Mode.DESTRUCTIVE)
    defense = _defense_set(instance, defense)
    lam = instance.no_bribery.scores
    d = instance.designated
    avail = _bribable(instance, defense)
    prices = [instance.voter(j).price_bribe for j in avail]
    ceiling = gain_ceiling(instance, avail)
    for i in _coordinates(instance):
        need = lam[d] - lam[i]
        if need < 0:
            return _destructive_certificate(instance, (), i)
        if ceiling <= need:
            continue
        values = _gap_values(instance, avail, i)
        if sum(v for v in values if v > 0) <= need:
            continue
        best, chosen = knapsack_max(values, prices, instance.attack_budget, budget_cap)
        if best > need:
            return _destructive_certificate(instance, (avail[k] for k in chosen), i)
    return None


def weighted_gap(weight: int, delta: int) -> int:
    return weight * delta


def destructive_attack_greedy_unit_price(
    instance: ProtectionInstance,
    defense: Iterable[int] = (),
    *,
    contribution: Callable[[int, int], int] = weighted_gap,
) -> AttackCertificate | None:
    """Destructive oracle for unit bribing prices: top-B voters per competitor.

    Voters are ranked by ``contribution(weight, delta)``, which is the
    weighted gap ``w * delta`` (the exact objective).
    """
    _require_mode(instance, Mode.DESTRUCTIVE)
    if any(v.price_bribe != 1 for v in instance.voters):
        raise DomainError("greedy oracle needs every bribing price equal to 1")
    defense = _defense_set(instance, defense)
    lam = instance.no_bribery.scores
    d = instance.designated
    avail = [j for j in range(1, instance.n + 1) if j not in defense]
    k = min(instance.attack_budget, len(avail))
    ex = instance.excess
    spread = instance.rule.spread
    ceiling = gain_ceiling(instance, avail)
    for i in _coordinates(instance):
        if instance.no_bribery.scores[i] + ceiling <= lam[d]:
            continue
        ranked = sorted(
            avail,
            key=lambda j: (
                -contribution(instance.voter(j).weight, spread - ex[j - 1].get(i, 0) + ex[j - 1].get(d, 0)),
                j,
            ),
        )
        top = ranked[:k]
        gain = sum(_gap_values(instance, top, i))
        if lam[i] + gain > lam[d]:
            return _destructive_certificate(instance, top, i)
    return None


def destructive_attack_count_knapsack(
    instance: ProtectionInstance, defense: Iterable[int] = (), *, max_distinct: int = 4
) -> AttackCertificate | None:
    """Destructive oracle for unit weights and rules with few distinct scores.

    Gap values then take few distinct values, so per competitor it is
    enough to guess how many voters of each value are bribed; within a
    value class the cheapest voters are taken.
    """
    _require_mode(instance, Mode.DESTRUCTIVE)
    if not instance.unit_weight:
        raise DomainError("count-knapsack oracle needs unit weights")
    if instance.rule.distinct_values > max_distinct:
        raise DomainError(
            f"rule has {instance.rule.distinct_values} distinct scores, more than the cap {max_distinct}"
        )
    defense = _defense_set(instance, defense)
    lam = instance.no_bribery.scores
    d = instance.designated
    B = instance.attack_budget
    avail = _bribable(instance, defense)
    ceiling = gain_ceiling(instance, avail)
    for i in _coordinates(instance):
        need = lam[d] - lam[i]
        if need < 0:
            return _destructive_certificate(instance, (), i)
        if ceiling <= need:
            continue
        by_value: dict[int, list[int]] = {}
        for j, g in zip(avail, _gap_values(instance, avail, i)):
            if g > 0:
                by_value.setdefault(g, []).append(j)
        values = sorted(by_value, reverse=True)
        members = [sorted(by_value[g], key=lambda j: (instance.voter(j).price_bribe, j)) for g in values]
        costs = [prefix_sums(instance.voter(j).price_bribe for j in grp) for grp in members]
        best_gain, best_counts = 0, (0,) * len(values)
        for counts in count_vectors(costs, B, maximal=True):
            gain = sum(k * g for k, g in zip(counts, values))
            if gain > best_gain:
                best_gain, best_counts = gain, counts
        if best_gain > need:
            return _destructive_certificate(instance, pick(members, best_counts), i)
    return None


def destructive_attack_bruteforce_sim(
    instance: ProtectionInstance, defense: Iterable[int] = (), *, max_n: int = DEFAULT_MAX_N
) -> AttackCertificate | None:
    """Reference destructive oracle: every bribe set, explicit rewrites, full tallies.

    Rewrites are restricted to lists with some competitor on top and the
    designated candidate at the bottom.
    """
    _require_mode(instance, Mode.DESTRUCTIVE)
    defense = _defense_set(instance, defense)
    avail = _bribable(instance, defense)
    if len(avail) > max_n:
        raise GuardError(f"{len(avail)} bribable voters exceed the guard of {max_n}")
    d, m, B = instance.designated, instance.m, instance.attack_budget
    targets = [c for c in range(1, m + 1) if c != d]
    lists = {c: top_bottom_list(m, c, d) for c in targets}
    cheapest = sorted(instance.voter(j).price_bribe for j in avail)
    for size in range(len(avail) + 1):
        if sum(cheapest[:size]) > B:
            break
        for combo in combinations(avail, size):
            if sum(instance.voter(j).price_bribe for j in combo) > B:
                continue
            for c in targets:
                t = tally(instance, {j: lists[c] for j in combo})
                if destructive_success(t, d):
                    return _destructive_certificate(instance, combo, c)
    return None


def _scores_without(instance: ProtectionInstance, removed: Iterable[int]) -> dict[int, int]:
    """Tally with the given voters taken out entirely."""
    scores = dict(instance.no_bribery.scores)
    low = instance.rule.alpha[-1]
    for j in removed:
        w = instance.voter(j).weight
        if low:
            for c in scores:
                scores[c] -= w * low
        for c, e in instance.excess[j - 1].items():
            scores[c] -= w * e
    return scores


def _constructive_rewrite(instance: ProtectionInstance, bribed: list[int], max_rewrites: int):
    """Lists for ``bribed`` that make the designated candidate win outright, or None."""
    d, m, rule = instance.designated, instance.m, instance.rule
    if not bribed:
        return {} if constructive_success(instance.no_bribery, d) else None
    if not rule.nontrivial:
        return None if not constructive_success(instance.no_bribery, d) else {j: PreferenceList((d,), m) for j in bribed}
    base = _scores_without(instance, bribed)
    weights = {instance.voter(j).weight for j in bribed}
    shape = rule.approval_shape()
    if shape is not None and len(weights) == 1:
        return _two_valued_rewrite(base, bribed, weights.pop(), shape, d, m)
    return rewrite_by_list_counts(instance, bribed, max_rewrites, base)


def _two_valued_rewrite(base, bribed, w, shape, d, m):
    r, high, low = shape
    k = len(bribed)
    top = base[d] + w * k * high
    step = w * (high - low)
    caps = {}
    for c in range(1, m + 1):
        if c == d:
            continue
        room = top - 1 - base[c] - w * k * low
        if room < 0:
            return None
        caps[c] = min(k, room // step)
    need = k * (r - 1)
    if sum(caps.values()) < need:
        return None
    # column sums x_c <= k, filled in ascending candidate order, dealt round-robin
    slots = []
    for c, cap in caps.items():
        take = min(cap, need - len(slots))
        slots.extend([c] * take)
        if len(slots) == need:
            break
    approved = [[] for _ in range(k)]
    for t, c in enumerate(slots):
        approved[t % k].append(c)
    return {j: PreferenceList((d, *sorted(a)), m) for j, a in zip(bribed, approved)}


def rewrite_by_list_counts(instance, bribed, max_rewrites=DEFAULT_MAX_REWRITES, base=None):
    """Search designated-first lists for ``bribed`` by how many voters of each weight get each list."""
    d, m = instance.designated, instance.m
    if base is None:
        base = _scores_without(instance, bribed)
    lists = all_rankings_with_top(m, d) if m <= 9 else None
    if lists is None:
        raise GuardError(f"cannot enumerate rewrites for m={m} with this rule and unequal weights")
    by_weight = group_voters(bribed, lambda j: instance.voter(j).weight)
    total = 1
    for grp in by_weight:
        total *= comb(len(grp) + len(lists) - 1, len(lists) - 1)
    if total > max_rewrites:
        raise GuardError(f"{total} rewrite distributions exceed the guard of {max_rewrites}")
    gains = [pref_excess(p, instance.rule) for p in lists]
    low = instance.rule.alpha[-1]
    others = [c for c in range(1, m + 1) if c != d]
    per_group = [list(combinations_with_replacement(range(len(lists)), len(g))) for g in by_weight]
    for choice in product(*per_group):
        scores = dict(base)
        for grp, multiset in zip(by_weight, choice):
            w = instance.voter(grp[0]).weight
            for h in multiset:
                if low:
                    for c in scores:
                        scores[c] += w * low
                for c, e in gains[h].items():
                    scores[c] += w * e
        top = scores[d]
        if all(scores[c] < top for c in others):
            out = {}
            for grp, multiset in zip(by_weight, choice):
                for j, h in zip(grp, multiset):
                    out[j] = lists[h]
            return out
    return None


def constructive_attack_bruteforce(
    instance: ProtectionInstance,
    defense: Iterable[int] = (),
    *,
    max_n: int = DEFAULT_MAX_N,
    max_rewrites: int = DEFAULT_MAX_REWRITES,
) -> AttackCertificate | None:
    """Exact constructive oracle by enumeration.

    Bribe sets are enumerated as counts over groups of voters.  With unit
    weights a group collects voters with the same scoring effect and
    cheaper members are bribed first; otherwise a group holds exact copies.
    Every bribed voter puts the designated candidate first.  The remaining
    order is solved in closed form for two-valued rules when the bribed
    voters share one weight, and enumerated over list counts otherwise.

    Raises ``GuardError`` when the number of bribe-set configurations
    exceeds ``2**max_n``.
    """
    _require_mode(instance, Mode.CONSTRUCTIVE)
    defense = _defense_set(instance, defense)
    avail = _bribable(instance, defense)
    B = instance.attack_budget
    if instance.unit_weight:
        owners = private_owners(instance)
        groups = group_voters(avail, lambda j: score_signature(instance, j, owners))
        groups = [sorted(g, key=lambda j: (instance.voter(j).price_bribe, j)) for g in groups]
    else:
        groups = identical_groups(instance, avail)
    costs = [prefix_sums(instance.voter(j).price_bribe for j in g) for g in groups]
    if count_vector_bound(costs, B) > 2**max_n:
        raise GuardError(f"bribe-set enumeration exceeds 2**{max_n} configurations")
    for counts in count_vectors(costs, B):
        bribed = pick(groups, counts)
        lists = _constructive_rewrite(instance, bribed, max_rewrites)
        if lists is not None:
            cost = sum(instance.voter(j).price_bribe for j in bribed)
            return AttackCertificate(frozenset(bribed), lists, cost, instance.designated)
    return None


def attack_oracle(instance: ProtectionInstance):
    """The exact oracle for the instance's mode."""
    if instance.mode is Mode.DESTRUCTIVE:
        return destructive_attack_best
    return constructive_attack_bruteforce


def verify_attack_certificate(
    instance: ProtectionInstance, defense: Iterable[int], cert: AttackCertificate
) -> Check:
    defense = frozenset(defense)
    bribed = frozenset(cert.bribed)
    if any(not 1 <= j <= instance.n for j in bribed):
        return Check(False, "unknown voter in bribed set")
    if bribed & defense:
        return Check(False, f"overlaps defense: {sorted(bribed & defense)}")
    extra = set(cert.new_prefs) - bribed
    if extra:
        return Check(False, f"rewrite for voters that were not bribed: {sorted(extra)}")
    for j, pref in cert.new_prefs.items():
        if pref.m != instance.m or pref.problem():
            return Check(False, f"malformed rewrite for voter {j}: {pref.problem() or 'wrong length'}")
    cost = sum(instance.voter(j).price_bribe for j in bribed)
    if cost > instance.attack_budget:
        return Check(False, f"budget: cost {cost} exceeds B={instance.attack_budget}")
    if cert.cost != cost:
        return Check(False, f"stated cost {cert.cost} differs from actual {cost}")
    t = tally(instance, dict(cert.new_prefs))
    if instance.mode is Mode.CONSTRUCTIVE:
        ok = constructive_success(t, instance.designated)
    else:
        ok = destructive_success(t, instance.designated)
    return Check(True, "attack succeeds") if ok else Check(False, "rewritten election does not meet the attacker's goal")
