"""Instance generators from hard source problems, plus exact solvers for the sources.

Each generator is deterministic: key voters and candidates come first, and
dummies are appended in a fixed order with ascending indices.  Generated
elections rely on prefix preference lists (approved candidates first,
everything else in ascending order), so instances with thousands of dummy
candidates stay small.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .core import Mode, PreferenceList, ProtectionInstance, Voter, build_scoring_rule
from .errors import GuardError, PreconditionError

Triple = tuple[int, int, int]


# -- bi-level knapsack (leader reserves, follower packs) ---------------------


@dataclass(frozen=True)
class BilevelKnapsackInstance:
    """Items are ``(reserve_price, pack_price)``; an item's weight equals its pack price."""

    items: tuple[tuple[int, int], ...]
    reserve_budget: int
    pack_budget: int
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(tuple(it) for it in self.items))
        for k, (pa, pb) in enumerate(self.items, 1):
            if pa < 1 or pb < 1:
                raise PreconditionError(f"item {k} has a non-positive price", f"items[{k}]")
        if min(self.reserve_budget, self.pack_budget, self.threshold) < 0:
            raise PreconditionError("budgets and threshold must be non-negative")


def gen_from_dneg(src: BilevelKnapsackInstance) -> ProtectionInstance:
    """Two candidates under plurality; the designated candidate 2 must stay ahead.

    Item voters back candidate 2 with weight and bribing price equal to the
    pack price.  Two unbribable, unawardable dummies fix the margin: one
    for candidate 2 of weight ``2 * threshold`` and one for candidate 1
    carrying the total item weight.  A zero threshold drops the first dummy.
    """
    if not src.items:
        raise PreconditionError("need at least one item", "items")
    F, B = src.reserve_budget, src.pack_budget
    total = sum(pb for _, pb in src.items)
    one, two = PreferenceList((1, 2), 2), PreferenceList((2, 1), 2)
    voters = [Voter(pb, two, pa, pb) for pa, pb in src.items]
    if src.threshold:
        voters.append(Voter(2 * src.threshold, two, F + 1, B + 1))
    voters.append(Voter(total, one, F + 1, B + 1))
    return ProtectionInstance(2, tuple(voters), build_scoring_rule("plurality", 2), F, B, Mode.DESTRUCTIVE, 2)


def subset_sums(values, cap: int) -> int:
    """Bitmask of the subset sums of ``values`` that do not exceed ``cap``."""
    mask = (1 << (cap + 1)) - 1
    reach = 1
    for v in values:
        reach |= (reach << v) & mask
    return reach


def solve_dneg_brute(src: BilevelKnapsackInstance, *, max_items: int = 18) -> bool:
    """True iff some reservation keeps the follower's best packing at or below the threshold."""
    n = len(src.items)
    if n > max_items:
        raise GuardError(f"{n} items exceed the guard of {max_items}")
    for size in range(n + 1):
        for reserved in combinations(range(n), size):
            if sum(src.items[k][0] for k in reserved) > src.reserve_budget:
                continue
            left = [src.items[k][1] for k in range(n) if k not in reserved]
            reach = subset_sums(left, src.pack_budget)
            if reach.bit_length() - 1 <= src.threshold:
                return True
    return False


# -- balanced partition -------------------------------------------------------


@dataclass(frozen=True)
class PartitionInstance:
    """``2n`` positive integers in ascending order summing to ``2 * half_sum``."""

    values: tuple[int, ...]
    half_sum: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(self.values)))
        if not self.values or len(self.values) % 2:
            raise PreconditionError("need a positive even number of values", "values")
        if self.values[0] < 1:
            raise PreconditionError("values must be positive", "values")
        if sum(self.values) != 2 * self.half_sum:
            raise PreconditionError(f"values sum to {sum(self.values)}, not 2*{self.half_sum}", "half_sum")

    @property
    def n(self) -> int:
        return len(self.values) // 2

    @property
    def is_prime(self) -> bool:
        """The middle values ``a_n .. a_{2n-1}`` (1-based) sum to more than ``q``."""
        n = self.n
        return sum(self.values[n - 1 : 2 * n - 1]) >= self.half_sum + 1


def solve_balanced_partition(src: PartitionInstance, prime_required: bool = False) -> bool:
    """Is there a subset of exactly ``n`` values summing to ``q``?"""
    if prime_required and not src.is_prime:
        raise PreconditionError("instance does not satisfy the middle-heaviness condition")
    n, q = src.n, src.half_sum
    mask = (1 << (q + 1)) - 1
    reach = [1] + [0] * n  # reach[k]: sums reachable with exactly k values
    for v in src.values:
        for k in range(n, 0, -1):
            reach[k] |= (reach[k - 1] << v) & mask
    return bool(reach[n] >> q & 1)


def lift_partition(src: PartitionInstance) -> PartitionInstance:
    """Append ``4n`` copies of ``3q``, which forces the middle-heaviness condition."""
    n, q = src.n, src.half_sum
    return PartitionInstance(src.values + (3 * q,) * (4 * n), q + 6 * n * q)


def gen_from_partition_prime(src: PartitionInstance) -> ProtectionInstance:
    """Two candidates, unit weights; candidate 2 is designated and must not be overtaken.

    Value voters back candidate 2 with awarding price ``4q + a`` and
    bribing price ``4q - a``.  Padding: ``2n - 1`` out-of-reach voters for
    candidate 2 and ``2n`` unit-price voters for candidate 1.
    """
    if not src.is_prime:
        raise PreconditionError("instance does not satisfy the middle-heaviness condition")
    n, q = src.n, src.half_sum
    F, B = 4 * q * n + q, (4 * n - 1) * q - 1
    one, two = PreferenceList((1, 2), 2), PreferenceList((2, 1), 2)
    voters = [Voter(1, two, 4 * q + a, 4 * q - a) for a in src.values]
    voters += [Voter(1, two, F + 1, B + 1) for _ in range(2 * n - 1)]
    voters += [Voter(1, one, 1, 1) for _ in range(2 * n)]
    return ProtectionInstance(2, tuple(voters), build_scoring_rule("plurality", 2), F, B, Mode.DESTRUCTIVE, 2)


# -- 3-dimensional matching ---------------------------------------------------


def _check_triples(triples, n, label):
    for k, t in enumerate(triples):
        if len(t) != 3 or any(not 1 <= e <= n for e in t):
            raise PreconditionError(f"triple {t} outside 1..{n}", f"{label}[{k}]")


def exact_cover(triples, n: int, covered: tuple[set, set, set] | None = None) -> list[Triple] | None:
    """Disjoint triples covering every element of the three ``n``-sets, extending ``covered``."""
    covered = covered or (set(), set(), set())
    usable = [t for t in triples if all(t[a] not in covered[a] for a in range(3))]
    by_w: dict[int, list[Triple]] = {}
    for t in usable:
        by_w.setdefault(t[0], []).append(t)
    free_w = sorted(set(range(1, n + 1)) - covered[0])
    used_x, used_y = set(covered[1]), set(covered[2])
    chosen: list[Triple] = []

    def rec(k):
        if k == len(free_w):
            return len(used_x) == n and len(used_y) == n
        for t in by_w.get(free_w[k], ()):
            if t[1] in used_x or t[2] in used_y:
                continue
            used_x.add(t[1])
            used_y.add(t[2])
            chosen.append(t)
            if rec(k + 1):
                return True
            chosen.pop()
            used_x.discard(t[1])
            used_y.discard(t[2])
        return False

    return list(chosen) if rec(0) else None


@dataclass(frozen=True)
class ExistsForall3DMInstance:
    """Elements of W, X and Y are numbered ``1..n`` each; triples are ``(w, x, y)``."""

    n: int
    triples_m1: tuple[Triple, ...]
    triples_m2: tuple[Triple, ...]
    t: int

    def __post_init__(self):
        object.__setattr__(self, "triples_m1", tuple(tuple(x) for x in self.triples_m1))
        object.__setattr__(self, "triples_m2", tuple(tuple(x) for x in self.triples_m2))
        if self.n < 1:
            raise PreconditionError("n must be positive", "n")
        _check_triples(self.triples_m1, self.n, "triples_m1")
        _check_triples(self.triples_m2, self.n, "triples_m2")
        for a in range(3):
            seen = Counter(t[a] for t in self.triples_m1)
            if any(c > 1 for c in seen.values()):
                raise PreconditionError("M1 uses an element more than once", "triples_m1")
        if len(set(self.triples_m1)) != len(self.triples_m1) or len(set(self.triples_m2)) != len(self.triples_m2):
            raise PreconditionError("repeated triple")
        if set(self.triples_m1) & set(self.triples_m2):
            raise PreconditionError("M1 and M2 must be disjoint")
        if not 0 <= self.t <= len(self.triples_m1):
            raise PreconditionError(f"t={self.t} outside 0..{len(self.triples_m1)}", "t")


def solve_ef3dm_brute(src: ExistsForall3DMInstance, *, max_triples: int = 20) -> bool:
    """True iff some ``t``-subset of M1 cannot be completed to a perfect matching from M2."""
    if len(src.triples_m1) > max_triples or len(src.triples_m2) > max_triples:
        raise GuardError(f"triple sets exceed the guard of {max_triples}")
    for u1 in combinations(src.triples_m1, src.t):
        # M1 triples are pairwise disjoint by construction
        covered = tuple({t[a] for t in u1} for a in range(3))
        if exact_cover(src.triples_m2, src.n, covered) is None:
            return True
    return False


@dataclass
class _Ballots:
    """Accumulates approval ballots, handing out fresh dummy candidates in order."""

    next_dummy: int
    ballots: list[tuple[int, ...]] = field(default_factory=list)

    def fresh(self, k: int) -> list[int]:
        start = self.next_dummy
        self.next_dummy += k
        return list(range(start, start + k))

    def add(self, approved):
        self.ballots.append(tuple(sorted(approved)))


def default_xi(src: ExistsForall3DMInstance) -> int:
    """``(m1 + m2) * n``, but at least 2.

    The designated candidate must be able to reach a score at least 2 above
    the score-1 dummies a bribed voter also approves, i.e. ``n + xi >= 3``.
    """
    return max((len(src.triples_m1) + len(src.triples_m2)) * src.n, 2)


def gen_from_ef3dm(src: ExistsForall3DMInstance, r: int = 4, xi: int | None = None) -> ProtectionInstance:
    """Constructive unit-protection under r-approval.

    Element candidates ``1..3n`` (W, then X, then Y) score ``n + xi``; the
    leading candidate ``3n + 1`` scores ``n + t + xi - 1``; the designated
    candidate ``3n + 2`` scores ``xi``.  Voters, in order: one per M1
    triple (its elements plus the leader), ``m1 - t + 1`` copies per M2
    triple (its elements plus one dummy shared by the copies), then
    padding voters for each element candidate, the leader and the
    designated candidate, each approving one of them plus three fresh
    dummies.  For ``r > 4`` every voter also approves ``r - 4`` fresh dummies.
    """
    if r < 4:
        raise PreconditionError(f"construction needs r >= 4, got {r}", "r")
    n, t = src.n, src.t
    m1, m2 = len(src.triples_m1), len(src.triples_m2)
    xi = default_xi(src) if xi is None else xi
    if xi < 0:
        raise PreconditionError("xi must be non-negative", "xi")
    copies = m1 - t + 1
    lead, desig = 3 * n + 1, 3 * n + 2

    def cand(axis, e):
        return axis * n + e

    key_score = Counter()
    for tr in src.triples_m1:
        key_score.update(cand(a, tr[a]) for a in range(3))
    for tr in src.triples_m2:
        for a in range(3):
            key_score[cand(a, tr[a])] += copies
    element_pad = {}
    for c in range(1, 3 * n + 1):
        need = n + xi - key_score[c]
        if need < 0:
            raise PreconditionError(f"element candidate {c} already scores {key_score[c]} > n + xi = {n + xi}")
        element_pad[c] = need
    lead_pad = n + t + xi - 1 - m1
    if lead_pad < 0:
        raise PreconditionError(f"m1={m1} exceeds the leader's target score n + t + xi - 1")

    extra = r - 4
    box = _Ballots(3 * n + 3)
    for tr in src.triples_m1:
        box.add([cand(a, tr[a]) for a in range(3)] + [lead] + box.fresh(extra))
    for tr in src.triples_m2:
        (shared,) = box.fresh(1)
        for _ in range(copies):
            box.add([cand(a, tr[a]) for a in range(3)] + [shared] + box.fresh(extra))
    for c, need in [*element_pad.items(), (lead, lead_pad), (desig, xi)]:
        for _ in range(need):
            box.add([c] + box.fresh(3 + extra))
    m = box.next_dummy - 1
    voters = tuple(Voter(1, PreferenceList(b, m)) for b in box.ballots)
    rule = build_scoring_rule("approval", m, r=r)
    return ProtectionInstance(m, voters, rule, m1 - t, n, Mode.CONSTRUCTIVE, desig)


def ef3dm_target_scores(src: ExistsForall3DMInstance, xi: int | None = None) -> dict[int, int]:
    """Scores the construction promises for the key candidates."""
    n = src.n
    xi = default_xi(src) if xi is None else xi
    out = {c: n + xi for c in range(1, 3 * n + 1)}
    out[3 * n + 1] = n + src.t + xi - 1
    out[3 * n + 2] = xi
    return out


@dataclass(frozen=True)
class ThreeDMInstance:
    """Elements of W, X and Y are numbered ``1..zeta`` each; every element occurs at most ``d`` times."""

    zeta: int
    triples: tuple[Triple, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(tuple(x) for x in self.triples))
        if self.zeta < 1:
            raise PreconditionError("zeta must be positive", "zeta")
        _check_triples(self.triples, self.zeta, "triples")
        if len(set(self.triples)) != len(self.triples):
            raise PreconditionError("repeated triple", "triples")
        if self.max_occurrence > self.d:
            raise PreconditionError(f"an element occurs {self.max_occurrence} times, bound is d={self.d}", "d")

    @property
    def eta(self) -> int:
        return len(self.triples)

    def occurrences(self) -> list[int]:
        """``d(z)`` for z = W elements, then X, then Y."""
        occ = [0] * (3 * self.zeta)
        for tr in self.triples:
            for a in range(3):
                occ[a * self.zeta + tr[a] - 1] += 1
        return occ

    @property
    def max_occurrence(self) -> int:
        return max(self.occurrences(), default=0)


def solve_3dm_brute(src: ThreeDMInstance, *, max_zeta: int = 8) -> bool:
    if src.zeta > max_zeta:
        raise GuardError(f"zeta={src.zeta} exceeds the guard of {max_zeta}")
    return exact_cover(src.triples, src.zeta) is not None


def tdm_parameters(src: ThreeDMInstance) -> dict:
    """Weights and score targets of the bounded-3DM construction.

    Key voters never approve the leader, so a key voter's gap entry for an
    element candidate is 1 if it does not approve that element and 0 if it
    does.
    """
    zeta, eta = src.zeta, src.eta
    Q = 2 * eta + 1
    occ = src.occurrences()
    gaps = [eta - d for d in occ]
    d_max, gap_max = max(occ), max(gaps)
    f = [2 * eta + d_max + gap_max - g for g in gaps]
    f_lead = 2 * eta + d_max + gap_max - zeta + 1
    return {"Q": Q, "occ": occ, "gaps": gaps, "f": f, "f_lead": f_lead, "F": zeta, "B": eta - zeta}


def gen_from_3dm(src: ThreeDMInstance, r: int = 3) -> ProtectionInstance:
    """Destructive weighted protection under r-approval.

    Candidates ``1..3zeta`` stand for the elements, ``3zeta + 1`` is the
    leader (the designated candidate), dummies follow.  One weight-``Q``
    voter per triple approves its three elements; unit-weight padding
    voters approve one key candidate and two fresh dummies until every
    element candidate scores ``Q * f(z)`` and the leader ``Q * f_lead``.
    For ``r > 3`` every voter also approves ``r - 3`` fresh dummies.
    """
    if r < 3:
        raise PreconditionError(f"construction needs r >= 3, got {r}", "r")
    zeta, eta = src.zeta, src.eta
    if eta < zeta + 2 * src.d:
        raise PreconditionError(f"need eta >= zeta + 2d, got eta={eta}, zeta={zeta}, d={src.d}", "triples")
    p = tdm_parameters(src)
    Q, extra = p["Q"], r - 3
    lead = 3 * zeta + 1
    box = _Ballots(3 * zeta + 2)
    for tr in src.triples:
        box.add([a * zeta + tr[a] for a in range(3)] + box.fresh(extra))
    pads = [(i + 1, Q * (p["f"][i] - p["occ"][i])) for i in range(3 * zeta)] + [(lead, Q * p["f_lead"])]
    for c, need in pads:
        for _ in range(need):
            box.add([c] + box.fresh(2 + extra))
    m = box.next_dummy - 1
    weights = [Q] * eta + [1] * (len(box.ballots) - eta)
    voters = tuple(Voter(w, PreferenceList(b, m)) for w, b in zip(weights, box.ballots))
    rule = build_scoring_rule("approval", m, r=r)
    return ProtectionInstance(m, voters, rule, p["F"], p["B"], Mode.DESTRUCTIVE, lead)


def tdm_target_scores(src: ThreeDMInstance) -> dict[int, int]:
    p = tdm_parameters(src)
    out = {i + 1: p["Q"] * fz for i, fz in enumerate(p["f"])}
    out[3 * src.zeta + 1] = p["Q"] * p["f_lead"]
    return out
