"""Election model: scoring rules, voters, protection instances and tallies.

Candidates and voters are numbered from 1.  A preference list may be given
as a prefix only; candidates it does not mention follow in ascending index
order.  This keeps generated instances with thousands of dummy candidates
small, and for a full permutation it changes nothing.

All arithmetic is on Python integers, so totals never wrap around.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    E_ALPHA,
    E_BUDGET,
    E_MODE,
    E_PERM,
    E_PRICE,
    E_STRUCT,
    E_TRIVIAL,
    E_WEIGHT,
    W_WINNER,
    ProtectionError,
)


class Mode(str, enum.Enum):
    CONSTRUCTIVE = "constructive"
    DESTRUCTIVE = "destructive"


@dataclass(frozen=True)
class ScoringRule:
    """Positional score vector ``alpha``; position 1 is the top of a list."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if not alpha:
            raise ProtectionError(E_ALPHA, "score vector is empty")
        for k, a in enumerate(alpha, 1):
            if not isinstance(a, int) or isinstance(a, bool) or a < 0:
                raise ProtectionError(E_ALPHA, f"score at position {k} is not a non-negative integer: {a!r}")
        for k in range(1, len(alpha)):
            if alpha[k] > alpha[k - 1]:
                raise ProtectionError(
                    E_ALPHA, f"scores increase at position {k + 1} ({alpha[k - 1]} < {alpha[k]})"
                )

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def nontrivial(self) -> bool:
        return self.alpha[0] > self.alpha[-1]

    @property
    def distinct_values(self) -> int:
        return len(set(self.alpha))

    @property
    def spread(self) -> int:
        """alpha_1 - alpha_m."""
        return self.alpha[0] - self.alpha[-1]

    @cached_property
    def excess_depth(self) -> int:
        """Number of leading positions scoring strictly above the bottom score."""
        low = self.alpha[-1]
        return sum(1 for a in self.alpha if a > low)

    def approval_shape(self) -> tuple[int, int, int] | None:
        """``(r, high, low)`` when alpha takes at most two values, else None."""
        values = sorted(set(self.alpha), reverse=True)
        if len(values) > 2:
            return None
        high, low = values[0], values[-1]
        return self.alpha.count(high) if high > low else self.m, high, low


def build_scoring_rule(kind: str, m: int, r: int | None = None, alpha: Sequence[int] | None = None) -> ScoringRule:
    """Construct a named rule for ``m`` candidates.

    ``kind`` is one of ``approval`` (needs ``r``), ``plurality``, ``veto``,
    ``borda`` or ``custom`` (needs ``alpha``).
    """
    if m < 1:
        raise ProtectionError(E_STRUCT, f"candidate count must be positive, got {m}")
    if kind == "plurality":
        kind, r = "approval", 1
    elif kind == "veto":
        kind, r = "approval", m - 1
    if kind == "approval":
        if r is None or not 1 <= r <= m:
            raise ProtectionError(E_ALPHA, f"approval radius r={r} outside 1..{m}")
        return ScoringRule((1,) * r + (0,) * (m - r))
    if kind == "borda":
        return ScoringRule(tuple(range(m - 1, -1, -1)))
    if kind == "custom":
        if alpha is None or len(alpha) != m:
            raise ProtectionError(E_ALPHA, f"custom rule needs {m} scores")
        return ScoringRule(tuple(alpha))
    raise ProtectionError(E_ALPHA, f"unknown rule kind {kind!r}")


@dataclass(frozen=True, eq=False)
class PreferenceList:
    """A ranking of ``m`` candidates, stored as an explicit head.

    Candidates missing from ``head`` come after it in ascending order.
    Instances are compared by the ranking they denote, not by the head.
    """

    head: tuple[int, ...]
    m: int

    @classmethod
    def of(cls, order: Iterable[int], m: int | None = None) -> "PreferenceList":
        order = tuple(order)
        return cls(order, len(order) if m is None else m)

    def is_valid(self) -> bool:
        return len(set(self.head)) == len(self.head) and all(
            isinstance(c, int) and 1 <= c <= self.m for c in self.head
        )

    def problem(self) -> str | None:
        if len(self.head) > self.m:
            return f"list names {len(self.head)} candidates but m={self.m}"
        for c in self.head:
            if not isinstance(c, int) or isinstance(c, bool) or not 1 <= c <= self.m:
                return f"candidate {c!r} outside 1..{self.m}"
        if len(set(self.head)) != len(self.head):
            return "not a permutation (repeated candidate)"
        return None

    def prefix(self, k: int) -> tuple[int, ...]:
        """The first ``k`` candidates of the ranking."""
        if k <= len(self.head):
            return self.head[:k]
        seen = set(self.head)
        out = list(self.head)
        c = 1
        while len(out) < k and c <= self.m:
            if c not in seen:
                out.append(c)
            c += 1
        return tuple(out)

    @cached_property
    def order(self) -> tuple[int, ...]:
        return self.prefix(self.m)

    @cached_property
    def inverse(self) -> dict[int, int]:
        return {c: k for k, c in enumerate(self.order, 1)}

    def position(self, c: int) -> int:
        for k, x in enumerate(self.head, 1):
            if x == c:
                return k
        return self.inverse[c]

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        # drop trailing head entries that the implicit ascending tail reproduces
        h = list(self.head)
        present = set(h)
        lowest_absent = 1
        while lowest_absent in present:
            lowest_absent += 1
        while h and h[-1] < lowest_absent:
            lowest_absent = h.pop()
        return tuple(h)

    def __eq__(self, other):
        if not isinstance(other, PreferenceList):
            return NotImplemented
        return self.m == other.m and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.m, self.canonical))

    def __repr__(self):
        return f"PreferenceList({list(self.head)}, m={self.m})"


@dataclass(frozen=True)
class Voter:
    weight: int
    pref: PreferenceList
    price_award: int = 1
    price_bribe: int = 1


@dataclass(frozen=True)
class ProtectionInstance:
    m: int
    voters: tuple[Voter, ...]
    rule: ScoringRule
    defense_budget: int
    attack_budget: int
    mode: Mode
    designated: int

    def __post_init__(self):
        object.__setattr__(self, "voters", tuple(self.voters))
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def n(self) -> int:
        return len(self.voters)

    def voter(self, j: int) -> Voter:
        """Voter by 1-based index."""
        return self.voters[j - 1]

    @property
    def unit_weight(self) -> bool:
        return all(v.weight == 1 for v in self.voters)

    @property
    def unit_price(self) -> bool:
        return all(v.price_award == 1 and v.price_bribe == 1 for v in self.voters)

    @property
    def symmetric(self) -> bool:
        return all(v.price_award == v.price_bribe for v in self.voters)

    @property
    def total_weight(self) -> int:
        return sum(v.weight for v in self.voters)

    @cached_property
    def excess(self) -> tuple[dict[int, int], ...]:
        """Per voter, ``{candidate: alpha[pos] - alpha_m}`` for the scoring positions."""
        return tuple(pref_excess(v.pref, self.rule) for v in self.voters)

    @cached_property
    def no_bribery(self) -> "Tally":
        return tally(self)

    def replace(self, **changes) -> "ProtectionInstance":
        from dataclasses import replace

        return replace(self, **changes)


def pref_excess(pref: PreferenceList, rule: ScoringRule) -> dict[int, int]:
    low = rule.alpha[-1]
    top = pref.prefix(rule.excess_depth)
    return {c: rule.alpha[k] - low for k, c in enumerate(top) if rule.alpha[k] > low}


@dataclass(frozen=True)
class Tally:
    scores: Mapping[int, int]
    weighted: bool = True

    def __getitem__(self, c: int) -> int:
        return self.scores[c]

    def leaders(self) -> list[int]:
        top = max(self.scores.values())
        return [c for c, s in self.scores.items() if s == top]


def tally(instance: ProtectionInstance, overrides: Mapping[int, PreferenceList] | None = None) -> Tally:
    """Weighted score of every candidate, with optional rewritten lists.

    ``overrides`` maps 1-based voter indices to replacement lists.
    """
    overrides = overrides or {}
    for j, pref in overrides.items():
        if not 1 <= j <= instance.n:
            raise ProtectionError(E_STRUCT, f"override for unknown voter {j}")
        if pref.m != instance.m or pref.problem():
            raise ProtectionError(E_PERM, f"override for voter {j} is not a ranking of {instance.m} candidates")
    base = instance.rule.alpha[-1] * instance.total_weight
    scores = dict.fromkeys(range(1, instance.m + 1), base)
    excess = instance.excess
    for j, v in enumerate(instance.voters, 1):
        ex = pref_excess(overrides[j], instance.rule) if j in overrides else excess[j - 1]
        for c, e in ex.items():
            scores[c] += v.weight * e
    return Tally(scores, weighted=not instance.unit_weight)


def constructive_success(t: Tally, designated: int) -> bool:
    """Designated candidate is the strict unique maximum."""
    d = t.scores[designated]
    return all(s < d for c, s in t.scores.items() if c != designated)


def destructive_success(t: Tally, designated: int) -> bool:
    """Some other candidate strictly beats the designated one."""
    d = t.scores[designated]
    return any(s > d for c, s in t.scores.items() if c != designated)


def attack_succeeds(instance: ProtectionInstance, t: Tally) -> bool:
    if instance.mode is Mode.CONSTRUCTIVE:
        return constructive_success(t, instance.designated)
    return destructive_success(t, instance.designated)


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    code: str
    message: str
    field: str | None = None

    def __str__(self):
        where = f" [{self.field}]" if self.field else ""
        return f"{self.level} {self.code}{where}: {self.message}"


def validate_instance(instance: ProtectionInstance, require_nontrivial: bool = False) -> list[Diagnostic]:
    """Structural checks; never raises for a malformed instance."""
    out: list[Diagnostic] = []

    def err(code, msg, fld=None):
        out.append(Diagnostic("error", code, msg, fld))

    m = instance.m
    if m < 2:
        err(E_STRUCT, f"need at least 2 candidates, got {m}", "m")
    if instance.rule.m != m:
        err(E_STRUCT, f"rule has {instance.rule.m} scores for {m} candidates", "rule")
    if require_nontrivial and not instance.rule.nontrivial:
        err(E_TRIVIAL, "scoring rule is trivial (alpha_1 == alpha_m)", "rule")
    if not 1 <= instance.designated <= m:
        err(E_STRUCT, f"designated candidate {instance.designated} outside 1..{m}", "designated")
    for name, value in (("F", instance.defense_budget), ("B", instance.attack_budget)):
        if not isinstance(value, int) or value < 0:
            err(E_BUDGET, f"budget {name} must be a non-negative integer, got {value!r}", name)
    if instance.mode not in (Mode.CONSTRUCTIVE, Mode.DESTRUCTIVE):
        err(E_MODE, f"unknown mode {instance.mode!r}", "mode")
    for j, v in enumerate(instance.voters, 1):
        where = f"voters[{j}]"
        if v.pref.m != m:
            err(E_STRUCT, f"list ranks {v.pref.m} candidates, instance has {m}", f"{where}.pref")
        else:
            problem = v.pref.problem()
            if problem:
                err(E_PERM, problem, f"{where}.pref")
        if not isinstance(v.weight, int) or v.weight < 1:
            err(E_WEIGHT, f"weight must be a positive integer, got {v.weight!r}", f"{where}.weight")
        for label, p in (("pa", v.price_award), ("pb", v.price_bribe)):
            if not isinstance(p, int) or p < 1:
                err(E_PRICE, f"price must be a positive integer, got {p!r}", f"{where}.{label}")
    if out:
        return out
    if instance.mode is Mode.DESTRUCTIVE:
        t = instance.no_bribery
        if destructive_success(t, instance.designated):
            out.append(
                Diagnostic(
                    "warning",
                    W_WINNER,
                    f"designated candidate {instance.designated} is not a winner without bribery; "
                    "the destructive problem assumes it is",
                    "designated",
                )
            )
    return out


def check_instance(instance: ProtectionInstance, require_nontrivial: bool = False) -> None:
    """Raise the first error diagnostic, if any."""
    for diag in validate_instance(instance, require_nontrivial):
        if diag.level == "error":
            raise ProtectionError(diag.code, diag.message, diag.field)


def make_instance(
    m: int,
    voters: Iterable[tuple],
    rule: ScoringRule | str = "plurality",
    F: int = 0,
    B: int = 0,
    mode: Mode | str = Mode.DESTRUCTIVE,
    designated: int | None = None,
    r: int | None = None,
) -> ProtectionInstance:
    """Convenience builder.

    Each voter is ``(weight, pref)`` or ``(weight, pref, pa, pb)`` where
    ``pref`` is a sequence of candidates (a prefix is enough).
    """
    if isinstance(rule, str):
        rule = build_scoring_rule(rule, m, r=r)
    vs = []
    for row in voters:
        w, pref, *prices = row
        pa, pb = prices if prices else (1, 1)
        vs.append(Voter(w, pref if isinstance(pref, PreferenceList) else PreferenceList.of(pref, m), pa, pb))
    return ProtectionInstance(m, tuple(vs), rule, F, B, Mode(mode), m if designated is None else designated)


def all_rankings_with_top(m: int, top: int) -> list[PreferenceList]:
    """Every full ranking of ``m`` candidates that starts with ``top``."""
    from itertools import permutations

    rest = [c for c in range(1, m + 1) if c != top]
    return [PreferenceList((top,) + p, m) for p in permutations(rest)]


def permutation_rank(order: Sequence[int]) -> int:
    """Lexicographic rank (0-based) of a permutation of 1..m."""
    m = len(order)
    rank = 0
    remaining = sorted(order)
    fact = [1] * (m + 1)
    for k in range(1, m + 1):
        fact[k] = fact[k - 1] * k
    for k, c in enumerate(order):
        idx = remaining.index(c)
        rank += idx * fact[m - 1 - k]
        remaining.pop(idx)
    return rank


__all__ = [
    "Mode",
    "ScoringRule",
    "PreferenceList",
    "Voter",
    "ProtectionInstance",
    "Tally",
    "Diagnostic",
    "build_scoring_rule",
    "tally",
    "constructive_success",
    "destructive_success",
    "attack_succeeds",
    "validate_instance",
    "check_instance",
    "make_instance",
    "pref_excess",
    "all_rankings_with_top",
    "permutation_rank",
]
