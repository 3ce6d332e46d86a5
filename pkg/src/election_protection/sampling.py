"""Seeded random instance streams for cross-checks, property suites and benchmarks."""

from __future__ import annotations

import random
from itertools import permutations

from .core import Mode, PreferenceList, ProtectionInstance, Voter, build_scoring_rule
from .reductions import (
    BilevelKnapsackInstance,
    ExistsForall3DMInstance,
    PartitionInstance,
    ThreeDMInstance,
)

RULE_KINDS = ("plurality", "veto", "borda", "approval", "custom")


def random_rule(rng: random.Random, m: int, kinds=RULE_KINDS):
    kind = rng.choice(kinds)
    if kind == "approval":
        return build_scoring_rule(kind, m, r=rng.randint(1, m - 1))
    if kind == "custom":
        while True:
            alpha = sorted((rng.randint(0, 4) for _ in range(m)), reverse=True)
            if alpha[0] > alpha[-1]:
                return build_scoring_rule(kind, m, alpha=alpha)
    return build_scoring_rule(kind, m)


def random_instance(
    rng: random.Random,
    *,
    m: int | tuple[int, int] = (2, 3),
    n: int | tuple[int, int] = (1, 6),
    max_weight: int = 3,
    max_price: int = 3,
    max_F: int = 6,
    max_B: int = 6,
    mode: Mode | str | None = None,
    unit_weight: bool = False,
    unit_price: bool = False,
    symmetric: bool = False,
    rules=RULE_KINDS,
    distinct_prefs: int | None = None,
    winner_bias: float = 0.8,
) -> ProtectionInstance:
    """One instance; integer ranges are inclusive.

    ``distinct_prefs`` limits how many different preference lists appear,
    which makes voters share classes more often.  With probability
    ``winner_bias`` a destructive instance designates a current leader, so
    most draws do not start out already lost.
    """
    m = m if isinstance(m, int) else rng.randint(*m)
    n = n if isinstance(n, int) else rng.randint(*n)
    rule = random_rule(rng, m, rules)
    pool = list(permutations(range(1, m + 1)))
    if distinct_prefs is not None:
        pool = rng.sample(pool, min(distinct_prefs, len(pool)))
    voters = []
    for _ in range(n):
        w = 1 if unit_weight else rng.randint(1, max_weight)
        if unit_price:
            pa = pb = 1
        else:
            pa = rng.randint(1, max_price)
            pb = pa if symmetric else rng.randint(1, max_price)
        voters.append(Voter(w, PreferenceList(rng.choice(pool), m), pa, pb))
    mode = Mode(mode) if mode is not None else rng.choice(list(Mode))
    inst = ProtectionInstance(m, tuple(voters), rule, rng.randint(0, max_F), rng.randint(0, max_B), mode, rng.randint(1, m))
    if mode is Mode.DESTRUCTIVE and rng.random() < winner_bias:
        inst = inst.replace(designated=rng.choice(inst.no_bribery.leaders()))
    return inst


def random_dneg(rng: random.Random, *, n: tuple[int, int] = (1, 8), max_price: int = 6) -> BilevelKnapsackInstance:
    items = tuple((rng.randint(1, max_price), rng.randint(1, max_price)) for _ in range(rng.randint(*n)))
    total_a = sum(a for a, _ in items)
    total_b = sum(b for _, b in items)
    return BilevelKnapsackInstance(items, rng.randint(0, total_a), rng.randint(0, total_b), rng.randint(0, total_b))


def random_partition(rng: random.Random, *, n: tuple[int, int] = (1, 4), max_value: int = 12) -> PartitionInstance:
    """Values with an even total, so the half sum is an integer."""
    k = rng.randint(*n)
    while True:
        values = [rng.randint(1, max_value) for _ in range(2 * k)]
        if sum(values) % 2 == 0:
            return PartitionInstance(tuple(values), sum(values) // 2)


def random_partition_prime(rng: random.Random, *, n=(3, 4), max_value: int = 12) -> PartitionInstance:
    """Rejection-sample instances satisfying the middle-heaviness condition."""
    while True:
        src = random_partition(rng, n=(n[0], n[-1]), max_value=max_value)
        if src.is_prime:
            return src


def _random_triple(rng, n):
    return rng.randint(1, n), rng.randint(1, n), rng.randint(1, n)


def random_ef3dm(rng: random.Random, *, n: int = 2, max_m1: int = 3, max_m2: int = 3) -> ExistsForall3DMInstance:
    perm = [rng.sample(range(1, n + 1), n) for _ in range(3)]
    m1 = rng.randint(0, min(max_m1, n))
    triples_m1 = tuple((perm[0][k], perm[1][k], perm[2][k]) for k in range(m1))
    everything = [(w, x, y) for w in range(1, n + 1) for x in range(1, n + 1) for y in range(1, n + 1)]
    rest = [t for t in everything if t not in triples_m1]
    triples_m2 = tuple(rng.sample(rest, rng.randint(0, min(max_m2, len(rest)))))
    return ExistsForall3DMInstance(n, triples_m1, triples_m2, rng.randint(0, m1))


def random_tdm(rng: random.Random, *, zeta: int = 3, d: int = 3, plant: bool | None = None) -> ThreeDMInstance:
    """Union of ``d`` random perfect matchings, retried until ``eta >= zeta + 2d``.

    With ``plant=False`` one matching is replaced by random triples so
    instances without a perfect matching also appear.
    """
    if zeta * d < zeta + 2 * d:
        raise ValueError(f"zeta={zeta}, d={d} allow at most {zeta * d} triples, fewer than zeta + 2d")
    plant = rng.random() < 0.5 if plant is None else plant
    elems = range(1, zeta + 1)
    while True:
        triples = set()
        for k in range(d):
            if k == 0 and not plant:
                for _ in range(zeta):
                    triples.add(_random_triple(rng, zeta))
                continue
            xs, ys = rng.sample(elems, zeta), rng.sample(elems, zeta)
            triples.update((w, xs[w - 1], ys[w - 1]) for w in elems)
        src = sorted(triples)
        occ = ThreeDMInstance(zeta, tuple(src), zeta * d)
        if occ.max_occurrence <= d and len(src) >= zeta + 2 * d:
            return ThreeDMInstance(zeta, tuple(src), d)
