"""Seeded agreement suites between independent routes to the same answer."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import attacks, reductions, sampling, solvers
from .core import Mode
from .errors import GuardError
from .io import instance_to_doc, source_to_doc

FAMILIES = (
    "minmax",
    "greedy",
    "count-knapsack",
    "constm-destructive",
    "constm-symmetric",
    "dneg",
    "partition",
    "lift",
    "ef3dm",
)


@dataclass
class FamilyReport:
    family: str
    trials: int = 0
    agree: int = 0
    skipped: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def line(self) -> str:
        checked = self.trials - self.skipped
        return (
            f"{self.family}: {self.agree}/{checked} agree, {self.skipped} skipped, "
            f"{len(self.counterexamples)} counterexamples"
        )


def default_oracles() -> dict[str, Callable]:
    return {
        "best": attacks.destructive_attack_best,
        "sim": attacks.destructive_attack_bruteforce_sim,
        "greedy": attacks.destructive_attack_greedy_unit_price,
        "count-knapsack": attacks.destructive_attack_count_knapsack,
        "brute": solvers.solve_bruteforce,
        "constm-destructive": solvers.solve_constm_destructive_weighted,
        "constm-symmetric": solvers.solve_constm_symmetric_priced,
    }


def _defense(rng, instance):
    return sorted(j for j in range(1, instance.n + 1) if rng.random() < 0.3)


def _attack_pair(rng, instance, left, right):
    awarded = _defense(rng, instance)
    a = left(instance, awarded) is not None
    b = right(instance, awarded) is not None
    return a == b, {"instance": instance_to_doc(instance), "defense": awarded, "verdicts": [a, b]}


def _solver_pair(instance, left, right, max_n):
    a = left(instance).protected
    b = right(instance, max_n=max_n).protected
    return a == b, {"instance": instance_to_doc(instance), "verdicts": [a, b]}


def _trial(family, rng, o, max_n):
    """One draw: ``(agrees, replay_document)``."""
    if family == "minmax":
        inst = sampling.random_instance(rng, m=(2, 3), n=(1, 6), max_weight=3, max_price=3, max_B=6, mode=Mode.DESTRUCTIVE)
        return _attack_pair(rng, inst, o["sim"], o["best"])
    if family == "greedy":
        inst = sampling.random_instance(
            rng, m=(2, 4), n=(1, 8), max_weight=6, max_B=5, mode=Mode.DESTRUCTIVE, unit_price=True
        )
        return _attack_pair(rng, inst, o["greedy"], o["best"])
    if family == "count-knapsack":
        rules = ("plurality", "veto", "approval", "borda", "custom")
        while True:
            inst = sampling.random_instance(
                rng, m=(2, 4), n=(1, 8), max_price=8, max_B=10, mode=Mode.DESTRUCTIVE, unit_weight=True, rules=rules
            )
            if inst.rule.distinct_values <= 4:
                break
        return _attack_pair(rng, inst, o["count-knapsack"], o["best"])
    if family == "constm-destructive":
        inst = sampling.random_instance(
            rng, m=(2, 3), n=(1, 12), max_weight=5, max_F=5, max_B=5, mode=Mode.DESTRUCTIVE, unit_price=True,
            distinct_prefs=rng.randint(1, 6),
        )
        return _solver_pair(inst, o["constm-destructive"], o["brute"], max_n)
    if family == "constm-symmetric":
        inst = sampling.random_instance(
            rng, m=(2, 3), n=(1, 12), max_price=4, max_F=8, max_B=8, unit_weight=True, symmetric=True,
            distinct_prefs=rng.randint(1, 6),
        )
        return _solver_pair(inst, o["constm-symmetric"], o["brute"], max_n)
    if family == "dneg":
        src = sampling.random_dneg(rng)
        a = reductions.solve_dneg_brute(src)
        b = o["brute"](reductions.gen_from_dneg(src), max_n=max_n).protected
        return a == b, {"source": source_to_doc("dneg", src), "verdicts": [a, b]}
    if family == "partition":
        src = sampling.random_partition_prime(rng)
        a = reductions.solve_balanced_partition(src)
        b = o["brute"](reductions.gen_from_partition_prime(src), max_n=max_n).protected
        return a == b, {"source": source_to_doc("partition", src), "verdicts": [a, b]}
    if family == "lift":
        src = sampling.random_partition(rng)
        a = reductions.solve_balanced_partition(src)
        b = reductions.solve_balanced_partition(reductions.lift_partition(src))
        return a == b, {"source": source_to_doc("partition", src), "verdicts": [a, b]}
    if family == "ef3dm":
        src = sampling.random_ef3dm(rng, n=rng.randint(1, 2))
        a = reductions.solve_ef3dm_brute(src)
        b = o["brute"](reductions.gen_from_ef3dm(src), max_n=max_n).protected
        return a == b, {"source": source_to_doc("ef3dm", src), "verdicts": [a, b]}
    raise ValueError(f"unknown family {family!r}")


def run_cross_check(
    families=FAMILIES,
    trials: int = 100,
    seed: int = 0,
    *,
    max_n: int = solvers.DEFAULT_MAX_N,
    oracles: dict[str, Callable] | None = None,
) -> dict[str, FamilyReport]:
    """Run ``trials`` seeded draws per family.  ``oracles`` overrides individual routes."""
    if trials <= 0:
        return {}
    o = default_oracles()
    o.update(oracles or {})
    out = {}
    for family in families:
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
        rng = random.Random(f"{seed}/{family}")
        rep = FamilyReport(family)
        for k in range(trials):
            rep.trials += 1
            try:
                same, doc = _trial(family, rng, o, max_n)
            except GuardError:
                rep.skipped += 1
                continue
            if same:
                rep.agree += 1
            else:
                rep.counterexamples.append({"trial": k, **doc})
        out[family] = rep
    return out
