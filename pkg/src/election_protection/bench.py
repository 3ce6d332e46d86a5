"""Timing runs over seeded instance streams."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import astuple, dataclass

from . import reductions, sampling
from .core import Mode
from .dispatch import solve
from .errors import ProtectionError

BENCH_FAMILIES = ("dneg", "weighted", "symmetric")
COLUMNS = ("family", "size", "solver", "seconds", "verdict")


@dataclass(frozen=True)
class BenchRow:
    family: str
    size: int
    solver: str
    seconds: float
    verdict: str


def bench_instance(family: str, size: int, rng: random.Random):
    """``size`` is the item count for dneg and the voter count otherwise."""
    if family == "dneg":
        return reductions.gen_from_dneg(sampling.random_dneg(rng, n=(size, size)))
    budget = max(1, min(size // 4, 8))
    if family == "weighted":
        inst = sampling.random_instance(
            rng, m=2, n=size, max_weight=9, mode=Mode.DESTRUCTIVE, unit_price=True, rules=("plurality",), winner_bias=1.0
        )
    elif family == "symmetric":
        inst = sampling.random_instance(
            rng, m=3, n=size, max_price=5, mode=Mode.DESTRUCTIVE, unit_weight=True, symmetric=True, winner_bias=1.0
        )
    else:
        raise ValueError(f"unknown bench family {family!r}; choose from {', '.join(BENCH_FAMILIES)}")
    return inst.replace(defense_budget=budget, attack_budget=budget)


def run_bench(config: dict | None = None) -> list[BenchRow]:
    """Rows for every (family, size, solver, trial) in ``config``.

    Keys: ``families``, ``sizes``, ``solvers`` (default ``["brute"]``),
    ``seed`` (default 0), ``trials`` (default 1), ``max_n``.  A missing
    family or size list gives no rows.
    """
    config = config or {}
    families = config.get("families") or ()
    sizes = config.get("sizes") or ()
    names = config.get("solvers") or ("brute",)
    seed, trials = config.get("seed", 0), config.get("trials", 1)
    kwargs = {"max_n": config["max_n"]} if "max_n" in config else {}
    rows = []
    for family in families:
        for size in sizes:
            rng = random.Random(f"{seed}/{family}/{size}")
            for _ in range(trials):
                inst = bench_instance(family, size, rng)
                for name in names:
                    start = time.perf_counter()
                    try:
                        verdict, _ = solve(inst, name, **kwargs)
                        label = "undecided" if verdict is None else ("protected" if verdict.protected else "unprotected")
                    except ProtectionError as exc:
                        label = exc.code
                    rows.append(BenchRow(family, size, name, time.perf_counter() - start, label))
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        fam, size, solver, seconds, verdict = astuple(r)
        w.writerow((fam, size, solver, f"{seconds:.6f}", verdict))
    return buf.getvalue()
