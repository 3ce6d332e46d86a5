"""Pick the cheapest exact solver for an instance, or explain why none applies."""

from __future__ import annotations

from .core import Mode, ProtectionInstance
from .errors import DomainError, GuardError
from .solvers import (
    DEFAULT_MAX_M,
    DEFAULT_MAX_N,
    Verdict,
    solve_bruteforce,
    solve_constm_destructive_weighted,
    solve_constm_symmetric_priced,
)

SOLVERS = ("auto", "brute", "const-m")


def variant(instance: ProtectionInstance) -> str:
    """The weight/price variant: one of five rows of the complexity landscape."""
    if instance.unit_weight:
        if instance.unit_price:
            return "unit-weight unit-price"
        return "unit-weight symmetric-priced" if instance.symmetric else "unit-weight asymmetric-priced"
    return "weighted unit-price" if instance.unit_price else "weighted priced"


def hardness_note(instance: ProtectionInstance, max_m: int = DEFAULT_MAX_M) -> str:
    """Known complexity of the instance's variant, for 'undecided' explanations."""
    row = variant(instance)
    destructive = instance.mode is Mode.DESTRUCTIVE
    small = instance.m <= max_m
    scope = "for constant m" if small else "for arbitrary m"
    if row == "weighted priced":
        status = "Sigma_2^p-complete even for constant m"
    elif row == "weighted unit-price":
        if small:
            status = "polynomial for constant m" if destructive else "coNP-hard even for constant m"
        else:
            status = "NP-complete" if destructive else "Sigma_2^p-hard"
    elif row == "unit-weight asymmetric-priced":
        status = "NP-complete even for constant m" if small else ("NP-complete" if destructive else "Sigma_2^p-hard")
    elif small:
        status = "polynomial for constant m"
    elif not destructive:
        status = "Sigma_2^p-hard (already for 4-approval with unit weights and prices)"
    elif row == "unit-weight unit-price":
        status = "of open complexity"
    else:
        status = "NP-complete"
    return f"{instance.mode.value} protection, {row}, {scope}: {status}"


def class_solver(instance: ProtectionInstance, max_m: int = DEFAULT_MAX_M):
    """The constant-m solver whose domain contains the instance, if any."""
    if instance.m > max_m:
        return None
    if instance.mode is Mode.DESTRUCTIVE and instance.unit_price:
        return solve_constm_destructive_weighted
    if instance.unit_weight and instance.symmetric:
        return solve_constm_symmetric_priced
    return None


def solve(
    instance: ProtectionInstance, solver: str = "auto", *, max_n: int = DEFAULT_MAX_N, max_m: int = DEFAULT_MAX_M
) -> tuple[Verdict | None, str | None]:
    """``(verdict, explanation)``; the verdict is None when undecided."""
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    if solver in ("auto", "const-m"):
        fn = class_solver(instance, max_m)
        if fn is None and solver == "const-m":
            raise DomainError(f"no constant-m solver covers this instance ({variant(instance)}, m={instance.m})")
        if fn is not None:
            try:
                return fn(instance, max_m=max_m), None
            except GuardError as exc:
                if solver == "const-m":
                    return None, f"{exc.message}; {hardness_note(instance, max_m)}"
    try:
        return solve_bruteforce(instance, max_n=max_n), None
    except GuardError as exc:
        return None, f"exact search out of range ({exc.message}); {hardness_note(instance, max_m)}"
