"""Exact and special-case solvers for protecting elections against bribery."""

from .attacks import (
    AttackCertificate,
    DeltaVector,
    LambdaVector,
    constructive_attack_bruteforce,
    delta_vector,
    destructive_attack_best,
    destructive_attack_bruteforce_sim,
    destructive_attack_count_knapsack,
    destructive_attack_greedy_unit_price,
    lambda_vector,
    verify_attack_certificate,
)
from .core import (
    Mode,
    PreferenceList,
    ProtectionInstance,
    ScoringRule,
    Tally,
    Voter,
    build_scoring_rule,
    constructive_success,
    destructive_success,
    make_instance,
    tally,
    validate_instance,
)
from .dispatch import solve
from .errors import DomainError, GuardError, PreconditionError, ProtectionError
from .solvers import (
    DefenseCertificate,
    PreferenceClass,
    Verdict,
    canonical_class_order,
    dominates,
    solve_bruteforce,
    solve_constm_destructive_weighted,
    solve_constm_symmetric_priced,
    verify_defense_certificate,
)

__version__ = "0.1.0"
