import random

import pytest

from election_protection.attacks import constructive_attack_bruteforce
from election_protection.core import Mode
from election_protection.errors import GuardError, PreconditionError
from election_protection.reductions import (
    BilevelKnapsackInstance,
    ExistsForall3DMInstance,
    PartitionInstance,
    ThreeDMInstance,
    ef3dm_target_scores,
    exact_cover,
    gen_from_3dm,
    gen_from_dneg,
    gen_from_ef3dm,
    gen_from_partition_prime,
    lift_partition,
    solve_3dm_brute,
    solve_balanced_partition,
    solve_dneg_brute,
    solve_ef3dm_brute,
    tdm_parameters,
    tdm_target_scores,
)
from election_protection.sampling import random_ef3dm, random_partition_prime, random_tdm
from election_protection.solvers import solve_bruteforce


def voter_rows(inst):
    return [(v.weight, v.price_award, v.price_bribe, v.pref.order[0]) for v in inst.voters]


# -- bi-level knapsack -------------------------------------------------------


def test_dneg_generation_example():
    src = BilevelKnapsackInstance(((1, 2), (1, 3)), 1, 3, 2)
    inst = gen_from_dneg(src)
    assert voter_rows(inst) == [(2, 1, 2, 2), (3, 1, 3, 2), (4, 2, 4, 2), (5, 2, 4, 1)]
    assert (inst.m, inst.defense_budget, inst.attack_budget, inst.designated) == (2, 1, 3, 2)
    assert inst.mode is Mode.DESTRUCTIVE


def test_dneg_source_examples():
    assert solve_dneg_brute(BilevelKnapsackInstance(((1, 2), (1, 3)), 1, 3, 2))
    assert not solve_dneg_brute(BilevelKnapsackInstance(((1, 5),), 0, 5, 4))
    assert solve_dneg_brute(BilevelKnapsackInstance(((1, 5), (2, 3)), 3, 8, 0))


def test_dneg_threshold_at_total_is_protected_with_nothing():
    src = BilevelKnapsackInstance(((2, 2), (3, 4)), 0, 6, 6)
    assert solve_dneg_brute(src)
    v = solve_bruteforce(gen_from_dneg(src))
    assert v.protected and not v.defense.awarded


def test_dneg_zero_threshold_drops_dummy():
    inst = gen_from_dneg(BilevelKnapsackInstance(((1, 2),), 1, 2, 0))
    assert voter_rows(inst) == [(2, 1, 2, 2), (2, 2, 3, 1)]


def test_dneg_preconditions():
    with pytest.raises(PreconditionError):
        BilevelKnapsackInstance(((0, 1),), 0, 0, 0)
    with pytest.raises(PreconditionError):
        gen_from_dneg(BilevelKnapsackInstance((), 0, 0, 0))
    with pytest.raises(GuardError):
        solve_dneg_brute(BilevelKnapsackInstance(((1, 1),) * 19, 0, 0, 0))


# -- balanced partition -------------------------------------------------------


def test_partition_source_examples():
    assert solve_balanced_partition(PartitionInstance((1, 2, 7, 8, 9, 9), 18))
    assert not solve_balanced_partition(PartitionInstance((1, 5, 5, 5), 8))
    assert solve_balanced_partition(PartitionInstance((4, 4), 4))
    with pytest.raises(PreconditionError):
        PartitionInstance((1, 2), 2)
    with pytest.raises(PreconditionError):
        solve_balanced_partition(PartitionInstance((1, 1, 1, 9), 6), prime_required=True)


def test_lift_examples():
    lifted = lift_partition(PartitionInstance((1, 1, 1, 1), 2))
    assert lifted.values == (1, 1, 1, 1) + (6,) * 8 and lifted.half_sum == 26 and lifted.is_prime
    pair = lift_partition(PartitionInstance((3, 3), 3))
    assert len(pair.values) == 6 and solve_balanced_partition(pair)


def test_partition_generation_example():
    src = PartitionInstance((1, 2, 7, 8, 9, 9), 18)
    inst = gen_from_partition_prime(src)
    assert (inst.defense_budget, inst.attack_budget) == (234, 197)
    rows = voter_rows(inst)
    assert [r[1] for r in rows[:6]] == [73, 74, 79, 80, 81, 81]
    assert [r[2] for r in rows[:6]] == [71, 70, 65, 64, 63, 63]
    assert rows[6:11] == [(1, 235, 198, 2)] * 5
    assert rows[11:] == [(1, 1, 1, 1)] * 6
    assert inst.unit_weight and inst.designated == 2


def test_partition_generation_rejects_non_prime():
    with pytest.raises(PreconditionError):
        gen_from_partition_prime(PartitionInstance((1, 1, 1, 9), 6))


def test_partition_yes_instance_is_protected():
    assert solve_bruteforce(gen_from_partition_prime(PartitionInstance((1, 2, 7, 8, 9, 9), 18))).protected


def test_partition_no_instance_example():
    src = PartitionInstance((1, 5, 5, 5), 8)
    assert src.is_prime and not solve_balanced_partition(src)
    assert not solve_bruteforce(gen_from_partition_prime(src)).protected


def test_partition_no_instance_that_is_still_protected():
    # the cheapest n-1 value voters besides the smallest leave too little to
    # reach the attack budget, so the defender buys them and wins
    src = PartitionInstance((1, 1, 7, 7, 8, 10), 17)
    assert src.is_prime and not solve_balanced_partition(src)
    assert solve_bruteforce(gen_from_partition_prime(src)).protected


def test_partition_yes_direction_on_random_draws():
    rng = random.Random(7)
    for _ in range(60):
        src = random_partition_prime(rng)
        if solve_balanced_partition(src):
            assert solve_bruteforce(gen_from_partition_prime(src)).protected


def test_partition_protection_characterisation():
    # protected exactly when a partition exists or a_2 + ... + a_{n+1} <= q
    rng = random.Random(11)
    for _ in range(80):
        src = random_partition_prime(rng)
        n, a = src.n, src.values
        expected = solve_balanced_partition(src) or sum(a[1 : n + 1]) <= src.half_sum
        assert solve_bruteforce(gen_from_partition_prime(src)).protected == expected, src


# -- exists-forall 3DM ---------------------------------------------------------

YES2 = ExistsForall3DMInstance(2, ((1, 1, 1),), (), 1)
NO1 = ExistsForall3DMInstance(1, ((1, 1, 1),), (), 1)


def test_ef3dm_source_examples():
    assert solve_ef3dm_brute(YES2)
    assert not solve_ef3dm_brute(NO1)
    assert solve_ef3dm_brute(ExistsForall3DMInstance(3, (), (), 0))
    # t=0 with M2 a perfect matching: every empty choice completes
    assert not solve_ef3dm_brute(ExistsForall3DMInstance(1, (), ((1, 1, 1),), 0))


def test_ef3dm_preconditions():
    with pytest.raises(PreconditionError):
        ExistsForall3DMInstance(2, ((1, 1, 1), (1, 2, 2)), (), 1)
    with pytest.raises(PreconditionError):
        ExistsForall3DMInstance(2, ((1, 1, 1),), ((1, 1, 1),), 0)
    with pytest.raises(PreconditionError):
        ExistsForall3DMInstance(2, ((1, 1, 3),), (), 0)
    with pytest.raises(PreconditionError):
        gen_from_ef3dm(YES2, r=3)


def test_ef3dm_generation_counts():
    inst = gen_from_ef3dm(YES2)
    assert (inst.defense_budget, inst.attack_budget) == (0, 2)
    assert inst.mode is Mode.CONSTRUCTIVE and inst.designated == 8
    # one key voter, 21 element pads, 3 leader pads, 2 designated pads
    assert inst.n == 27
    scores = inst.no_bribery.scores
    assert [scores[c] for c in range(1, 9)] == [4] * 7 + [2]
    assert all(scores[c] == 1 for c in range(9, inst.m + 1))
    wide = gen_from_ef3dm(YES2, r=5)
    assert wide.n == 27 and {len(v.pref.head) for v in wide.voters} == {5}
    assert wide.rule.approval_shape()[0] == 5


def test_ef3dm_pinned_equivalences():
    assert solve_bruteforce(gen_from_ef3dm(YES2)).protected
    no = gen_from_ef3dm(NO1)
    v = solve_bruteforce(no)
    assert not v.protected and v.counterattack.bribed == {1}


def test_ef3dm_voter_layout_is_deterministic():
    src = ExistsForall3DMInstance(2, ((1, 1, 1), (2, 2, 2)), ((1, 2, 1),), 1)
    a, b = gen_from_ef3dm(src), gen_from_ef3dm(src)
    assert a == b
    # two copies of the M2 voter share their dummy candidate
    assert a.voters[2].pref.head == a.voters[3].pref.head
    assert a.voters[2].pref.head[:3] == (1, 4, 5)
    assert a.no_bribery.scores == {**a.no_bribery.scores, **ef3dm_target_scores(src)}


def test_ef3dm_padding_errors():
    src = ExistsForall3DMInstance(1, ((1, 1, 1),), (), 0)
    with pytest.raises(PreconditionError):
        gen_from_ef3dm(src, xi=0)


def test_ef3dm_counting_defense_has_no_attack():
    rng = random.Random(3)
    checked = 0
    for _ in range(40):
        src = random_ef3dm(rng, n=2)
        if not solve_ef3dm_brute(src):
            continue
        inst = gen_from_ef3dm(src)
        from itertools import combinations

        for u1 in combinations(range(len(src.triples_m1)), src.t):
            covered = tuple({src.triples_m1[k][a] for k in u1} for a in range(3))
            if exact_cover(src.triples_m2, src.n, covered) is None:
                break
        awarded = {k + 1 for k in range(len(src.triples_m1)) if k not in u1}
        assert constructive_attack_bruteforce(inst, awarded) is None
        checked += 1
    assert checked >= 5


# -- bounded 3DM ---------------------------------------------------------------


def test_3dm_source_examples():
    assert solve_3dm_brute(ThreeDMInstance(1, ((1, 1, 1),), 1))
    assert not solve_3dm_brute(ThreeDMInstance(2, ((1, 1, 1), (1, 2, 2)), 2))
    assert solve_3dm_brute(ThreeDMInstance(2, ((1, 1, 1), (2, 2, 2), (1, 2, 1)), 2))
    with pytest.raises(GuardError):
        solve_3dm_brute(ThreeDMInstance(9, ((1, 1, 1),), 1))
    with pytest.raises(PreconditionError):
        ThreeDMInstance(2, ((1, 1, 1), (1, 2, 2)), 1)


def test_tdm_parameter_example():
    src = ThreeDMInstance(2, ((1, 1, 1), (1, 2, 2), (1, 1, 2), (2, 2, 1), (2, 1, 1), (2, 2, 2)), 3)
    p = tdm_parameters(src)
    assert src.eta == 6 and (p["Q"], p["F"], p["B"]) == (13, 2, 4)
    assert p["f"] == [15] * 6 and p["f_lead"] == 17


def test_tdm_rejects_small_eta():
    src = ThreeDMInstance(2, ((1, 1, 1), (2, 2, 2)), 1)
    with pytest.raises(PreconditionError):
        gen_from_3dm(src)


def test_tdm_padding_and_strict_leader():
    rng = random.Random(5)
    for _ in range(5):
        src = random_tdm(rng)
        inst = gen_from_3dm(src)
        scores = inst.no_bribery.scores
        target = tdm_target_scores(src)
        assert {c: scores[c] for c in target} == target
        lead = inst.designated
        assert all(scores[lead] > s for c, s in scores.items() if c != lead)
        assert inst.defense_budget == src.zeta and inst.attack_budget == src.eta - src.zeta
