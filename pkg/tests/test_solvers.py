import pytest

from election_protection.core import Voter, make_instance, PreferenceList
from election_protection.dispatch import class_solver, hardness_note, solve, variant
from election_protection.errors import DomainError, GuardError
from election_protection.solvers import (
    DefenseCertificate,
    canonical_class_order,
    dominates,
    solve_bruteforce,
    solve_constm_destructive_weighted,
    solve_constm_symmetric_priced,
    verify_defense_certificate,
)

P12 = PreferenceList.of([1, 2])


def three_candidates(F):
    return make_instance(3, [(1, [1, 2, 3]), (1, [1, 2, 3]), (1, [3, 1, 2])], "plurality", F=F, B=1,
                         mode="constructive", designated=3)


def weighted_pair(F, B=1):
    return make_instance(2, [(3, [2, 1]), (2, [1, 2])], "plurality", F=F, B=B, mode="destructive", designated=2)


def symmetric_example(F=3, B=3):
    return make_instance(2, [(1, [2, 1], 3, 3), (1, [2, 1], 3, 3), (1, [1, 2], 1, 1)], F=F, B=B, designated=2)


def test_dominates():
    assert dominates(Voter(2, P12, 1, 1), Voter(1, P12, 2, 2), 1, 2)
    assert not dominates(Voter(1, P12, 2, 2), Voter(2, P12, 1, 1), 2, 1)
    assert dominates(Voter(1, P12), Voter(1, P12), 5, 3)
    assert not dominates(Voter(1, P12), Voter(1, P12), 3, 5)
    assert not dominates(Voter(9, P12), Voter(1, PreferenceList.of([2, 1])), 1, 2)
    # incomparable: heavier but pricier
    assert not dominates(Voter(2, P12, 3, 1), Voter(1, P12, 1, 1), 1, 2)


def test_class_order_examples():
    inst = make_instance(2, [(1, [1, 2]), (5, [1, 2]), (3, [1, 2])])
    (cls,) = canonical_class_order(inst)
    assert [inst.voter(j).weight for j in cls.members] == [5, 3, 1]
    sym = make_instance(2, [(1, [1, 2], 4, 4), (1, [1, 2], 2, 2), (1, [1, 2], 7, 7)])
    (cls,) = canonical_class_order(sym)
    assert [sym.voter(j).price_award for j in cls.members] == [2, 4, 7]
    twins = make_instance(2, [(1, [2, 1])] + [(1, [1, 2])] * 6)
    rest = canonical_class_order(twins, [2, 7])
    assert rest[0].members == (7, 2)


def test_class_ids_follow_permutation_rank():
    inst = make_instance(3, [(1, [3, 2, 1]), (1, [1, 2, 3]), (1, [2, 1, 3])])
    assert [c.class_id for c in canonical_class_order(inst)] == [0, 2, 5]


def test_bruteforce_examples():
    v = solve_bruteforce(three_candidates(2))
    assert v.protected and v.defense.awarded == {1, 2} and v.defense.cost == 2
    v = solve_bruteforce(three_candidates(1))
    assert not v.protected and v.counterattack is not None
    assert v.counterattack.bribed.isdisjoint(v.defense.awarded)


def test_bruteforce_full_defense():
    inst = weighted_pair(F=2, B=5)
    v = solve_bruteforce(inst)
    assert v.protected
    lost = inst.replace(designated=1)
    assert not solve_bruteforce(lost).protected


def test_bruteforce_reports_smallest_defense():
    inst = weighted_pair(F=2)
    v = solve_bruteforce(inst)
    assert v.protected and v.defense.awarded == {1}


def test_bruteforce_guard():
    voters = [(k + 1, [2, 1] if k % 2 else [1, 2], 1, 1) for k in range(30)]
    inst = make_instance(2, voters, F=15, B=3, designated=2)
    with pytest.raises(GuardError):
        solve_bruteforce(inst, max_n=10)


def test_constm_destructive_examples():
    v = solve_constm_destructive_weighted(weighted_pair(F=1))
    assert v.protected and v.defense.awarded == {1}
    assert not solve_constm_destructive_weighted(weighted_pair(F=0)).protected
    one_class = make_instance(2, [(2, [2, 1]), (1, [2, 1]), (4, [2, 1])], F=3, B=3, designated=2)
    assert solve_constm_destructive_weighted(one_class).protected
    assert not solve_constm_destructive_weighted(one_class.replace(designated=1)).protected


def test_constm_destructive_domain():
    with pytest.raises(DomainError):
        solve_constm_destructive_weighted(three_candidates(1))
    with pytest.raises(DomainError):
        solve_constm_destructive_weighted(symmetric_example())
    wide = make_instance(5, [(1, [5, 1, 2, 3, 4])], designated=5)
    with pytest.raises(GuardError):
        solve_constm_destructive_weighted(wide)


def test_constm_symmetric_example():
    # ground truth by full enumeration: whichever c2 voter is awarded, the
    # attacker pays 3 for the other and c1 wins 2 to 1
    inst = symmetric_example()
    assert inst.no_bribery.scores == {1: 1, 2: 2}
    truth = solve_bruteforce(inst)
    v = solve_constm_symmetric_priced(inst)
    assert not truth.protected and not v.protected
    assert len(v.defense.awarded) == 1 and v.counterattack.cost == 3
    # with F=6 both c2 voters are awarded and the lone c1 voter cannot catch up
    assert solve_constm_symmetric_priced(symmetric_example(F=6)).protected


def test_constm_symmetric_trivial_cases():
    assert solve_constm_symmetric_priced(symmetric_example(F=0, B=0)).protected
    lost = symmetric_example(F=0, B=0).replace(designated=1)
    assert not solve_constm_symmetric_priced(lost).protected
    assert solve_constm_symmetric_priced(symmetric_example(F=7, B=9)).protected


def test_constm_symmetric_constructive():
    inst = three_candidates(2)
    assert solve_constm_symmetric_priced(inst).protected
    assert not solve_constm_symmetric_priced(three_candidates(1)).protected


def test_constm_symmetric_domain():
    with pytest.raises(DomainError):
        solve_constm_symmetric_priced(weighted_pair(F=1))
    with pytest.raises(DomainError):
        solve_constm_symmetric_priced(make_instance(2, [(1, [2, 1], 1, 2)], designated=2))


def test_verify_defense():
    inst = three_candidates(2)
    check, attack = verify_defense_certificate(inst, DefenseCertificate(frozenset({1, 2}), 2))
    assert check and attack is None
    check, _ = verify_defense_certificate(inst, DefenseCertificate(frozenset({1, 2, 3}), 3))
    assert not check and "budget" in check.reason
    check, attack = verify_defense_certificate(inst, DefenseCertificate(frozenset(), 0))
    assert not check and attack is not None
    check, _ = verify_defense_certificate(inst, DefenseCertificate(frozenset({1}), 5))
    assert "stated cost" in check.reason
    check, _ = verify_defense_certificate(inst, DefenseCertificate(frozenset({9}), 1))
    assert not check


def test_verify_defense_undecided():
    voters = [(1, [1, 2, 3]) for _ in range(25)] + [(1, [3, 2, 1])]
    inst = make_instance(3, voters, "plurality", B=25, mode="constructive", designated=3)
    with pytest.raises(GuardError, match="undecided at this scale"):
        verify_defense_certificate(inst, DefenseCertificate(frozenset(), 0), max_n=4)


def test_variant_rows():
    assert variant(weighted_pair(1)) == "weighted unit-price"
    assert variant(symmetric_example()) == "unit-weight symmetric-priced"
    assert variant(make_instance(2, [(1, [1, 2], 1, 2)])) == "unit-weight asymmetric-priced"
    assert variant(make_instance(2, [(2, [1, 2], 1, 2)])) == "weighted priced"
    assert variant(three_candidates(1)) == "unit-weight unit-price"


def test_dispatch_routes_to_class_solvers():
    assert class_solver(weighted_pair(1)) is solve_constm_destructive_weighted
    assert class_solver(symmetric_example()) is solve_constm_symmetric_priced
    assert class_solver(make_instance(2, [(2, [1, 2], 1, 2)])) is None
    v, why = solve(weighted_pair(1))
    assert v.solver == "constm-destructive" and why is None
    v, _ = solve(weighted_pair(1), "brute")
    assert v.solver == "brute"
    with pytest.raises(DomainError):
        solve(make_instance(2, [(2, [1, 2], 1, 2)]), "const-m")
    with pytest.raises(ValueError):
        solve(weighted_pair(1), "magic")


def test_dispatch_undecided_path():
    voters = [(k % 4 + 1, [1, 2] if k % 3 else [2, 1], k % 5 + 1, k % 3 + 1) for k in range(25)]
    inst = make_instance(2, voters, F=30, B=20, designated=2)
    v, why = solve(inst, max_n=12)
    assert v is None
    assert "weighted priced" in why and "Sigma_2^p" in why


def test_hardness_note_texture():
    note = hardness_note(three_candidates(1).replace(m=3))
    assert note.startswith("constructive protection, unit-weight unit-price, for constant m")
