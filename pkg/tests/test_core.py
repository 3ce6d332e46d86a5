import pytest

from election_protection.core import (
    Mode,
    PreferenceList,
    ScoringRule,
    build_scoring_rule,
    check_instance,
    constructive_success,
    destructive_success,
    make_instance,
    permutation_rank,
    tally,
    validate_instance,
    Tally,
)
from election_protection.errors import ProtectionError


def test_rule_constructors():
    assert build_scoring_rule("approval", 4, r=2).alpha == (1, 1, 0, 0)
    assert build_scoring_rule("veto", 3).alpha == (1, 1, 0)
    assert build_scoring_rule("borda", 3).alpha == (2, 1, 0)
    assert build_scoring_rule("plurality", 4).alpha == build_scoring_rule("approval", 4, r=1).alpha


def test_rule_errors_name_the_position():
    with pytest.raises(ProtectionError) as exc:
        build_scoring_rule("custom", 3, alpha=[3, 1, 2])
    assert exc.value.code == "E_ALPHA" and "position 3" in exc.value.message
    with pytest.raises(ProtectionError):
        build_scoring_rule("approval", 3, r=4)
    with pytest.raises(ProtectionError):
        build_scoring_rule("approval", 3, r=0)


def test_trivial_flag():
    assert not ScoringRule((2, 2, 2)).nontrivial
    assert ScoringRule((2, 2, 1)).nontrivial


def test_tally_examples():
    inst = make_instance(2, [(3, [1, 2]), (1, [2, 1])], "plurality")
    t = tally(inst)
    assert (t[1], t[2]) == (3, 1)
    t = tally(inst, {1: PreferenceList.of([2, 1])})
    assert (t[1], t[2]) == (0, 4)
    borda = make_instance(3, [(2, [2, 3, 1])], "borda")
    assert tally(borda).scores == {1: 0, 2: 4, 3: 2}


def test_tally_rejects_bad_override():
    inst = make_instance(2, [(1, [1, 2])])
    with pytest.raises(ProtectionError):
        tally(inst, {2: PreferenceList.of([1, 2])})
    with pytest.raises(ProtectionError):
        tally(inst, {1: PreferenceList.of([1, 1])})


def test_success_predicates():
    assert constructive_success(Tally({1: 3, 2: 5}), 2)
    assert not constructive_success(Tally({1: 5, 2: 5}), 2)
    assert not constructive_success(Tally({1: 4, 2: 3, 3: 4}), 3)
    assert destructive_success(Tally({1: 6, 2: 5}), 2)
    assert not destructive_success(Tally({1: 5, 2: 5}), 2)
    assert not destructive_success(Tally({1: 1, 2: 9}), 2)


def test_validate_instance():
    good = make_instance(2, [(1, [2, 1])], designated=2)
    assert validate_instance(good) == []
    bad = make_instance(2, [(1, [1, 1])])
    diags = validate_instance(bad)
    assert diags[0].code == "E_PERM" and "not a permutation" in diags[0].message
    lost = make_instance(2, [(1, [1, 2])], mode="destructive", designated=2)
    (w,) = validate_instance(lost)
    assert w.level == "warning" and w.code == "W_WINNER"
    trivial = make_instance(2, [(1, [1, 2])], ScoringRule((1, 1)))
    assert [d.code for d in validate_instance(trivial, require_nontrivial=True)] == ["E_TRIVIAL"]
    with pytest.raises(ProtectionError):
        check_instance(bad)


def test_validate_catches_structure():
    inst = make_instance(2, [(0, [1, 2], 1, 0)], F=-1)
    codes = {d.code for d in validate_instance(inst)}
    assert {"E_WEIGHT", "E_PRICE", "E_BUDGET"} <= codes
    one = make_instance(1, [], build_scoring_rule("plurality", 1), designated=1)
    assert "E_STRUCT" in {d.code for d in validate_instance(one)}


def test_prefix_lists_fill_in_ascending():
    p = PreferenceList((4, 2), 5)
    assert p.order == (4, 2, 1, 3, 5)
    assert p.inverse[3] == 4 and p.position(2) == 2
    assert p == PreferenceList.of([4, 2, 1, 3, 5])
    assert hash(p) == hash(PreferenceList((4, 2, 1), 5))
    assert PreferenceList((1, 2, 3), 3) == PreferenceList((), 3)
    assert PreferenceList((2, 1), 3) != PreferenceList((1, 2), 3)


def test_prefix_lists_tally_like_full_lists():
    a = make_instance(6, [(2, PreferenceList((5, 3), 6)), (1, [6, 1])], "borda")
    b = make_instance(6, [(2, [5, 3, 1, 2, 4, 6]), (1, [6, 1, 2, 3, 4, 5])], "borda")
    assert tally(a).scores == tally(b).scores


def test_variant_flags():
    inst = make_instance(2, [(1, [1, 2], 2, 2), (1, [2, 1], 3, 3)])
    assert inst.unit_weight and inst.symmetric and not inst.unit_price
    assert inst.mode is Mode.DESTRUCTIVE


def test_permutation_rank():
    assert permutation_rank((1, 2, 3)) == 0
    assert permutation_rank((3, 2, 1)) == 5
    assert permutation_rank((2, 1, 3)) == 2
