"""Voter grouping and count-vector enumeration.

Two voters are *interchangeable* when some relabelling of candidates maps
the instance onto itself while swapping them.  The relabelling used here
only moves "private" candidates: a non-designated candidate that scores
above the bottom score on exactly one voter's list.  Interchangeable voters
can be treated as copies, so enumerations only need to choose how many of
each group to take.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Iterator, Sequence

from .core import ProtectionInstance


def private_owners(instance: ProtectionInstance) -> dict[int, int]:
    """Map each private candidate to the (1-based) voter that owns it."""
    seen: dict[int, int] = {}
    shared: set[int] = set()
    for j, ex in enumerate(instance.excess, 1):
        for c in ex:
            if c in seen:
                shared.add(c)
            else:
                seen[c] = j
    return {c: j for c, j in seen.items() if c not in shared and c != instance.designated}


def score_signature(instance: ProtectionInstance, j: int, owners: dict[int, int]) -> tuple:
    """What voter ``j`` contributes, up to relabelling of its private candidates."""
    ex = instance.excess[j - 1]
    public = tuple(sorted((c, e) for c, e in ex.items() if owners.get(c) != j))
    private = tuple(sorted(e for c, e in ex.items() if owners.get(c) == j))
    return public, private


def group_voters(members: Iterable[int], key: Callable[[int], object]) -> list[list[int]]:
    """Partition ``members`` by ``key``; groups keep first-seen order."""
    groups: dict[object, list[int]] = defaultdict(list)
    for j in members:
        groups[key(j)].append(j)
    return list(groups.values())


def identical_groups(instance: ProtectionInstance, members: Iterable[int]) -> list[list[int]]:
    """Groups of voters that are exact copies up to private relabelling."""
    owners = private_owners(instance)

    def key(j):
        v = instance.voter(j)
        return v.weight, v.price_award, v.price_bribe, score_signature(instance, j, owners)

    return [sorted(g) for g in group_voters(sorted(members), key)]


def count_vectors(
    prefix_costs: Sequence[Sequence[int]], budget: int, maximal: bool = False
) -> Iterator[tuple[int, ...]]:
    """Yield count vectors ``k`` with ``sum(prefix_costs[g][k[g]]) <= budget``.

    ``prefix_costs[g][k]`` is the cost of the first ``k`` members of group
    ``g`` (so ``prefix_costs[g][0] == 0``).  Vectors come in lexicographic
    order, earlier groups most significant, counts ascending.  With
    ``maximal`` only vectors that no group can extend within budget are
    produced.
    """
    ngroups = len(prefix_costs)
    counts = [0] * ngroups

    def rec(g, left):
        if g == ngroups:
            if maximal:
                for h in range(ngroups):
                    pc = prefix_costs[h]
                    k = counts[h]
                    if k + 1 < len(pc) and pc[k + 1] - pc[k] <= left:
                        return
            yield tuple(counts)
            return
        pc = prefix_costs[g]
        for k in range(len(pc)):
            if pc[k] > left:
                break
            counts[g] = k
            yield from rec(g + 1, left - pc[k])
        counts[g] = 0

    yield from rec(0, budget)


def count_vector_bound(prefix_costs: Sequence[Sequence[int]], budget: int) -> int:
    """Cheap upper bound on how many vectors :func:`count_vectors` yields."""
    total = 1
    for pc in prefix_costs:
        total *= sum(1 for c in pc if c <= budget)
    return total


def prefix_sums(values: Iterable[int]) -> list[int]:
    out = [0]
    for v in values:
        out.append(out[-1] + v)
    return out


def pick(groups: Sequence[Sequence[int]], counts: Sequence[int]) -> list[int]:
    return sorted(j for g, k in zip(groups, counts) for j in g[:k])
