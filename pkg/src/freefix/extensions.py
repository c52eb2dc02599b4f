"""Fringe, free-factor test and algebraic extensions of a subgroup."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from .budget import DEFAULT, Budget
from .errors import AlphabetMismatchError, BudgetExceededError, NotASubgroupError
from .stallings import (
    SubgroupGraph,
    from_raw,
    is_subgroup,
    quotient,
    rewrite_in,
)
from .whitehead import is_free_factor_of_ambient


@dataclass(frozen=True)
class ExtensionSet:
    base: SubgroupGraph
    members: tuple[SubgroupGraph, ...]
    kind: str

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, K):
        return K in self.members


def set_partitions(m: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings of length m, i.e. set partitions of range(m)."""
    if m == 0:
        yield ()
        return
    rgs = [0] * m
    maxes = [0] * m  # maxes[i] = max(rgs[:i]) (for i >= 1)
    while True:
        yield tuple(rgs)
        i = m - 1
        while i > 0 and rgs[i] > maxes[i]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        for j in range(i + 1, m):
            rgs[j] = 0
            maxes[j] = max(maxes[j - 1], rgs[j - 1])


def _ordered(H: SubgroupGraph, found) -> tuple[SubgroupGraph, ...]:
    rest = sorted((K for K in found if K != H), key=lambda K: K.sort_key())
    return (H, *rest)


def fringe(H: SubgroupGraph, budget: Budget = DEFAULT) -> ExtensionSet:
    """All folded quotients of H's core graph, H first, then by size and table."""
    m = H.num_vertices
    if m > budget.fringe_cap:
        raise BudgetExceededError(
            f"core graph has {m} vertices; the fringe cap is {budget.fringe_cap}")
    found = {quotient(H, blocks) for blocks in set_partitions(m)}
    return ExtensionSet(H, _ordered(H, found), "fringe")


def is_free_factor(H: SubgroupGraph, K: SubgroupGraph, budget: Budget = DEFAULT) -> bool:
    """Whether H is a free factor of K (H must lie in K)."""
    if H.alphabet != K.alphabet:
        raise AlphabetMismatchError("subgroups over different alphabets")
    if not is_subgroup(H, K):
        bad = next(w for w in H.basis if not is_subgroup(from_raw(H.alphabet, [w.letters]), K))
        raise NotASubgroupError(f"{bad} is not in the containing subgroup", bad)
    if H.rank == 0 or H == K:
        return True
    if H.rank >= K.rank:
        return False
    words = rewrite_in(H, K)
    inner = from_raw(words[0].alphabet, [w.letters for w in words])
    return is_free_factor_of_ambient(inner, budget)


def algebraic_extensions(H: SubgroupGraph, budget: Budget = DEFAULT) -> ExtensionSet:
    """Fringe members not having a proper free factor among the other members."""
    fr = fringe(H, budget)
    keep = []
    for j, Hj in enumerate(fr.members):
        drop = False
        for i, Hi in enumerate(fr.members):
            if i != j and is_subgroup(Hi, Hj) and is_free_factor(Hi, Hj, budget):
                drop = True
                break
        if not drop:
            keep.append(Hj)
    return ExtensionSet(H, tuple(keep), "algebraic")
