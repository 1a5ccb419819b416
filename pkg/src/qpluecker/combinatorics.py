"""Ordered subsets of a vertex basis and the sign count used by every relation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from .scalars import DomainError


@dataclass(frozen=True, order=True)
class IndexSubset:
    """A strictly increasing set of local basis indices (1-based) at one vertex."""

    vertex: str
    members: tuple[int, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if any(b <= a for a, b in zip(members, members[1:])):
            raise DomainError(f"subset members must be strictly increasing: {members}")
        if members and members[0] < 1:
            raise DomainError(f"basis indices start at 1: {members}")

    @classmethod
    def of(cls, vertex: str, members: Iterable[int]) -> "IndexSubset":
        """Build from any iterable; duplicates are rejected, order is normalized."""
        ms = list(members)
        if len(set(ms)) != len(ms):
            raise DomainError(f"duplicate basis index in {ms}")
        return cls(vertex, tuple(sorted(ms)))

    def __len__(self):
        return len(self.members)

    def __contains__(self, i: int):
        return i in self.members

    def __iter__(self):
        return iter(self.members)

    def with_(self, i: int) -> "IndexSubset":
        if i in self.members:
            raise DomainError(f"{i} already in {self.members}")
        return IndexSubset.of(self.vertex, self.members + (i,))

    def without(self, i: int) -> "IndexSubset":
        if i not in self.members:
            raise DomainError(f"{i} not in {self.members}")
        return IndexSubset(self.vertex, tuple(m for m in self.members if m != i))

    def check_within(self, d: int) -> None:
        if self.members and self.members[-1] > d:
            raise DomainError(
                f"subset {self.members} at vertex {self.vertex!r} exceeds dimension {d}"
            )


def epsilon(i: int, subset: IndexSubset | Iterable[int], d: int | None = None) -> int:
    """Number of members of ``subset`` that are <= ``i``.

    ``i`` may or may not belong to the subset.  When ``d`` is given, ``i`` is
    checked against the basis range 1..d.
    """
    if d is not None and not 1 <= i <= d:
        raise DomainError(f"basis index {i} outside 1..{d}")
    members = subset.members if isinstance(subset, IndexSubset) else tuple(subset)
    return sum(1 for m in members if m <= i)


def k_subsets(vertex: str, d: int, k: int) -> list[IndexSubset]:
    """All k-subsets of {1..d} at ``vertex`` in lexicographic order."""
    if k < 0 or k > d:
        raise DomainError(f"no {k}-subsets of a {d}-element basis")
    return [IndexSubset(vertex, c) for c in combinations(range(1, d + 1), k)]


def subset_rank(subset: IndexSubset, d: int) -> int:
    """0-based position of ``subset`` in ``k_subsets(vertex, d, len(subset))``."""
    subset.check_within(d)
    k = len(subset)
    rank = 0
    prev = 0
    for pos, m in enumerate(subset.members):
        for skipped in range(prev + 1, m):
            rank += comb(d - skipped, k - pos - 1)
        prev = m
    return rank


def subset_unrank(vertex: str, d: int, k: int, rank: int) -> IndexSubset:
    """Inverse of :func:`subset_rank`."""
    if not 0 <= rank < comb(d, k):
        raise DomainError(f"rank {rank} out of range for {k}-subsets of {d}")
    members = []
    x = 1
    for pos in range(k):
        while True:
            block = comb(d - x, k - pos - 1)
            if rank < block:
                break
            rank -= block
            x += 1
        members.append(x)
        x += 1
    return IndexSubset(vertex, tuple(members))
