"""Plücker vectors of subspaces: exact minors over Q or a prime field."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .combinatorics import IndexSubset, subset_rank


@dataclass(frozen=True)
class PlueckerVector:
    """Coordinates Δ_I of an e-dimensional subspace of a d-dimensional space.

    ``coords`` lists Δ_I for the e-subsets I of {1..d} in lexicographic order.
    Entries are Fractions, ints or FpElements.
    """

    d: int
    e: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != comb(self.d, self.e):
            raise ValueError(
                f"expected {comb(self.d, self.e)} coordinates for Gr({self.e},{self.d}), got {len(self.coords)}"
            )

    def __getitem__(self, members) -> object:
        if isinstance(members, IndexSubset):
            members = members.members
        return self.coords[subset_rank(IndexSubset("", tuple(members)), self.d)]

    def is_zero(self) -> bool:
        return not any(self.coords)


def determinant(m: Sequence[Sequence]):
    """Exact determinant by Gaussian elimination.

    Entries are ints, Fractions or FpElements; ints are promoted to Fractions.
    The empty matrix has determinant 1.
    """
    n = len(m)
    if n == 0:
        return 1
    a = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in m]
    det = a[0][0] * 0 + 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return a[0][0] * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def pluecker_coordinates(rows: Sequence[Sequence], d: int) -> PlueckerVector:
    """All maximal minors of the e x d matrix ``rows`` in lexicographic order."""
    e = len(rows)
    coords = []
    for cols in combinations(range(d), e):
        coords.append(determinant([[row[c] for c in cols] for row in rows]))
    return PlueckerVector(d, e, tuple(coords))
