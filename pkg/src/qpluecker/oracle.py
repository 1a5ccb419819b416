"""Finite-field ground truth by exhaustive enumeration.

Subrepresentations are found by testing A_v(N_p) ⊆ N_q directly on
row-reduced subspaces; the zero locus of a relation set is found by
evaluating the relations on Plücker vectors of all subspaces.  The two
routes share only the subspace enumeration.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Mapping, Sequence

import numpy as np

from .combinatorics import IndexSubset, subset_rank
from .model import Representation
from .pluecker import PlueckerVector, determinant
from .polynomials import RelationPolynomial
from .relations import RelationSet, check_dimension_vector
from .scalars import DomainError, FpElement, Number, is_prime, signed_term

# One normalized Plücker vector per vertex, in vertex declaration order.
GrassmannPoint = tuple[tuple[int, ...], ...]


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def gaussian_binomial(d: int, e: int, q: int) -> int:
    """Number of e-dimensional subspaces of F_q^d."""
    if not 0 <= e <= d:
        return 0
    num = den = 1
    for k in range(e):
        num *= q ** (d - k) - 1
        den *= q ** (k + 1) - 1
    return num // den


@dataclass(frozen=True, order=True)
class SubspaceRREF:
    """An e-dimensional subspace of F_p^d as its reduced row-echelon matrix.

    ``pivots`` are 1-based column indices; ``rows`` carry the identity on
    the pivot columns.
    """

    prime: int
    d: int
    pivots: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def e(self) -> int:
        return len(self.pivots)

    def pivot_set(self, vertex: str = "") -> IndexSubset:
        return IndexSubset(vertex, self.pivots)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], prime: int, d: int) -> "SubspaceRREF":
        """Row-reduce arbitrary spanning rows (rank must equal the row count)."""
        reduced, pivots = rref_mod(rows, prime, d)
        if len(pivots) != len(rows):
            raise DomainError("rows are linearly dependent")
        return cls(prime, d, tuple(c + 1 for c in pivots), tuple(tuple(r) for r in reduced))


def rref_mod(rows: Sequence[Sequence[int]], p: int, d: int):
    """Reduced row-echelon form mod p; returns (nonzero rows, 0-based pivot columns)."""
    a = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(d):
        piv = next((k for k in range(r, len(a)) if a[k][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for k in range(len(a)):
            if k != r and a[k][c]:
                f = a[k][c]
                a[k] = [(x - f * y) % p for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod(rows: Sequence[Sequence[int]], p: int, d: int) -> int:
    return len(rref_mod(rows, p, d)[1])


def _pivot_sets(d: int, e: int):
    return list(combinations(range(d), e))


def _free_positions(d: int, pivots: Sequence[int]) -> list[tuple[int, int]]:
    ps = set(pivots)
    return [(k, c) for k, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in ps]


def enumerate_subspaces(p: int, d: int, e: int) -> Iterator[SubspaceRREF]:
    """Every e-dimensional subspace of F_p^d exactly once.

    Pivot sets come in lexicographic order; within a pivot set the free
    entries run through an odometer in row-major order.
    """
    _require_prime(p)
    if not 0 <= e <= d:
        raise DomainError(f"no {e}-dimensional subspaces of F_{p}^{d}")
    for pivots in _pivot_sets(d, e):
        free = _free_positions(d, pivots)
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * d for _ in range(e)]
            for k, c in enumerate(pivots):
                rows[k][c] = 1
            for (k, c), x in zip(free, values):
                rows[k][c] = x
            yield SubspaceRREF(p, d, tuple(c + 1 for c in pivots), tuple(map(tuple, rows)))


def pluecker_of_subspace(S: SubspaceRREF) -> PlueckerVector:
    """Maximal minors of the row-reduced matrix, as FpElements (Δ_pivots = 1)."""
    rows = [[FpElement(x, S.prime) for x in row] for row in S.rows]
    coords = []
    for cols in combinations(range(S.d), S.e):
        det = determinant([[row[c] for c in cols] for row in rows])
        coords.append(FpElement(int(det), S.prime))
    return PlueckerVector(S.d, S.e, tuple(coords))


def normalize_projective(vec: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale so the first nonzero entry is 1."""
    for x in vec:
        if x % p:
            inv = pow(int(x), -1, p)
            return tuple(int(y) * inv % p for y in vec)
    raise DomainError("the zero vector has no projective class")


def _batch_det_mod(m: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of k x k integer matrices."""
    m = m.astype(np.int64) % p
    n, k, _ = m.shape
    det = np.ones(n, dtype=np.int64)
    if k == 0:
        return det
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    idx = np.arange(n)
    for c in range(k):
        nz = m[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = c + nz.argmax(axis=1)
        top = m[idx, c].copy()
        m[idx, c] = m[idx, piv]
        m[idx, piv] = top
        det = np.where(has & (piv != c), (-det) % p, det)
        pv = m[:, c, c]
        det = det * pv % p
        f = m[:, c + 1:, c] * inv_table[pv][:, None] % p
        m[:, c + 1:, :] = (m[:, c + 1:, :] - f[:, :, None] * m[:, c, None, :]) % p
    return det % p


@dataclass(frozen=True)
class SubspaceTable:
    """All e-subspaces of F_p^d as arrays, with normalized Plücker vectors."""

    prime: int
    d: int
    e: int
    rows: np.ndarray  # (n, e, d)
    pivots: np.ndarray  # (n, e), 0-based
    pluecker: np.ndarray  # (n, C(d, e))

    def __len__(self):
        return self.rows.shape[0]


@lru_cache(maxsize=128)
def subspace_table(p: int, d: int, e: int) -> SubspaceTable:
    _require_prime(p)
    blocks, piv_blocks = [], []
    for pivots in _pivot_sets(d, e):
        free = _free_positions(d, pivots)
        values = np.array(list(product(range(p), repeat=len(free))), dtype=np.int64).reshape(p ** len(free), len(free))
        block = np.zeros((values.shape[0], e, d), dtype=np.int64)
        for k, c in enumerate(pivots):
            block[:, k, c] = 1
        for t, (k, c) in enumerate(free):
            block[:, k, c] = values[:, t]
        blocks.append(block)
        piv_blocks.append(np.tile(np.array(pivots, dtype=np.int64), (values.shape[0], 1)))
    rows = np.concatenate(blocks) if blocks else np.zeros((0, e, d), dtype=np.int64)
    n = rows.shape[0]
    pivots = np.concatenate(piv_blocks).reshape(n, e) if piv_blocks else np.zeros((0, e), dtype=np.int64)
    minors = np.zeros((n, comb(d, e)), dtype=np.int64)
    for t, cols in enumerate(combinations(range(d), e)):
        minors[:, t] = _batch_det_mod(rows[:, :, list(cols)], p)
    first = (minors != 0).argmax(axis=1)
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    scale = inv_table[minors[np.arange(n), first]]
    minors = minors * scale[:, None] % p
    for arr in (rows, pivots, minors):
        arr.setflags(write=False)
    return SubspaceTable(p, d, e, rows, pivots, minors)


def _arrow_matrices_mod(rep: Representation, p: int, params: Mapping[str, Number] | None):
    values = params or {}
    mats = {}
    for a in rep.quiver.arrows:
        try:
            m = rep.matrix_mod(a.name, p, values)
        except DomainError as exc:
            raise DomainError(f"arrow {a.name}: {exc}") from None
        mats[a.name] = np.array(m, dtype=np.int64).reshape(rep.dim(a.target), rep.dim(a.source))
    return mats


def is_subrepresentation(
    rep: Representation,
    subspaces: Mapping[str, SubspaceRREF],
    prime: int,
    params: Mapping[str, Number] | None = None,
) -> bool:
    """Rank test: rank(rows of N_q stacked with A_v(rows of N_p)) == dim N_q for every arrow."""
    _require_prime(prime)
    for v, S in subspaces.items():
        if S.prime != prime:
            raise DomainError(f"subspace at {v!r} lives over F_{S.prime}, not F_{prime}")
        if S.d != rep.dim(v):
            raise DomainError(f"subspace at {v!r} has ambient dimension {S.d}, expected {rep.dim(v)}")
    values = params or {}
    for a in rep.quiver.arrows:
        m = rep.matrix_mod(a.name, prime, values)
        src, dst = subspaces[a.source], subspaces[a.target]
        images = [
            [sum(m[j][i] * row[i] for i in range(src.d)) % prime for j in range(dst.d)]
            for row in src.rows
        ]
        if rank_mod(list(dst.rows) + images, prime, dst.d) != dst.e:
            return False
    return True


@dataclass(frozen=True)
class PointSet:
    """Points of a product of Grassmannians over F_p, as normalized Plücker tuples."""

    prime: int
    vertices: tuple[str, ...]
    shape: tuple[tuple[int, int], ...]  # (d, e) per vertex
    points: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __contains__(self, pt):
        return pt in self.points

    def sorted(self) -> list[GrassmannPoint]:
        return sorted(self.points)

    def coordinate(self, pt: GrassmannPoint, var: IndexSubset) -> int:
        """Value of one Plücker coordinate of ``pt``."""
        k = self.vertices.index(var.vertex)
        return pt[k][subset_rank(var, self.shape[k][0])]

    def remove(self, pt: GrassmannPoint) -> "PointSet":
        return PointSet(self.prime, self.vertices, self.shape, self.points - {pt})


@dataclass(frozen=True)
class Comparison:
    equal: bool
    missing: tuple  # expected but absent
    extra: tuple  # present but not expected

    def __bool__(self):
        return self.equal

    def summary(self, limit: int = 3) -> str:
        if self.equal:
            return "equal"
        return (
            f"{len(self.missing)} missing (e.g. {list(self.missing[:limit])}), "
            f"{len(self.extra)} extra (e.g. {list(self.extra[:limit])})"
        )


def compare_sets(actual: PointSet, expected: PointSet) -> Comparison:
    """Symmetric difference of two point sets over the same field and shape."""
    if actual.prime != expected.prime:
        raise DomainError(f"point sets over F_{actual.prime} and F_{expected.prime}")
    if actual.vertices != expected.vertices or actual.shape != expected.shape:
        raise DomainError("point sets live in different products of Grassmannians")
    missing = tuple(sorted(expected.points - actual.points))
    extra = tuple(sorted(actual.points - expected.points))
    return Comparison(not missing and not extra, missing, extra)


def _contained(images: np.ndarray, rows: np.ndarray, pivots: np.ndarray, p: int) -> np.ndarray:
    """Which candidates contain their image vectors.

    images: (n, s, d) vectors to test; rows/pivots: (n, e, d) and (n, e)
    reduced bases.  Broadcasting over a leading axis of size 1 is allowed.
    """
    n = max(images.shape[0], rows.shape[0])
    images = np.broadcast_to(images, (n,) + images.shape[1:])
    rows = np.broadcast_to(rows, (n,) + rows.shape[1:])
    pivots = np.broadcast_to(pivots, (n,) + pivots.shape[1:])
    coeffs = np.take_along_axis(images, pivots[:, None, :], axis=2)
    residual = (images - np.einsum("nse,ned->nsd", coeffs, rows)) % p
    return ~residual.reshape(n, -1).any(axis=1)


class _Search:
    """Depth-first search over vertices; each level filters all candidates at once."""

    def __init__(self, vertices, tables, prime):
        self.vertices = vertices
        self.tables = tables
        self.prime = prime

    def level_filter(self, level: int, chosen: list[int]) -> np.ndarray:
        raise NotImplementedError

    def run(self, first: Sequence[int] | None = None) -> list[tuple[int, ...]]:
        out = []
        if not self.vertices:
            return [()]

        def go(level, chosen):
            if level == len(self.vertices):
                out.append(tuple(chosen))
                return
            ok = self.level_filter(level, chosen)
            cand = np.nonzero(ok)[0]
            if level == 0 and first is not None:
                cand = np.array([c for c in first if ok[c]], dtype=np.int64)
            for c in cand:
                chosen.append(int(c))
                go(level + 1, chosen)
                chosen.pop()

        go(0, [])
        return out


class _SubrepSearch(_Search):
    def __init__(self, rep, dims, prime, params):
        vertices = tuple(rep.quiver.vertices)
        tables = [subspace_table(prime, rep.dim(v), dims[v]) for v in vertices]
        super().__init__(vertices, tables, prime)
        mats = _arrow_matrices_mod(rep, prime, params)
        level = {v: k for k, v in enumerate(vertices)}
        # checks[k]: arrows whose later endpoint sits at level k
        self.checks = [[] for _ in vertices]
        for a in rep.quiver.arrows:
            s, t = level[a.source], level[a.target]
            self.checks[max(s, t)].append((s, t, mats[a.name]))

    def level_filter(self, level, chosen):
        p = self.prime
        tab = self.tables[level]
        ok = np.ones(len(tab), dtype=bool)
        for s, t, m in self.checks[level]:
            if s == t:
                images = np.einsum("ned,jd->nej", tab.rows, m) % p
                ok &= _contained(images, tab.rows, tab.pivots, p)
            elif t == level:
                src = self.tables[s].rows[chosen[s]]
                images = (src @ m.T % p)[None]
                ok &= _contained(images, tab.rows, tab.pivots, p)
            else:
                dst = self.tables[t]
                images = np.einsum("ned,jd->nej", tab.rows, m) % p
                ok &= _contained(images, dst.rows[chosen[t]][None], dst.pivots[chosen[t]][None], p)
        return ok


class _VarietySearch(_Search):
    def __init__(self, polys, vertices, ambient, dims, prime, params):
        tables = [subspace_table(prime, ambient[v], dims[v]) for v in vertices]
        super().__init__(vertices, tables, prime)
        level = {v: k for k, v in enumerate(vertices)}
        self.checks = [[] for _ in vertices]
        self.contradiction = False
        for poly in polys:
            compiled = []
            last = -1
            for mono, c in poly.items():
                coef = c.specialize(params or {}, prime)
                if not coef:
                    continue
                factors = []
                for var in mono:
                    if var.vertex not in level:
                        raise DomainError(f"relation mentions unknown vertex {var.vertex!r}")
                    k = level[var.vertex]
                    if len(var) != dims[var.vertex]:
                        raise DomainError(f"variable {var} does not match e_{var.vertex}={dims[var.vertex]}")
                    factors.append((k, subset_rank(var, ambient[var.vertex])))
                    last = max(last, k)
                compiled.append((coef, factors))
            if not compiled:
                continue
            if last < 0:
                self.contradiction = True
                continue
            self.checks[last].append(compiled)

    def level_filter(self, level, chosen):
        p = self.prime
        tab = self.tables[level]
        n = len(tab)
        ok = np.ones(n, dtype=bool)
        if self.contradiction:
            return ~ok
        for compiled in self.checks[level]:
            value = np.zeros(n, dtype=np.int64)
            for coef, factors in compiled:
                scal = coef
                term = None
                for k, idx in factors:
                    if k == level:
                        col = tab.pluecker[:, idx]
                        term = col if term is None else term * col % p
                    else:
                        scal = scal * int(self.tables[k].pluecker[chosen[k], idx]) % p
                if not scal:
                    continue
                value = (value + (scal if term is None else scal * term)) % p
            ok &= value == 0
        return ok


def _point(tables, chosen) -> GrassmannPoint:
    return tuple(tuple(int(x) for x in tab.pluecker[c]) for tab, c in zip(tables, chosen))


def _run_chunk(args):
    kind, payload, first = args
    search = _SubrepSearch(*payload) if kind == "subrep" else _VarietySearch(*payload)
    return sorted(_point(search.tables, c) for c in search.run(first))


def _search_points(kind, payload, workers: int) -> list[GrassmannPoint]:
    search = _SubrepSearch(*payload) if kind == "subrep" else _VarietySearch(*payload)
    if workers <= 1 or not search.vertices:
        return sorted(_point(search.tables, c) for c in search.run())
    n0 = len(search.tables[0])
    chunks = [list(range(n0))[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [(kind, payload, ch) for ch in chunks if ch]))
    return sorted(pt for part in parts for pt in part)


def _shape(vertices, ambient, dims):
    return tuple((ambient[v], dims[v]) for v in vertices)


def subrep_points(
    rep: Representation,
    dims: Mapping[str, int],
    prime: int,
    params: Mapping[str, Number] | None = None,
    workers: int = 1,
) -> PointSet:
    """Plücker images of all subrepresentations with dimension vector ``dims`` over F_p."""
    _require_prime(prime)
    dims = dict(dims)
    check_dimension_vector(rep, dims)
    pts = _search_points("subrep", (rep, dims, prime, params), workers)
    vertices = tuple(rep.quiver.vertices)
    return PointSet(prime, vertices, _shape(vertices, rep.dims, dims), frozenset(pts))


def variety_points(
    rels: RelationSet | Sequence[RelationPolynomial],
    dims: Mapping[str, int],
    ambient: Mapping[str, int] | Representation,
    prime: int,
    params: Mapping[str, Number] | None = None,
    workers: int = 1,
) -> PointSet:
    """Points of ∏ Gr(e_p, d_p)(F_p) where every relation vanishes.

    Candidate Plücker vectors come from actual subspaces, so the classical
    relations hold automatically.
    """
    _require_prime(prime)
    if isinstance(ambient, Representation):
        vertices = tuple(ambient.quiver.vertices)
        ambient = ambient.dims
    else:
        vertices = tuple(ambient)
    polys = rels.polynomials if isinstance(rels, RelationSet) else list(rels)
    dims = dict(dims)
    pts = _search_points("variety", (polys, vertices, dict(ambient), dims, prime, params), workers)
    return PointSet(prime, vertices, _shape(vertices, ambient, dims), frozenset(pts))


def count_points(rep, dims, prime, params=None, workers: int = 1) -> int:
    return len(subrep_points(rep, dims, prime, params, workers))


@dataclass(frozen=True)
class CountingPolynomial:
    """Exact interpolant of point counts, coefficients in ascending degree."""

    coefficients: tuple[Fraction, ...]
    samples: tuple[tuple[int, int], ...]
    validation: tuple[tuple[int, int], ...] = ()
    status: str = "validated"

    def __call__(self, q) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * q + c
        return total

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self):
        parts = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            body = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            parts.append(signed_term(c, body, first=not parts))
        return " ".join(parts) or "0"


@dataclass(frozen=True)
class FitFailure:
    """Counts that no polynomial of admissible degree explains."""

    reason: str
    prime: int | None = None
    count: int | None = None
    predicted: Fraction | None = None
    candidate: CountingPolynomial | None = None

    status = "non-polynomial-count"

    def __bool__(self):
        return False

    def __str__(self):
        if self.prime is None:
            return f"non-polynomial count: {self.reason}"
        return (
            f"non-polynomial count: {self.reason} at q={self.prime}: "
            f"counted {self.count}, interpolant predicts {self.predicted}"
        )


def interpolate(points: Sequence[tuple[int, int]]) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of the unique polynomial of degree < len(points) through them."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for k, (xk, yk) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for m, (xm, _) in enumerate(points):
            if m == k:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xm * basis[t + 1]
            denom *= xk - xm
        for t in range(n):
            coeffs[t] += yk * basis[t] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def fit_counting_polynomial(
    counts: Sequence[tuple[int, int]],
    validation: Sequence[tuple[int, int]] = (),
    degree_bound: int | None = None,
) -> CountingPolynomial | FitFailure:
    """Interpolate counts exactly and check the result against held-out counts.

    ``counts`` and ``validation`` are (q, count) pairs.  With a
    ``degree_bound`` at least bound+1 samples are required and the
    interpolant may not exceed the bound; without one the interpolant has
    degree < len(counts) and must be confirmed by at least one validation
    point.
    """
    qs = [q for q, _ in counts]
    if len(set(qs)) != len(qs):
        raise DomainError("sample points must be distinct")
    if not counts:
        raise DomainError("no samples")
    if degree_bound is not None and len(counts) < degree_bound + 1:
        raise DomainError(f"need at least {degree_bound + 1} samples for degree bound {degree_bound}")
    if degree_bound is None and not validation:
        raise DomainError("without a degree bound at least one validation point is required")
    coeffs = interpolate(list(counts))
    cp = CountingPolynomial(coeffs, tuple(counts), tuple(validation))
    if degree_bound is not None and cp.degree > degree_bound:
        return FitFailure(f"interpolant has degree {cp.degree} > bound {degree_bound}", candidate=cp)
    for q, n in validation:
        if cp(q) != n:
            return FitFailure("validation mismatch", q, n, cp(q), cp)
    for x in range(cp.degree + 1):
        if cp(x).denominator != 1:
            return FitFailure(f"interpolant is not integer-valued (value {cp(x)} at q={x})", candidate=cp)
    return cp


def euler_characteristic(cp: CountingPolynomial | FitFailure) -> int:
    """Value of a validated counting polynomial at q = 1."""
    if isinstance(cp, FitFailure):
        raise DomainError(f"no validated counting polynomial: {cp}")
    value = cp(1)
    if value.denominator != 1:
        raise ArithmeticError(f"counting polynomial takes non-integer value {value} at q=1")
    return int(value)


def degree_bound(rep: Representation, dims: Mapping[str, int]) -> int:
    """Dimension of the ambient product of Grassmannians."""
    return sum(dims[v] * (rep.dim(v) - dims[v]) for v in rep.quiver.vertices)
