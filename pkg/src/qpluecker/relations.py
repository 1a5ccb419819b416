"""Quiver Plücker relations, their higher-order and classical variants, and chart formulas."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from .combinatorics import IndexSubset, epsilon, k_subsets
from .model import Matrix, Path, Representation, enumerate_paths, path_matrix, validate_representation
from .pluecker import PlueckerVector
from .polynomials import RelationPolynomial, canonical_string
from .scalars import DomainError, Scalar


class ChartError(DomainError):
    """The chosen chart coordinate vanishes."""


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def relation_from_matrix(
    matrix: Matrix, p: str, d_p: int, q: str, d_q: int, I: IndexSubset, J: IndexSubset
) -> RelationPolynomial:
    """Σ_{i∉I, j∈J} (-1)^(ε(i,I)+ε(j,J)) m[j,i] Δ_{I+i} Δ_{J-j}, before normalization."""
    if I.vertex != p or J.vertex != q:
        raise DomainError(f"subsets must sit at {p!r} and {q!r}, got {I.vertex!r} and {J.vertex!r}")
    I.check_within(d_p)
    J.check_within(d_q)
    terms = []
    for i in range(1, d_p + 1):
        if i in I:
            continue
        si = epsilon(i, I)
        plus_i = I.with_(i)
        for j in J:
            m = matrix[j - 1][i - 1]
            if not m:
                continue
            c = m if (si + epsilon(j, J)) % 2 == 0 else -m
            terms.append(((plus_i, J.without(j)), c))
    return RelationPolynomial(terms)


def _check_sizes(rep: Representation, dims: Mapping[str, int], p: str, q: str, I, J):
    e_p, e_q, d_q = dims[p], dims[q], rep.dim(q)
    if e_p < 1 or e_q + 1 > d_q:
        raise DomainError(
            f"no relations exist when e_{p}={e_p} < 1 or e_{q}+1={e_q + 1} > d_{q}={d_q}"
        )
    if len(I) != e_p - 1:
        raise DomainError(f"I must have {e_p - 1} elements, got {len(I)}")
    if len(J) != e_q + 1:
        raise DomainError(f"J must have {e_q + 1} elements, got {len(J)}")


def quiver_relation(
    rep: Representation, dims: Mapping[str, int], arrow: str, I: IndexSubset, J: IndexSubset
) -> RelationPolynomial:
    """The normalized relation E(v, I, J) for one arrow (possibly zero)."""
    a = rep.quiver.arrow(arrow)
    _check_sizes(rep, dims, a.source, a.target, I, J)
    poly = relation_from_matrix(
        rep.matrix(arrow), a.source, rep.dim(a.source), a.target, rep.dim(a.target), I, J
    )
    return poly.normalized()


def higher_order_relation(
    rep: Representation, dims: Mapping[str, int], path: Path, I: IndexSubset, J: IndexSubset
) -> RelationPolynomial:
    """E(π, I, J): the same formula with the composite matrix of ``path``."""
    m = path_matrix(rep, path)
    _check_sizes(rep, dims, path.source, path.target, I, J)
    poly = relation_from_matrix(
        m, path.source, rep.dim(path.source), path.target, rep.dim(path.target), I, J
    )
    return poly.normalized()


def projective_key(poly: RelationPolynomial) -> RelationPolynomial:
    """Representative of the class of ``poly`` under nonzero rational scaling."""
    for c in poly.terms.values():
        return poly * Scalar.const(1 / c.leading())
    return poly


def _classical_entries(vertex: str, d: int, e: int) -> list[tuple["RelationLabel", RelationPolynomial]]:
    out = []
    if e < 1 or e + 1 > d:
        return out
    for I in k_subsets(vertex, d, e - 1):
        for J in k_subsets(vertex, d, e + 1):
            terms = []
            for i in J:
                if i in I:
                    continue
                s = _sign(epsilon(i, I) + epsilon(i, J))
                terms.append(((I.with_(i), J.without(i)), s))
            out.append((RelationLabel("classical", Path.trivial(vertex), I, J), RelationPolynomial(terms).normalized()))
    return out


def _content(poly: RelationPolynomial) -> Fraction:
    """Positive rational c such that poly / c has coprime integer coefficients."""
    rationals = [r for _, c in poly.items() for _, r in c.items()]
    return Fraction(gcd(*(r.numerator for r in rationals)), lcm(*(r.denominator for r in rationals)))


def _dedupe(entries):
    """Drop zeros and merge proportional polynomials; the first label survives.

    The survivor is rescaled to gcd(contents) times the primitive part, so
    that reducing it mod p vanishes exactly when every merged member does.
    """
    groups: dict[RelationPolynomial, list] = {}
    for label, poly in entries:
        if poly.is_zero():
            continue
        key = projective_key(poly)
        if key in groups:
            groups[key][2].append(_content(poly))
        else:
            groups[key] = [label, poly, [_content(poly)]]
    out = []
    for label, poly, contents in groups.values():
        scale = Fraction(gcd(*(c.numerator for c in contents)), lcm(*(c.denominator for c in contents)))
        out.append((label, poly * Scalar.const(scale / contents[0])))
    return out


def classical_relations(vertex: str, d: int, e: int) -> list[RelationPolynomial]:
    """Nonzero classical Plücker relations of Gr(e, d), deduplicated up to scaling."""
    return [poly for _, poly in _dedupe(_classical_entries(vertex, d, e))]


@dataclass(frozen=True)
class RelationLabel:
    """Generating datum of a relation: kind, path, and the subsets I and J."""

    kind: str
    path: Path
    I: IndexSubset
    J: IndexSubset

    def text(self, labels: Mapping[str, tuple[int, ...]] | None = None) -> str:
        def members(s: IndexSubset) -> str:
            if labels is None:
                return ",".join(map(str, s.members))
            return ",".join(str(labels[s.vertex][i - 1]) for i in s.members)

        I, J = members(self.I), members(self.J)
        if self.kind == "classical":
            return f"classical[{self.path.source}]({{{I}}},{{{J}}})"
        return f"E({self.path.label()},{{{I}}},{{{J}}})"


@dataclass(frozen=True)
class RelationSet:
    """Deduplicated relations of a quiver Grassmannian with their labels.

    ``generated`` keeps every (label, polynomial) pair in generation order,
    zero polynomials and duplicates included.
    """

    rep: Representation
    dims: Mapping[str, int]
    entries: tuple[tuple[RelationLabel, RelationPolynomial], ...]
    generated: tuple[tuple[RelationLabel, RelationPolynomial], ...] = field(default=(), repr=False)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def polynomials(self) -> list[RelationPolynomial]:
        return [poly for _, poly in self.entries]

    def labels(self) -> list[RelationLabel]:
        return [label for label, _ in self.entries]

    def without(self, index: int) -> "RelationSet":
        """Copy with the entry at ``index`` removed."""
        entries = self.entries[:index] + self.entries[index + 1:]
        return RelationSet(self.rep, self.dims, entries, self.generated)


def _path_entries(args):
    rep, dims, path = args
    p, q = path.source, path.target
    e_p, e_q, d_p, d_q = dims[p], dims[q], rep.dim(p), rep.dim(q)
    if e_p < 1 or e_q + 1 > d_q:
        return []
    m = path_matrix(rep, path)
    out = []
    for I in k_subsets(p, d_p, e_p - 1):
        for J in k_subsets(q, d_q, e_q + 1):
            poly = relation_from_matrix(m, p, d_p, q, d_q, I, J).normalized()
            out.append((RelationLabel("quiver", path, I, J), poly))
    return out


def check_dimension_vector(rep: Representation, dims: Mapping[str, int]) -> None:
    vertices = set(rep.quiver.vertices)
    if set(dims) != vertices:
        raise DomainError(
            f"dimension vector must cover exactly the vertices {sorted(vertices)}, got {sorted(dims)}"
        )
    for v in rep.quiver.vertices:
        if not 0 <= dims[v] <= rep.dim(v):
            raise DomainError(f"e_{v}={dims[v]} outside 0..{rep.dim(v)}")


def all_relations(
    rep: Representation,
    dims: Mapping[str, int],
    max_path_len: int = 1,
    include_classical: bool = False,
    workers: int = 1,
) -> RelationSet:
    """Classical relations (optional) followed by E(π,I,J) for paths of length 1..max_path_len."""
    report = validate_representation(rep)
    if not report.ok:
        raise DomainError("invalid representation: " + "; ".join(map(str, report.violations)))
    if max_path_len < 1:
        raise DomainError("max_path_len must be at least 1")
    dims = dict(dims)
    check_dimension_vector(rep, dims)
    generated = []
    if include_classical:
        for v in rep.quiver.vertices:
            generated.extend(_classical_entries(v, rep.dim(v), dims[v]))
    paths = [p for p in enumerate_paths(rep.quiver, max_path_len) if len(p) >= 1]
    jobs = [(rep, dims, p) for p in paths]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_path_entries, jobs))
    else:
        chunks = [_path_entries(j) for j in jobs]
    for chunk in chunks:
        generated.extend(chunk)
    return RelationSet(rep, dims, tuple(_dedupe(generated)), tuple(generated))


def _ratio(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def chart_basis(pv: PlueckerVector, I0: IndexSubset) -> list[tuple]:
    """Spanning vectors n_{i0} (i0 ∈ I0) of the subspace in the chart Δ_{I0} ≠ 0."""
    if len(I0) != pv.e:
        raise DomainError(f"chart subset must have {pv.e} elements")
    I0.check_within(pv.d)
    base = pv[I0]
    if not base:
        raise ChartError(f"Plücker coordinate at {I0.members} vanishes")
    out = []
    for i0 in I0:
        I = I0.without(i0)
        vec = []
        for i in range(1, pv.d + 1):
            if i in I0:
                vec.append(base * 0 + (1 if i == i0 else 0))
            else:
                s = _sign(epsilon(i, I) + epsilon(i0, I))
                vec.append(_ratio(pv[I.with_(i).members], base) * s)
        out.append(tuple(vec))
    return out


def dual_chart_coefficients(pv: PlueckerVector, J0: IndexSubset, j0: int | None = None):
    """Coefficients n_{j0,j} (j ∈ J0) expressing coordinate j0 of a member vector.

    A vector v lies in the subspace iff v_{j0} = Σ_j v_j n_{j0,j} for all
    j0 ∉ J0.  With ``j0`` given, returns {j: n_{j0,j}}; otherwise returns
    {j0: {j: n_{j0,j}}} over all j0 ∉ J0 (empty for the full space).
    """
    if len(J0) != pv.e:
        raise DomainError(f"chart subset must have {pv.e} elements")
    J0.check_within(pv.d)
    base = pv[J0]
    if not base:
        raise ChartError(f"Plücker coordinate at {J0.members} vanishes")
    if j0 is None:
        return {
            k: dual_chart_coefficients(pv, J0, k)
            for k in range(1, pv.d + 1)
            if k not in J0
        }
    if j0 in J0 or not 1 <= j0 <= pv.d:
        raise DomainError(f"j0={j0} must be a basis index outside {J0.members}")
    J = J0.with_(j0)
    return {
        j: _ratio(pv[J.without(j).members], base) * _sign(epsilon(j0, J) + epsilon(j, J) + 1)
        for j in J0
    }


def membership_forms(pv: PlueckerVector) -> list[tuple]:
    """Linear forms (as coefficient tuples of length d) cutting out the subspace.

    One form per (e+1)-subset J: v ↦ Σ_{j∈J} (-1)^ε(j,J) v_j Δ_{J-j}.
    """
    out = []
    if pv.e + 1 > pv.d:
        return out
    zero = pv.coords[0] * 0
    for J in k_subsets("", pv.d, pv.e + 1):
        form = [zero] * pv.d
        for j in J:
            form[j - 1] = pv[J.without(j).members] * _sign(epsilon(j, J))
        out.append(tuple(form))
    return out


def schubert_dehomogenize(
    rels: RelationSet | Sequence[RelationPolynomial],
    zeros: set[IndexSubset] | Sequence[IndexSubset],
    ones: Mapping[str, IndexSubset],
) -> list[RelationPolynomial]:
    """Set ``zeros`` to 0 and one coordinate per vertex to 1; drop vanishing results."""
    zeros = set(zeros)
    for vertex, v in ones.items():
        if v.vertex != vertex:
            raise DomainError(f"variable {v} is not at vertex {vertex!r}")
        if v in zeros:
            raise DomainError(f"variable {v} is set both to 0 and to 1")
    values: dict[IndexSubset, int] = {v: 0 for v in zeros}
    values.update({v: 1 for v in ones.values()})
    polys = rels.polynomials if isinstance(rels, RelationSet) else list(rels)
    out = {}
    for poly in polys:
        reduced = poly.substitute(values).normalized()
        if reduced.is_zero():
            continue
        out.setdefault(projective_key(reduced), reduced)
    return sorted(out.values(), key=canonical_string)


def chart_formulas(vertex: str, d: int, I0: IndexSubset) -> list[list[tuple[int, IndexSubset | None]]]:
    """Symbolic chart basis: entry i of n_{i0} as (sign, numerator subset).

    A ``None`` numerator stands for the constant sign itself (the identity
    block on I0, with sign 0 for zero entries); otherwise the entry is
    sign * Δ_numerator / Δ_I0.
    """
    I0.check_within(d)
    out = []
    for i0 in I0:
        I = I0.without(i0)
        row = []
        for i in range(1, d + 1):
            if i in I0:
                row.append((1 if i == i0 else 0, None))
            else:
                row.append((_sign(epsilon(i, I) + epsilon(i0, I)), I.with_(i)))
        out.append(row)
    return out
