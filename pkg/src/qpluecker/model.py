"""Quivers, their representations and path composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .scalars import DomainError, Number, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]


class StructuralError(ValueError):
    """A path or representation refers to something that is not in the quiver."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "arrows", tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        )

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise StructuralError(f"unknown arrow {name!r}")

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise StructuralError(f"unknown vertex {v!r}") from None

    def outgoing(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Scalar.lift(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Scalar.const(1 if i == j else 0) for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple(tuple(Scalar() for _ in range(cols)) for _ in range(rows))


def mat_mul(a: Matrix, b: Matrix, cols: int | None = None) -> Matrix:
    """Product of an (m x n) and an (n x k) matrix of scalars.

    ``cols`` gives k explicitly, needed when b has no rows.
    """
    n = len(b)
    k = (len(b[0]) if b else 0) if cols is None else cols
    out = []
    for row in a:
        out_row = []
        for col in range(k):
            s = Scalar()
            for t in range(n):
                if row[t] and b[t][col]:
                    s = s + row[t] * b[t][col]
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


@dataclass(frozen=True)
class Representation:
    """A quiver representation with a fixed ordered basis at each vertex.

    ``matrices[v]`` has ``dims[target]`` rows and ``dims[source]`` columns;
    the entry in row j, column i is the coefficient of basis vector j of the
    target in the image of basis vector i of the source.  ``labels`` gives
    an optional global display label for every local basis index.
    """

    quiver: Quiver
    dims: Mapping[str, int]
    matrices: Mapping[str, Matrix]
    parameters: tuple[str, ...] = ()
    labels: Mapping[str, tuple[int, ...]] | None = None
    name: str = "M"

    def __post_init__(self):
        object.__setattr__(self, "dims", dict(self.dims))
        object.__setattr__(
            self, "matrices", {k: as_matrix(m) for k, m in self.matrices.items()}
        )
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if self.labels is not None:
            object.__setattr__(
                self, "labels", {k: tuple(v) for k, v in self.labels.items()}
            )

    def dim(self, v: str) -> int:
        return self.dims[v]

    def matrix(self, arrow: str) -> Matrix:
        return self.matrices[arrow]

    def global_labels(self) -> dict[str, tuple[int, ...]]:
        """Global label of each local basis index, per vertex.

        Defaults to consecutive numbering in vertex declaration order.
        """
        if self.labels is not None:
            return dict(self.labels)
        out = {}
        start = 1
        for v in self.quiver.vertices:
            d = self.dims.get(v, 0)
            out[v] = tuple(range(start, start + d))
            start += d
        return out

    def specialize(self, values: Mapping[str, Number]) -> "Representation":
        """Substitute parameter values (rationals) into every matrix entry."""
        mats = {
            a: tuple(tuple(Scalar.const(x.specialize(values)) for x in row) for row in m)
            for a, m in self.matrices.items()
        }
        return Representation(
            self.quiver, self.dims, mats, (), self.labels, self.name
        )

    def is_specialized(self) -> bool:
        return all(x.is_constant() for m in self.matrices.values() for row in m for x in row)

    def matrix_mod(self, arrow: str, prime: int, values: Mapping[str, Number] | None = None):
        """Arrow matrix reduced to integer residues mod ``prime``."""
        vals = values or {}
        return [[x.specialize(vals, prime) for x in row] for row in self.matrices[arrow]]


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_representation(rep: Representation) -> ValidationReport:
    """Collect every structural problem of ``rep``; never raises."""
    q = rep.quiver
    out: list[Violation] = []
    seen = set()
    for v in q.vertices:
        if v in seen:
            out.append(Violation("duplicate", f"vertex {v}", "vertex identifier declared twice"))
        seen.add(v)
    seen_arrows = set()
    for a in q.arrows:
        if a.name in seen_arrows:
            out.append(Violation("duplicate", f"arrow {a.name}", "arrow identifier declared twice"))
        seen_arrows.add(a.name)
        for end in (a.source, a.target):
            if end not in seen:
                out.append(Violation("unknown-vertex", f"arrow {a.name}", f"vertex {end!r} is not declared"))
    for v in q.vertices:
        d = rep.dims.get(v)
        if d is None:
            out.append(Violation("missing-dimension", f"vertex {v}", "no dimension given"))
        elif d < 0:
            out.append(Violation("bad-dimension", f"vertex {v}", f"negative dimension {d}"))
    for v in rep.dims:
        if v not in seen:
            out.append(Violation("unknown-vertex", f"dimension {v}", f"vertex {v!r} is not declared"))
    for a in q.arrows:
        m = rep.matrices.get(a.name)
        if m is None:
            out.append(Violation("missing-matrix", f"arrow {a.name}", "no matrix given"))
            continue
        rows, cols = rep.dims.get(a.target), rep.dims.get(a.source)
        if rows is None or cols is None:
            continue
        if len(m) != rows or any(len(r) != cols for r in m):
            got = f"{len(m)}x{len(m[0]) if m else 0}"
            out.append(
                Violation(
                    "shape",
                    f"arrow {a.name}",
                    f"expected {rows}x{cols} ({a.target} <- {a.source}), got {got}",
                )
            )
        for row in m:
            for x in row:
                extra = x.parameters() - set(rep.parameters)
                if extra:
                    out.append(
                        Violation(
                            "undeclared-parameter",
                            f"arrow {a.name}",
                            f"parameter(s) {', '.join(sorted(extra))} not declared",
                        )
                    )
    for a in rep.matrices:
        if a not in seen_arrows:
            out.append(Violation("unknown-arrow", f"matrix {a}", f"arrow {a!r} is not declared"))
    if rep.labels is not None:
        used = []
        for v in q.vertices:
            lab = rep.labels.get(v)
            if lab is None or len(lab) != rep.dims.get(v, 0):
                out.append(Violation("labels", f"vertex {v}", "label count differs from dimension"))
            else:
                used.extend(lab)
        if len(set(used)) != len(used):
            out.append(Violation("labels", "representation", "global labels are not unique"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True, order=True)
class Path:
    """A path from ``source`` to ``target`` traversing ``arrows`` in order."""

    source: str
    target: str
    arrows: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.arrows)

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(vertex, vertex, ())

    @classmethod
    def along(cls, quiver: Quiver, arrows: Sequence[str]) -> "Path":
        if not arrows:
            raise StructuralError("use Path.trivial for length-0 paths")
        first = quiver.arrow(arrows[0])
        p = cls(first.source, quiver.arrow(arrows[-1]).target, tuple(arrows))
        check_path(quiver, p)
        return p

    def label(self) -> str:
        if not self.arrows:
            return f"id[{self.source}]"
        return ".".join(self.arrows)


def check_path(quiver: Quiver, path: Path) -> None:
    quiver.vertex_index(path.source)
    quiver.vertex_index(path.target)
    if not path.arrows:
        if path.source != path.target:
            raise StructuralError(f"trivial path must start and end at one vertex: {path}")
        return
    at = path.source
    for name in path.arrows:
        a = quiver.arrow(name)
        if a.source != at:
            raise StructuralError(
                f"arrow {name!r} starts at {a.source!r}, but the path is at {at!r}"
            )
        at = a.target
    if at != path.target:
        raise StructuralError(f"path ends at {at!r}, not {path.target!r}")


def path_matrix(rep: Representation, path: Path) -> Matrix:
    """Matrix of the composite map along ``path`` (identity for a trivial path)."""
    check_path(rep.quiver, path)
    m = identity(rep.dim(path.source))
    for name in path.arrows:
        m = mat_mul(rep.matrix(name), m, cols=rep.dim(path.source))
    return m


def enumerate_paths(quiver: Quiver, max_len: int) -> list[Path]:
    """All paths of length 0..max_len, by length, then arrow names, then vertex order."""
    if max_len < 0:
        raise DomainError("max_len must be nonnegative")
    paths = [Path.trivial(v) for v in quiver.vertices]
    frontier = [(a.name,) for a in quiver.arrows]
    for _ in range(max_len):
        level = [Path(quiver.arrow(seq[0]).source, quiver.arrow(seq[-1]).target, seq) for seq in frontier]
        level.sort(key=lambda p: p.arrows)
        paths.extend(level)
        frontier = [
            seq + (b.name,)
            for seq in (p.arrows for p in level)
            for b in quiver.outgoing(quiver.arrow(seq[-1]).target)
        ]
    return paths

