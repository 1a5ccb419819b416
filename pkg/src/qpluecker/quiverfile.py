"""Line-oriented quiver description files.

    # comment
    quiver <name>
    param <ident>
    vertex <ident> dim <int> [labels <int> ...]
    arrow <ident> : <src> -> <dst>
    matrix <arrow>
      <d_dst rows of d_src whitespace-separated entries>
    dimvector <ident>=<int> ...

Entries are sums of terms ``<rational>``, ``<rational>*<param>`` or
``<param>``, e.g. ``1/2``, ``lambda``, ``-3*lambda``, ``1+lambda``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .model import Arrow, Quiver, Representation, validate_representation
from .scalars import Scalar

KEYWORDS = ("quiver", "param", "vertex", "arrow", "matrix", "dimvector")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_VERTEX_ID = re.compile(r"^[A-Za-z0-9_]+$")
_ARROW = re.compile(r"^\s*arrow\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z0-9_]+)\s*->\s*([A-Za-z0-9_]+)\s*$")
_TERM = re.compile(r"([+-]?)([^+-]+)")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class QuiverFileError(ValueError):
    """Raised with every diagnostic found; nothing is returned on failure."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(map(str, diagnostics)))


@dataclass
class QuiverFile:
    name: str
    parameters: list[str] = field(default_factory=list)
    vertices: list[tuple[str, int, tuple[int, ...] | None]] = field(default_factory=list)
    arrows: list[tuple[str, str, str]] = field(default_factory=list)
    matrices: dict[str, list[list[Scalar]]] = field(default_factory=dict)
    dimvector: dict[str, int] | None = None

    def representation(self) -> Representation:
        labels = None
        if any(lab is not None for _, _, lab in self.vertices):
            labels = {}
            start = 1
            for v, d, lab in self.vertices:
                labels[v] = lab if lab is not None else tuple(range(start, start + d))
                start += d
        return Representation(
            Quiver(tuple(v for v, _, _ in self.vertices), tuple(Arrow(*a) for a in self.arrows)),
            {v: d for v, d, _ in self.vertices},
            self.matrices,
            tuple(self.parameters),
            labels,
            self.name,
        )

    @classmethod
    def from_representation(cls, rep: Representation, dims=None) -> "QuiverFile":
        custom = rep.labels
        return cls(
            rep.name,
            list(rep.parameters),
            [(v, rep.dim(v), custom[v] if custom else None) for v in rep.quiver.vertices],
            [(a.name, a.source, a.target) for a in rep.quiver.arrows],
            {a: [list(row) for row in m] for a, m in rep.matrices.items()},
            dict(dims) if dims is not None else None,
        )


def parse_entry(text: str, params: set[str]) -> Scalar:
    """Parse one matrix entry; raises ValueError with a message on failure."""
    if not text or text[-1] in "+-*":
        raise ValueError(f"malformed entry {text!r}")
    total = Scalar()
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise ValueError(f"malformed entry {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        value = Scalar.const(sign)
        for factor in m.group(2).split("*"):
            if not factor:
                raise ValueError(f"malformed entry {text!r}")
            if factor in params:
                value = value * Scalar.param(factor)
            elif _IDENT.match(factor):
                raise ValueError(f"undeclared parameter {factor!r}")
            else:
                try:
                    value = value * Fraction(factor)
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"malformed number {factor!r}") from None
        total = total + value
    if pos != len(text):
        raise ValueError(f"malformed entry {text!r}")
    return total


def format_entry(x: Scalar) -> str:
    return str(x).replace(" ", "")


def parse_quiver_file(text: str) -> QuiverFile:
    """Parse and validate a quiver file, or raise QuiverFileError."""
    diags: list[Diagnostic] = []
    qf: QuiverFile | None = None
    params: set[str] = set()
    vertex_line: dict[str, int] = {}
    arrow_line: dict[str, int] = {}
    matrix_rows: dict[str, tuple[int, list[tuple[int, list[str]]]]] = {}
    dim_line = 0
    current_matrix: str | None = None

    def err(line, col, msg):
        diags.append(Diagnostic(line, col, msg))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        words = line.split()
        head = words[0]
        if head not in KEYWORDS:
            if current_matrix is None:
                err(lineno, col, f"unknown directive {head!r}")
            else:
                matrix_rows[current_matrix][1].append((lineno, words))
            continue
        current_matrix = None
        if head == "quiver":
            if len(words) != 2:
                err(lineno, col, "expected 'quiver <name>'")
            elif qf is not None:
                err(lineno, col, "second quiver declaration")
            else:
                qf = QuiverFile(words[1])
            continue
        if qf is None:
            err(lineno, col, f"{head!r} before 'quiver <name>'")
            qf = QuiverFile("M")
        if head == "param":
            if len(words) != 2 or not _IDENT.match(words[1]):
                err(lineno, col, "expected 'param <identifier>'")
            elif words[1] in params:
                err(lineno, col, f"parameter {words[1]!r} declared twice")
            else:
                params.add(words[1])
                qf.parameters.append(words[1])
        elif head == "vertex":
            if len(words) < 4 or words[2] != "dim" or not words[3].isdigit() or not _VERTEX_ID.match(words[1]):
                err(lineno, col, "expected 'vertex <ident> dim <int> [labels <int>...]'")
                continue
            v, d = words[1], int(words[3])
            labels = None
            if len(words) > 4:
                if words[4] != "labels" or not all(w.isdigit() for w in words[5:]):
                    err(lineno, col, "expected 'labels <int> ...' after the dimension")
                    continue
                labels = tuple(int(w) for w in words[5:])
                if len(labels) != d:
                    err(lineno, col, f"vertex {v!r} has dimension {d} but {len(labels)} labels")
                    continue
            if v in vertex_line:
                err(lineno, col, f"vertex {v!r} declared twice (first on line {vertex_line[v]})")
                continue
            vertex_line[v] = lineno
            qf.vertices.append((v, d, labels))
        elif head == "arrow":
            m = _ARROW.match(line)
            if not m:
                err(lineno, col, "expected 'arrow <ident> : <src> -> <dst>'")
                continue
            name, src, dst = m.groups()
            if name in arrow_line:
                err(lineno, col, f"arrow {name!r} declared twice (first on line {arrow_line[name]})")
                continue
            arrow_line[name] = lineno
            qf.arrows.append((name, src, dst))
        elif head == "matrix":
            if len(words) != 2:
                err(lineno, col, "expected 'matrix <arrow>'")
                continue
            if words[1] in matrix_rows:
                err(lineno, col, f"second matrix for arrow {words[1]!r}")
                continue
            current_matrix = words[1]
            matrix_rows[current_matrix] = (lineno, [])
        elif head == "dimvector":
            if qf.dimvector is not None:
                err(lineno, col, "second dimvector")
                continue
            dim_line = lineno
            qf.dimvector = {}
            for w in words[1:]:
                k, sep, val = w.partition("=")
                if not sep or not val.isdigit():
                    err(lineno, line.index(w) + 1, f"expected <vertex>=<int>, got {w!r}")
                    continue
                qf.dimvector[k] = int(val)

    if qf is None:
        raise QuiverFileError([Diagnostic(1, 1, "no quiver declared")])

    dims = {v: d for v, d, _ in qf.vertices}
    for name, src, dst in qf.arrows:
        for end in (src, dst):
            if end not in dims:
                err(arrow_line[name], 1, f"arrow {name!r}: unknown vertex {end!r}")
    arrows = {name: (src, dst) for name, src, dst in qf.arrows}
    for name, (mline, rows) in matrix_rows.items():
        if name not in arrows:
            err(mline, 1, f"matrix for unknown arrow {name!r}")
            continue
        src, dst = arrows[name]
        if src not in dims or dst not in dims:
            continue
        expected = f"{dims[dst]}x{dims[src]} ({dst} <- {src})"
        if len(rows) != dims[dst]:
            err(mline, 1, f"matrix {name!r}: expected shape {expected}, got {len(rows)} rows")
            continue
        parsed = []
        for rline, words in rows:
            if len(words) != dims[src]:
                err(rline, 1, f"matrix {name!r}: expected shape {expected}, row has {len(words)} entries")
                continue
            row = []
            for w in words:
                try:
                    row.append(parse_entry(w, params))
                except ValueError as exc:
                    err(rline, raw_column(text, rline, w), f"matrix {name!r}: {exc}")
                    row.append(Scalar())
            parsed.append(row)
        qf.matrices[name] = parsed
    for name in arrows:
        if name not in matrix_rows:
            if dims.get(arrows[name][0]) == 0 or dims.get(arrows[name][1]) == 0:
                qf.matrices[name] = [[] for _ in range(dims.get(arrows[name][1], 0))]
            else:
                err(arrow_line[name], 1, f"arrow {name!r} has no matrix")
    if qf.dimvector is not None:
        for v, e in qf.dimvector.items():
            if v not in dims:
                err(dim_line, 1, f"dimvector: unknown vertex {v!r}")
            elif e > dims[v]:
                err(dim_line, 1, f"dimvector: e_{v}={e} exceeds dimension {dims[v]}")
        for v in dims:
            if v not in qf.dimvector:
                err(dim_line, 1, f"dimvector: missing entry for vertex {v!r}")
    if any(lab is not None for _, _, lab in qf.vertices):
        used = [x for _, _, lab in qf.vertices if lab for x in lab]
        if len(set(used)) != len(used):
            err(1, 1, "global labels must be distinct")
    if not diags:
        report = validate_representation(qf.representation())
        for violation in report.violations:
            err(1, 1, str(violation))
    if diags:
        raise QuiverFileError(sorted(diags, key=lambda d: (d.line, d.column)))
    return qf


def raw_column(text: str, lineno: int, word: str) -> int:
    line = text.splitlines()[lineno - 1]
    return line.find(word) + 1


def print_quiver_file(qf: QuiverFile) -> str:
    """Canonical text form; parse(print(x)) reproduces x."""
    out = [f"quiver {qf.name}"]
    out += [f"param {p}" for p in qf.parameters]
    for v, d, labels in qf.vertices:
        tail = f" labels {' '.join(map(str, labels))}" if labels is not None else ""
        out.append(f"vertex {v} dim {d}{tail}")
    for name, src, dst in qf.arrows:
        out.append(f"arrow {name} : {src} -> {dst}")
    for name, _, _ in qf.arrows:
        rows = qf.matrices.get(name, [])
        if not rows or not rows[0]:
            continue
        out.append(f"matrix {name}")
        width = max(len(format_entry(x)) for row in rows for x in row)
        for row in rows:
            out.append("  " + " ".join(format_entry(x).rjust(width) for x in row))
    if qf.dimvector is not None:
        out.append("dimvector " + " ".join(f"{v}={qf.dimvector[v]}" for v, _, _ in qf.vertices))
    return "\n".join(out) + "\n"


def load(path) -> QuiverFile:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver_file(fh.read())
