"""Sparse polynomials in Plücker variables with exact parameter coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .combinatorics import IndexSubset
from .scalars import DomainError, FpElement, Scalar, format_rational, signed_term

# A Plücker variable is the index subset it is attached to.
PlueckerVariable = IndexSubset
Monomial = tuple[IndexSubset, ...]


class RelationPolynomial:
    """Immutable sparse polynomial: sorted monomials mapped to nonzero Scalars."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | Iterable | None = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        acc: dict[Monomial, Scalar] = {}
        for mono, c in items:
            c = Scalar.lift(c)
            if not c:
                continue
            mono = tuple(sorted(mono))
            acc[mono] = acc[mono] + c if mono in acc else c
        self._terms = {m: acc[m] for m in sorted(acc) if acc[m]}
        self._hash = None

    @classmethod
    def variable(cls, v: IndexSubset) -> "RelationPolynomial":
        return cls({(v,): 1})

    @classmethod
    def constant(cls, c) -> "RelationPolynomial":
        return cls({(): c})

    @property
    def terms(self) -> dict[Monomial, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def variables(self) -> list[IndexSubset]:
        return sorted({v for mono in self._terms for v in mono})

    def vertices(self) -> list[str]:
        return sorted({v.vertex for v in self.variables()})

    def parameters(self) -> set[str]:
        return set().union(*(c.parameters() for c in self._terms.values()))

    def __add__(self, other):
        if not isinstance(other, RelationPolynomial):
            other = RelationPolynomial.constant(other)
        return RelationPolynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return RelationPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RelationPolynomial):
            other = RelationPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return RelationPolynomial.constant(other) - self

    def __mul__(self, other):
        if not isinstance(other, RelationPolynomial):
            other = RelationPolynomial.constant(other)
        out = []
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                out.append((m1 + m2, c1 * c2))
        return RelationPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RelationPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def normalized(self) -> "RelationPolynomial":
        """Scale by -1 if needed so the first term's leading coefficient is positive."""
        for c in self._terms.values():
            return -self if c.leading() < 0 else self
        return self

    def substitute(self, values: Mapping[IndexSubset, object]) -> "RelationPolynomial":
        """Replace some variables by constants (ints, Fractions or Scalars)."""
        out = []
        for mono, c in self._terms.items():
            keep = []
            for v in mono:
                if v in values:
                    c = c * Scalar.lift(values[v])
                else:
                    keep.append(v)
            out.append((tuple(keep), c))
        return RelationPolynomial(out)

    def specialize_parameters(self, values) -> "RelationPolynomial":
        return RelationPolynomial({m: c.substitute(values) for m, c in self._terms.items()})

    def bidegree_vertices(self) -> set[tuple[str, ...]]:
        """The multiset of vertices of each monomial, as sorted tuples."""
        return {tuple(sorted(v.vertex for v in m)) for m in self._terms}

    def __str__(self):
        return canonical_string(self)

    def __repr__(self):
        return f"RelationPolynomial({canonical_string(self)})"


def _field_of(values: Iterable) -> int | None:
    modulus = None
    rational = False
    for x in values:
        if isinstance(x, FpElement):
            if modulus is not None and x.modulus != modulus:
                raise DomainError(f"mixed prime fields F_{modulus} and F_{x.modulus}")
            modulus = x.modulus
        elif isinstance(x, Fraction) and x.denominator != 1:
            rational = True
        elif not isinstance(x, (int, Fraction)):
            raise DomainError(f"unsupported value {x!r}")
    if modulus is not None and rational:
        raise DomainError(f"mixed values from F_{modulus} and the rationals")
    return modulus


def evaluate(
    poly: RelationPolynomial,
    point: Mapping[IndexSubset, object],
    params: Mapping[str, object] | None = None,
):
    """Value of ``poly`` at a point.

    Values may be ints, Fractions or FpElements of one prime field; the
    result is an FpElement in the latter case and a Fraction otherwise.
    """
    params = params or {}
    missing_vars = [v for v in poly.variables() if v not in point]
    if missing_vars:
        raise DomainError(f"unassigned variable(s): {', '.join(map(str, missing_vars))}")
    missing = poly.parameters() - set(params)
    if missing:
        raise DomainError(f"unassigned parameter(s): {', '.join(sorted(missing))}")
    p = _field_of(list(point.values()) + list(params.values()))
    if p is None:
        zero, lift = Fraction(0), Fraction
    else:
        zero, lift = FpElement(0, p), lambda x: FpElement.of(x, p) if not isinstance(x, FpElement) else x
    total = zero
    for mono, c in poly.items():
        coef = zero
        for pmono, r in c.items():
            t = lift(r)
            for name, k in pmono:
                t = t * lift(params[name]) ** k
            coef = coef + t
        for v in mono:
            coef = coef * lift(point[v])
        total = total + coef
    return total


def proportional_eq(a: RelationPolynomial, b: RelationPolynomial) -> bool:
    """True iff a = c*b for a nonzero rational constant c."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if a._terms.keys() != b._terms.keys():
        return False
    ratio = None
    for mono, ca in a.items():
        cb = b._terms[mono]
        ka, kb = ca.terms, cb.terms
        if ka.keys() != kb.keys():
            return False
        for pm in ka:
            r = ka[pm] / kb[pm]
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


def variable_name(v: IndexSubset, labels: Mapping[str, tuple[int, ...]] | None = None) -> str:
    if labels is None or not v.members:
        return f"Delta[{v.vertex};{','.join(map(str, v.members))}]"
    lab = labels[v.vertex]
    return f"Delta[{','.join(str(lab[i - 1]) for i in v.members)}]"


def canonical_string(
    poly: RelationPolynomial, labels: Mapping[str, tuple[int, ...]] | None = None
) -> str:
    """Deterministic text form.

    With ``labels`` (vertex -> global label per local index) variables print
    as ``Delta[4,5,6]``; otherwise as ``Delta[vertex;1,2]``.  Coefficients
    that are parameter polynomials are expanded into separate summands.
    """
    if poly.is_zero():
        return "0"
    parts: list[str] = []
    for mono, c in poly.items():
        factors = "*".join(variable_name(v, labels) for v in mono)
        for r, params in c.render_terms():
            body = "*".join(x for x in (params, factors) if x)
            parts.append(signed_term(r, body, first=not parts))
    return " ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<delta>Delta\[(?P<inside>[^\]]*)\])|(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*]))"
)


def parse_polynomial(
    text: str,
    labels: Mapping[str, tuple[int, ...]] | None = None,
    parameters: Iterable[str] = (),
) -> RelationPolynomial:
    """Parse the rendering grammar back into a polynomial.

    Global labels (``Delta[4,5]``) are resolved through ``labels``; the local
    form ``Delta[v;1,2]`` is always accepted.
    """
    params = set(parameters)
    reverse = {}
    for vertex, labs in (labels or {}).items():
        for local, g in enumerate(labs, start=1):
            reverse[g] = (vertex, local)

    def variable(inside: str) -> IndexSubset:
        if ";" in inside:
            vertex, rest = inside.split(";", 1)
            members = [int(x) for x in rest.split(",") if x.strip()]
            return IndexSubset.of(vertex.strip(), members)
        gl = [int(x) for x in inside.split(",") if x.strip()]
        if not gl:
            raise DomainError("empty global subset needs the local form Delta[vertex;]")
        try:
            locs = [reverse[g] for g in gl]
        except KeyError as exc:
            raise DomainError(f"unknown global label {exc.args[0]}") from None
        vertices = {v for v, _ in locs}
        if len(vertices) != 1:
            raise DomainError(f"labels {gl} span several vertices")
        return IndexSubset.of(vertices.pop(), [i for _, i in locs])

    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse polynomial at {text[pos:]!r}")
        tokens.append(m)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    def factor(tok, coef, term_vars):
        if tok.group("delta"):
            term_vars.append(variable(tok.group("inside")))
        elif tok.group("num"):
            coef = coef * Fraction(tok.group("num"))
        elif tok.group("ident"):
            name = tok.group("ident")
            if name not in params:
                raise DomainError(f"undeclared parameter {name!r}")
            coef = coef * Scalar.param(name)
        else:
            raise DomainError(f"expected a factor, got {tok.group('op')!r}")
        return coef

    if not tokens:
        raise DomainError("empty polynomial text")
    result = RelationPolynomial()
    i, n = 0, len(tokens)
    while True:
        sign = 1
        while i < n and tokens[i].group("op") in ("+", "-"):
            if tokens[i].group("op") == "-":
                sign = -sign
            i += 1
        if i == n:
            raise DomainError("polynomial text ends with an operator")
        term_vars: list[IndexSubset] = []
        coef = factor(tokens[i], Scalar.const(sign), term_vars)
        i += 1
        while i < n and tokens[i].group("op") == "*":
            if i + 1 == n:
                raise DomainError("polynomial text ends with '*'")
            coef = factor(tokens[i + 1], coef, term_vars)
            i += 2
        result = result + RelationPolynomial({tuple(term_vars): coef})
        if i == n:
            break
        if tokens[i].group("op") not in ("+", "-"):
            raise DomainError(f"expected '+' or '-' before {tokens[i].group(0).strip()!r}")
    return result


__all__ = [
    "PlueckerVariable",
    "RelationPolynomial",
    "canonical_string",
    "evaluate",
    "format_rational",
    "parse_polynomial",
    "proportional_eq",
    "variable_name",
]
