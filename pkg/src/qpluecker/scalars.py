"""Exact scalars: parameter polynomials over Q and prime-field elements."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

# A parameter monomial is a sorted tuple of (name, exponent) pairs; () is 1.
ParamMonomial = tuple[tuple[str, int], ...]

Number = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def reduce_mod(x: Number, p: int) -> int:
    """Reduce a rational number modulo ``p``; fails if ``p`` divides the denominator."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DomainError(f"cannot reduce {x} modulo {p}: denominator not invertible")
    return x.numerator * pow(x.denominator, -1, p) % p


@total_ordering
@dataclass(frozen=True)
class FpElement:
    """An element of the prime field F_p."""

    residue: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def of(cls, x: Number, p: int) -> "FpElement":
        return cls(reduce_mod(x, p), p)

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.modulus != self.modulus:
                raise DomainError(
                    f"mixed prime fields F_{self.modulus} and F_{other.modulus}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return FpElement.of(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.residue + o.residue, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.residue - o.residue, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o.residue - self.residue, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.residue * o.residue, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.residue, self.modulus)

    def inverse(self) -> "FpElement":
        if self.residue == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}")
        return FpElement(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(pow(self.residue, n, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            try:
                return self.residue == reduce_mod(other, self.modulus)
            except DomainError:
                return False
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, FpElement):
            return NotImplemented
        return (self.modulus, self.residue) < (other.modulus, other.residue)

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


def _mono_mul(a: ParamMonomial, b: ParamMonomial) -> ParamMonomial:
    exps = dict(a)
    for name, k in b:
        exps[name] = exps.get(name, 0) + k
    return tuple(sorted(exps.items()))


def _mono_key(m: ParamMonomial):
    return (sum(k for _, k in m), m)


class Scalar:
    """A polynomial in named parameters with exact rational coefficients.

    Instances are immutable; zero coefficients are never stored.  Plain
    ``int`` and ``Fraction`` operands are promoted on arithmetic.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[ParamMonomial, Number] | None = None):
        clean: dict[ParamMonomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                mono = tuple(sorted((n, k) for n, k in mono if k))
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = dict(sorted(clean.items(), key=lambda t: _mono_key(t[0])))
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls({(): c})

    @classmethod
    def param(cls, name: str) -> "Scalar":
        return cls({((name, 1),): 1})

    @staticmethod
    def lift(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a coefficient")

    @property
    def terms(self) -> dict[ParamMonomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def parameters(self) -> set[str]:
        return {n for mono in self._terms for n, _ in mono}

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(mono == () for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DomainError(f"coefficient {self} still depends on parameters")
        return self._terms.get((), Fraction(0))

    def leading(self) -> Fraction:
        """Rational coefficient of the first term in canonical order (0 for zero)."""
        for c in self._terms.values():
            return c
        return Fraction(0)

    def __add__(self, other):
        try:
            other = Scalar.lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Scalar.lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.lift(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.lift(other)
        except TypeError:
            return NotImplemented
        out: dict[ParamMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Scalar(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def specialize(self, values: Mapping[str, Number], prime: int | None = None):
        """Substitute parameter values.

        Returns a ``Fraction`` over Q, or an ``int`` residue when ``prime`` is
        given.  Every parameter occurring in the scalar must be assigned.
        """
        missing = self.parameters() - set(values)
        if missing:
            raise DomainError(f"unassigned parameter(s): {', '.join(sorted(missing))}")
        if prime is None:
            total = Fraction(0)
            for mono, c in self._terms.items():
                t = c
                for name, k in mono:
                    t *= Fraction(values[name]) ** k
                total += t
            return total
        total = 0
        for mono, c in self._terms.items():
            t = reduce_mod(c, prime)
            for name, k in mono:
                t = t * pow(reduce_mod(values[name], prime), k, prime) % prime
            total += t
        return total % prime

    def substitute(self, values: Mapping[str, Number]) -> "Scalar":
        """Partially substitute; unassigned parameters stay symbolic."""
        out = Scalar()
        for mono, c in self._terms.items():
            t = Scalar.const(c)
            for name, k in mono:
                if name in values:
                    t = t * Scalar.const(Fraction(values[name]) ** k)
                else:
                    t = t * Scalar({((name, k),): 1})
            out = out + t
        return out

    def render_terms(self) -> list[tuple[Fraction, str]]:
        """(rational, parameter-product text) pairs in canonical order."""
        out = []
        for mono, c in self._terms.items():
            names = "*".join(n if k == 1 else "*".join([n] * k) for n, k in mono)
            out.append((c, names))
        return out

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for c, names in self.render_terms():
            parts.append(signed_term(c, names, first=not parts))
        return " ".join(parts)

    def __repr__(self):
        return f"Scalar({self})"


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def signed_term(c: Fraction, body: str, first: bool) -> str:
    mag = abs(c)
    if body:
        text = body if mag == 1 else f"{format_rational(mag)}*{body}"
    else:
        text = format_rational(mag)
    if first:
        return f"-{text}" if c < 0 else text
    return f"- {text}" if c < 0 else f"+ {text}"


def sum_scalars(items: Iterable) -> Scalar:
    out = Scalar()
    for x in items:
        out = out + x
    return out
