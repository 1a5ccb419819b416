from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qpluecker import DomainError, FpElement, Scalar
from qpluecker.scalars import reduce_mod


def test_reduce_mod():
    assert reduce_mod(Fraction(1, 2), 5) == 3
    assert reduce_mod(-1, 7) == 6
    with pytest.raises(DomainError):
        reduce_mod(Fraction(1, 3), 3)


def test_fp_arithmetic():
    a, b = FpElement(3, 5), FpElement(4, 5)
    assert a + b == FpElement(2, 5)
    assert a * b == FpElement(2, 5)
    assert a / b == a * b.inverse()
    assert a - 3 == FpElement(0, 5)
    assert not FpElement(5, 5)
    with pytest.raises(DomainError):
        a + FpElement(1, 7)
    with pytest.raises(ZeroDivisionError):
        a / FpElement(0, 5)


@given(st.integers(1, 6), st.integers(-50, 50))
def test_fp_inverse(p_index, x):
    p = [2, 3, 5, 7, 11, 13][p_index - 1]
    e = FpElement(x, p)
    if e:
        assert e * e.inverse() == FpElement(1, p)


def test_scalar_polynomials():
    lam = Scalar.param("lambda")
    s = lam * lam - 2 * lam + 1
    assert s.specialize({"lambda": 1}) == 0
    assert s.specialize({"lambda": 3}) == 4
    assert s.specialize({"lambda": 3}, prime=3) == 1
    assert s.parameters() == {"lambda"}
    assert (lam - lam).is_zero()
    assert Scalar.const(Fraction(2, 3)).constant_value() == Fraction(2, 3)
    assert s.substitute({"lambda": 2}) == Scalar.const(1)
    with pytest.raises(DomainError):
        lam.specialize({})


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_scalar_specialize_is_homomorphism(a, b, x):
    lam = Scalar.param("t")
    u = lam * a + b
    v = lam * lam * b - a
    vals = {"t": x}
    assert (u * v).specialize(vals) == u.specialize(vals) * v.specialize(vals)
    assert (u + v).specialize(vals) == u.specialize(vals) + v.specialize(vals)
