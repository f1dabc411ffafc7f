from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from generators import polys
from mongeampere import Poly
from mongeampere.polynomial import format_rational

NV = 3
SYMS = sympy.symbols("x1:4")


def to_sympy(p):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator)
                            * sympy.Mul(*[s ** k for s, k in zip(SYMS, e)])
                            for e, c in p.terms.items()))


def test_zero_has_no_terms():
    assert Poly.zero(2).terms == {}
    assert (Poly.var(2, 0) - Poly.var(2, 0)).is_zero()


def test_constant_arithmetic():
    p = Poly.const(2, Fraction(1, 2)) * 4 + 1
    assert p == 3
    assert p.constant_value() == 3


def test_constant_value_raises_on_variable():
    with pytest.raises(Exception):
        Poly.var(2, 1).constant_value()


def test_diff_and_evaluate():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    p = x ** 3 * y - y ** 2 / 2
    assert p.diff(0) == x ** 2 * y * 3
    assert p.evaluate([2, 1]) == Fraction(15, 2)
    assert p.evaluate_float([2.0, 1.0]) == pytest.approx(7.5)


def test_compose():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    p = x * y + 1
    assert p.compose([x + y, x - y]) == x * x - y * y + 1


def test_to_str():
    x = Poly.var(2, 0)
    assert (1 - x ** 2).to_str(("p1", "p2")) == "-p1^2 + 1"
    assert (x / 2).to_str(("q1", "q2")) == "1/2*q1"
    assert format_rational(Fraction(-3, 4)) == "-3/4"


@settings(max_examples=100, deadline=None, derandomize=True)
@given(polys(NV), polys(NV))
def test_ring_operations_match_sympy(a, b):
    assert to_sympy(a + b) == sympy.expand(to_sympy(a) + to_sympy(b))
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a.diff(1)) == sympy.diff(to_sympy(a), SYMS[1])


@settings(max_examples=50, deadline=None, derandomize=True)
@given(polys(NV))
def test_hash_consistent_with_eq(a):
    b = a + Poly.zero(NV)
    assert a == b and hash(a) == hash(b)
