"""Cauchy-name arithmetic and the monotone bound streams."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from effmeas import (
    CauchyReal,
    Comparison,
    Fuel,
    LowerReal,
    UpperReal,
    MonotonicityViolation,
    NameViolation,
    compare_apart,
    make_cauchy,
)
from effmeas.reals import _pow2, cauchy_arith

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=64)


def wobbly(q: Fraction) -> CauchyReal:
    """A legal non-constant name of q: q + (-1)^n 2^-(n+2)."""
    return make_cauchy(lambda n: q + (-1) ** n * _pow2(n + 2))


class TestCauchyNames:
    def test_gap_violation_raises_lazily(self):
        x = make_cauchy(iter([Fraction(0), Fraction(2), Fraction(2)]))
        assert x.approx(0) == 0  # index 0 alone is fine
        with pytest.raises(NameViolation, match="name violation at index 0"):
            x.approx(1)

    def test_wobbly_name_is_legal(self):
        x = wobbly(Fraction(1, 3))
        for n in range(10):
            assert abs(x.approx(n) - Fraction(1, 3)) <= _pow2(n + 2)

    @given(rationals, rationals)
    def test_arithmetic_tracks_exact_values(self, p, q):
        x, y = wobbly(p), wobbly(q)
        for op, exact in [
            ("+", p + q),
            ("-", p - q),
            ("*", p * q),
            ("min", min(p, q)),
            ("max", max(p, q)),
        ]:
            z = cauchy_arith(op, x, y)
            for n in (0, 3, 8):
                assert abs(z.approx(n) - exact) <= _pow2(n - 1)

    @given(rationals)
    def test_abs_neg_scale(self, p):
        x = wobbly(p)
        assert abs(abs(x).approx(6) - abs(p)) <= _pow2(5)
        assert abs((-x).approx(6) + p) <= _pow2(5)
        y = x.scale(Fraction(3, 2))
        assert abs(y.approx(6) - Fraction(3, 2) * p) <= _pow2(5)

    def test_from_rational_is_constant(self):
        x = CauchyReal.from_rational(Fraction(5, 7))
        assert x.approx(0) == x.approx(20) == Fraction(5, 7)


class TestCompareApart:
    def test_separated_values_decided(self):
        x, y = wobbly(Fraction(0)), wobbly(Fraction(1, 4))
        assert compare_apart(x, y, Fuel(16)) is Comparison.LESS
        assert compare_apart(y, x, Fuel(16)) is Comparison.GREATER

    def test_equal_values_undetermined(self):
        x, y = wobbly(Fraction(1, 3)), wobbly(Fraction(1, 3))
        assert compare_apart(x, y, Fuel(12)) is Comparison.UNDETERMINED

    def test_tiny_fuel_undetermined(self):
        x, y = wobbly(Fraction(0)), wobbly(Fraction(1, 1024))
        assert compare_apart(x, y, Fuel(2)) is Comparison.UNDETERMINED


class TestMonotoneReals:
    def test_lower_real_monotone_violation(self):
        x = LowerReal(iter([Fraction(0), Fraction(1), Fraction(1, 2)]))
        assert x.bound(1) == 1
        with pytest.raises(MonotonicityViolation):
            x.bound(2)

    def test_upper_real_monotone_violation(self):
        x = UpperReal(iter([Fraction(3), Fraction(2), Fraction(5, 2)]))
        assert x.bound(1) == 2
        with pytest.raises(MonotonicityViolation):
            x.bound(2)

    def test_lower_add_and_fuel(self):
        a = LowerReal(lambda n: Fraction(1) - _pow2(n))
        b = LowerReal(lambda n: Fraction(2) - _pow2(n))
        s = a.add(b)
        assert s.approx(Fuel(5)) == Fraction(3) - 2 * _pow2(5)
        assert s.bound(0) <= s.bound(7)
