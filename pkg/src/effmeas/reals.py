"""Real numbers as rational streams.

Three name disciplines are supported:

* :class:`CauchyReal` -- a rational stream with ``|q_n - q_{n+1}| < 2^{-n}``,
  hence ``|q_n - lim| <= 2^{-n+1}``;
* :class:`LowerReal` -- a nondecreasing stream of lower bounds whose
  supremum is the represented value (an enumeration of the left cut);
* :class:`UpperReal` -- the mirror image for upper bounds.

All validation is lazy: invariants are checked at the first pull that can
refute them, never eagerly.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Callable, Union

from .errors import MonotonicityViolation, NameViolation
from .streams import Fuel, Stream

RationalLike = Union[Fraction, int]


def _pow2(n: int) -> Fraction:
    return Fraction(1, 2**n) if n >= 0 else Fraction(2 ** (-n))


class CauchyReal:
    """A real number given by a validated Cauchy name."""

    def __init__(self, terms):
        """``terms``: callable ``n -> Fraction`` or an iterable of rationals."""

        def check_gap(i: int, prefix: list):
            if i >= 1 and abs(prefix[i - 1] - prefix[i]) >= _pow2(i - 1):
                raise NameViolation(
                    f"name violation at index {i - 1}: "
                    f"|q_{i - 1} - q_{i}| = {abs(prefix[i - 1] - prefix[i])} >= 2^-{i - 1}"
                )

        self._terms = Stream(terms, validate=check_gap)

    @classmethod
    def from_rational(cls, q: RationalLike) -> "CauchyReal":
        q = Fraction(q)
        return cls(lambda _n: q)

    def approx(self, n: int) -> Fraction:
        """``q_n`` of the name; within ``2^{-n+1}`` of the real."""
        if n < 0:
            raise ValueError("precision exponent must be nonnegative")
        return self._terms[n]

    # Arithmetic.  Each operation shifts the precision of its inputs just
    # enough that the output gaps provably satisfy the name discipline.

    def _shifted(self, k: int) -> Callable[[int], Fraction]:
        return lambda n: self.approx(n + k)

    def __add__(self, other: "CauchyReal") -> "CauchyReal":
        return CauchyReal(lambda n: self.approx(n + 2) + other.approx(n + 2))

    def __sub__(self, other: "CauchyReal") -> "CauchyReal":
        return CauchyReal(lambda n: self.approx(n + 2) - other.approx(n + 2))

    def __neg__(self) -> "CauchyReal":
        return CauchyReal(lambda n: -self.approx(n))

    def __abs__(self) -> "CauchyReal":
        return CauchyReal(lambda n: abs(self.approx(n)))

    def magnitude_bound(self) -> Fraction:
        """A rational bound on ``|self|`` (and on every term of the name)."""
        return abs(self.approx(0)) + 2

    def __mul__(self, other: "CauchyReal") -> "CauchyReal":
        bound = self.magnitude_bound() + other.magnitude_bound() + 1
        s = max(1, int(bound).bit_length())
        return CauchyReal(lambda n: self.approx(n + s) * other.approx(n + s))

    def scale(self, q: RationalLike) -> "CauchyReal":
        q = Fraction(q)
        if q == 0:
            return CauchyReal.from_rational(0)
        s = max(abs(q.numerator), q.denominator).bit_length()
        return CauchyReal(lambda n: q * self.approx(n + s))

    def min_with(self, other: "CauchyReal") -> "CauchyReal":
        return CauchyReal(lambda n: min(self.approx(n + 2), other.approx(n + 2)))

    def max_with(self, other: "CauchyReal") -> "CauchyReal":
        return CauchyReal(lambda n: max(self.approx(n + 2), other.approx(n + 2)))


def make_cauchy(terms) -> CauchyReal:
    """Wrap a rational stream as a lazily validated Cauchy name."""
    return CauchyReal(terms)


def cauchy_arith(op: str, x: CauchyReal, y: CauchyReal | None = None) -> CauchyReal:
    """Dispatch table for the supported name arithmetic."""
    if op == "abs":
        return abs(x)
    if y is None:
        raise ValueError(f"operation {op!r} needs two operands")
    table = {
        "+": CauchyReal.__add__,
        "-": CauchyReal.__sub__,
        "*": CauchyReal.__mul__,
        "min": CauchyReal.min_with,
        "max": CauchyReal.max_with,
    }
    try:
        return table[op](x, y)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


class Comparison(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNDETERMINED = "undetermined"


def compare_apart(x: CauchyReal, y: CauchyReal, fuel: Fuel) -> Comparison:
    """Semi-decide strict order; equality is never certified.

    At precision ``k`` both approximants carry error at most ``2^{-k+1}``,
    so strict separation of the error intervals certifies the order.
    """
    for k in range(fuel.budget):
        xk, yk = x.approx(k), y.approx(k)
        err = _pow2(k - 1)
        if xk + err < yk - err:
            return Comparison.LESS
        if yk + err < xk - err:
            return Comparison.GREATER
    return Comparison.UNDETERMINED


class LowerReal:
    """A left-c.e. real: nondecreasing rational lower bounds with sup = value."""

    def __init__(self, bounds):
        def check_monotone(i: int, prefix: list):
            if i >= 1 and prefix[i] < prefix[i - 1]:
                raise MonotonicityViolation(
                    f"monotonicity violation at index {i}: "
                    f"{prefix[i]} < {prefix[i - 1]}"
                )

        self._bounds = Stream(bounds, validate=check_monotone)

    @classmethod
    def from_rational(cls, q: RationalLike) -> "LowerReal":
        q = Fraction(q)
        return cls(lambda _n: q)

    def bound(self, n: int) -> Fraction:
        return self._bounds[n]

    def approx(self, fuel: Fuel) -> Fraction:
        """Largest lower bound enumerated within fuel."""
        return self._bounds[fuel.budget]

    def add(self, other: "LowerReal") -> "LowerReal":
        return LowerReal(lambda n: self.bound(n) + other.bound(n))


class UpperReal:
    """A right-c.e. real: nonincreasing rational upper bounds with inf = value."""

    def __init__(self, bounds):
        def check_monotone(i: int, prefix: list):
            if i >= 1 and prefix[i] > prefix[i - 1]:
                raise MonotonicityViolation(
                    f"monotonicity violation at index {i}: "
                    f"{prefix[i]} > {prefix[i - 1]}"
                )

        self._bounds = Stream(bounds, validate=check_monotone)

    @classmethod
    def from_rational(cls, q: RationalLike) -> "UpperReal":
        q = Fraction(q)
        return cls(lambda _n: q)

    def bound(self, n: int) -> Fraction:
        return self._bounds[n]

    def approx(self, fuel: Fuel) -> Fraction:
        return self._bounds[fuel.budget]


def lower_real_approx(x: LowerReal, fuel: Fuel) -> Fraction:
    """Best enumerated lower bound within fuel; nondecreasing in fuel."""
    return x.approx(fuel)
