"""Computable finite Borel measures on the real line.

Two exactly-integrable concrete classes are provided: finite discrete
measures and measures with a polygonal density.  A lazily-extendable
discrete class backs the hidden-enumeration demo: its prefix is exact and
its total mass is only ever exposed through lower bounds unless a tail
bound is supplied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import SearchExhausted, UnsupportedMeasureClass
from .functions import (
    CompactOpenName,
    PolyFunc,
    SupportedFunc,
    approx_polygonal,
    constant_func,
    indicator_approx,
    polygonal_on_window,
)
from .reals import CauchyReal, LowerReal, _pow2
from .sets import OpenComp, SigmaSet, merge_open, open_contains_point
from .streams import Stream


def integrate_product(p: PolyFunc, q: PolyFunc, a: Fraction, b: Fraction) -> Fraction:
    """Exact integral of p*q over [a, b] (Simpson is exact for quadratics)."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        return Fraction(0)
    cuts = sorted(
        {a, b}
        | {x for x in p.breakpoints() if a < x < b}
        | {x for x in q.breakpoints() if a < x < b}
    )
    total = Fraction(0)
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        total += (hi - lo) * (
            p(lo) * q(lo) + 4 * p(mid) * q(mid) + p(hi) * q(hi)
        ) / 6
    return total


class Measure:
    """Interface: a computable finite Borel measure."""

    def total_mass_real(self) -> CauchyReal:
        raise NotImplementedError

    def open_mass(self, U: SigmaSet) -> LowerReal:
        raise NotImplementedError

    # exact fast paths, None when the class cannot provide them
    def exact_total_mass(self) -> Optional[Fraction]:
        return None

    def region_mass_open(self, comps: Sequence[OpenComp]) -> Optional[Fraction]:
        return None

    def support_radius(self) -> Optional[Fraction]:
        """An a with mu(R \\ [-a, a]) = 0, when the support is bounded."""
        return None


@dataclass(frozen=True)
class DiscreteMeasure(Measure):
    """A finite purely atomic measure with rational data."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for loc, w in self.atoms:
            loc, w = Fraction(loc), Fraction(w)
            if w <= 0:
                raise ValueError("atom weights must be positive")
            merged[loc] = merged.get(loc, Fraction(0)) + w
        object.__setattr__(
            self, "atoms", tuple(sorted(merged.items()))
        )

    @classmethod
    def point(cls, loc, weight=1) -> "DiscreteMeasure":
        return cls(((Fraction(loc), Fraction(weight)),))

    @classmethod
    def zero(cls) -> "DiscreteMeasure":
        # the empty atom list is a valid (zero) measure
        return cls(())

    def exact_total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    def total_mass_real(self) -> CauchyReal:
        return CauchyReal.from_rational(self.exact_total_mass())

    def region_mass_open(self, comps) -> Fraction:
        return sum(
            (w for loc, w in self.atoms if open_contains_point(comps, loc)),
            Fraction(0),
        )

    def mass_closed(self, comps) -> Fraction:
        return sum(
            (w for loc, w in self.atoms if any(l <= loc <= r for l, r in comps)),
            Fraction(0),
        )

    def support_radius(self) -> Fraction:
        return max((abs(loc) for loc, _ in self.atoms), default=Fraction(0))

    def open_mass(self, U: SigmaSet) -> LowerReal:
        if U.components is not None:
            return LowerReal.from_rational(self.region_mass_open(U.components))

        def gen():
            pulled = []
            for k in itertools.count():
                pulled.append(U.interval(k))
                yield self.region_mass_open(merge_open(pulled))

        return LowerReal(gen())


@dataclass(frozen=True)
class PolyDensityMeasure(Measure):
    """Absolutely continuous with a nonnegative zero-outside polygonal density."""

    density: PolyFunc

    def __post_init__(self):
        d = self.density
        if d.extension != "zero-outside":
            raise ValueError("density must be zero-outside")
        if any(y < 0 for _, y in d.vertices):
            raise ValueError("density must be nonnegative")

    @classmethod
    def uniform(cls, a, b) -> "PolyDensityMeasure":
        a, b = Fraction(a), Fraction(b)
        eps = (b - a) / 2**20
        # plateau 1 on [a, b] with hair-thin ramps keeps the density polygonal
        return cls(
            PolyFunc(
                ((a - eps, Fraction(0)), (a, Fraction(1)), (b, Fraction(1)),
                 (b + eps, Fraction(0))),
                "zero-outside",
            )
        )

    def exact_total_mass(self) -> Fraction:
        lo = self.density.vertices[0][0]
        hi = self.density.vertices[-1][0]
        return integrate_product(self.density, constant_func(1), lo, hi)

    def total_mass_real(self) -> CauchyReal:
        return CauchyReal.from_rational(self.exact_total_mass())

    def region_mass_open(self, comps) -> Fraction:
        lo = self.density.vertices[0][0]
        hi = self.density.vertices[-1][0]
        total = Fraction(0)
        one = constant_func(1)
        for l, r in comps:
            a = lo if l is None else max(lo, l)
            b = hi if r is None else min(hi, r)
            total += integrate_product(self.density, one, a, b)
        return total

    def mass_closed(self, comps) -> Fraction:
        # points are null for a density measure
        return sum(
            (self.region_mass_open([(l, r)]) for l, r in comps if l < r),
            Fraction(0),
        )

    def support_radius(self) -> Fraction:
        return max(
            abs(self.density.vertices[0][0]), abs(self.density.vertices[-1][0])
        )

    def open_mass(self, U: SigmaSet) -> LowerReal:
        if U.components is not None:
            return LowerReal.from_rational(self.region_mass_open(U.components))

        def gen():
            pulled = []
            for k in itertools.count():
                pulled.append(U.interval(k))
                yield self.region_mass_open(merge_open(pulled))

        return LowerReal(gen())


class LazyDiscreteMeasure(Measure):
    """A discrete measure revealed atom by atom.

    ``tail_bound(k)`` bounds the mass beyond the first k atoms; if omitted
    the measure exposes only left-c.e. information (no Cauchy-name total
    mass), which is exactly the hidden-enumeration regime.
    """

    def __init__(
        self,
        atom_source,
        tail_bound: Callable[[int], Fraction] | None = None,
        locations_increasing: bool = False,
        location_predicate: Callable[[Fraction], bool] | None = None,
    ):
        self.atom_stream = Stream(atom_source)
        self.tail_bound = tail_bound
        self.locations_increasing = locations_increasing
        self.location_predicate = location_predicate

    def prefix(self, k: int) -> list[tuple[Fraction, Fraction]]:
        return self.atom_stream.prefix(k)

    def prefix_mass(self, k: int) -> Fraction:
        return sum((w for _, w in self.prefix(k)), Fraction(0))

    def total_mass_lower(self) -> LowerReal:
        return LowerReal(lambda n: self.prefix_mass(n))

    def total_mass_real(self) -> CauchyReal:
        if self.tail_bound is None:
            raise UnsupportedMeasureClass(
                "no tail bound: total mass is only left-c.e."
            )

        def term(n):
            k = 0
            while self.tail_bound(k) > _pow2(n + 1):
                k += 1
            return self.prefix_mass(k)

        return CauchyReal(term)

    def open_mass(self, U: SigmaSet) -> LowerReal:
        def gen():
            pulled = []
            for k in itertools.count():
                if U.components is None:
                    pulled.append(U.interval(k))
                    comps = merge_open(pulled)
                else:
                    comps = U.components
                yield sum(
                    (
                        w
                        for loc, w in self.prefix(k)
                        if open_contains_point(comps, loc)
                    ),
                    Fraction(0),
                )

        return LowerReal(gen())


# ---------------------------------------------------------------------------
# exact integration


def integrate_poly(p: PolyFunc, mu: Measure) -> Fraction:
    """Exact integral of a polygonal function for the concrete classes."""
    if isinstance(mu, DiscreteMeasure):
        return sum((w * p(loc) for loc, w in mu.atoms), Fraction(0))
    if isinstance(mu, PolyDensityMeasure):
        lo = mu.density.vertices[0][0]
        hi = mu.density.vertices[-1][0]
        return integrate_product(p, mu.density, lo, hi)
    raise UnsupportedMeasureClass(f"unsupported measure class {type(mu).__name__}")


def integrate_poly_approx(p: PolyFunc, mu: Measure, n: int) -> Fraction:
    """Integral of a polygonal function within 2^-n, lazy measures included."""
    if isinstance(mu, (DiscreteMeasure, PolyDensityMeasure)):
        return integrate_poly(p, mu)
    if isinstance(mu, LazyDiscreteMeasure):
        if mu.tail_bound is None:
            raise UnsupportedMeasureClass(
                "lazy discrete measure without tail bound cannot be integrated"
            )
        bound = p.bound() + 1
        k = 0
        while mu.tail_bound(k) * bound > _pow2(n):
            k += 1
        return sum((w * p(loc) for loc, w in mu.prefix(k)), Fraction(0))
    raise UnsupportedMeasureClass(f"unsupported measure class {type(mu).__name__}")


def _integrate_supported_lazy(f: SupportedFunc, mu: LazyDiscreteMeasure, n: int) -> Fraction:
    """Compactly supported integrand against a lazy discrete measure.

    With increasing atom locations the support window cuts the atom list
    after finitely many pulls, so no tail bound is needed; otherwise a tail
    bound is required.
    """
    from .sets import compact_hull_bounds

    _, hull_hi = compact_hull_bounds(f.support, 8)
    if mu.locations_increasing:
        atoms = []
        for k in itertools.count():
            loc, w = mu.atom_stream[k]
            if loc > hull_hi:
                break
            atoms.append((loc, w))
        window_mass = sum((w for _, w in atoms), Fraction(0))
        tol = _pow2(n) / (window_mass + 1)
        psi = approx_polygonal(f, tol)
        return sum((w * psi(loc) for loc, w in atoms), Fraction(0))
    if mu.tail_bound is None:
        raise UnsupportedMeasureClass(
            "lazy measure needs increasing locations or a tail bound"
        )
    mass = total_mass_upper(mu)
    tol = _pow2(n + 1) / (mass + 1)
    psi = approx_polygonal(f, tol)
    return integrate_poly_approx(psi, mu, n + 1)


def total_mass_upper(mu: Measure) -> Fraction:
    """An exact rational upper bound on mu(R)."""
    m = mu.exact_total_mass()
    if m is not None:
        return m
    if isinstance(mu, LazyDiscreteMeasure):
        if mu.tail_bound is None:
            raise UnsupportedMeasureClass("no tail bound on lazy measure")
        return mu.prefix_mass(0) + mu.tail_bound(0)
    raise UnsupportedMeasureClass(f"unsupported measure class {type(mu).__name__}")


def integrate_named(f, mu: Measure, n: int) -> Fraction:
    """Integral within 2^-n of a named function.

    ``f`` is either a :class:`SupportedFunc` or a pair ``(name, B)`` of a
    compact-open name and an integer bound on |f|.  The route is the
    contract one: polygonal approximation through the name, exact polygonal
    integration, tail estimates for the mass the window misses.
    """
    if isinstance(f, SupportedFunc):
        if isinstance(mu, LazyDiscreteMeasure):
            return _integrate_supported_lazy(f, mu, n)
        mass = mu.exact_total_mass()
        if mass is None:
            raise UnsupportedMeasureClass(
                f"unsupported measure class {type(mu).__name__}"
            )
        tol = _pow2(n) / (mass + 1)
        psi = approx_polygonal(f, tol)
        return integrate_poly(psi, mu)

    name, B = f
    B = Fraction(B)
    mass = total_mass_upper(mu)
    if isinstance(mu, LazyDiscreteMeasure):
        k = 0
        while mu.tail_bound(k) * (2 * B + 1) > _pow2(n + 2):
            k += 1
        prefix = mu.prefix(k)
        radius = max((abs(loc) for loc, _ in prefix), default=Fraction(0)) + 1
    else:
        radius = mu.support_radius() + 1
        prefix = None
    tol = _pow2(n + 1) / (mass + 1)
    psi = polygonal_on_window(name, -radius, radius, tol)
    if prefix is not None:
        return sum((w * psi(loc) for loc, w in prefix), Fraction(0))
    return integrate_poly(psi, mu)


# ---------------------------------------------------------------------------
# almost decidable sets


@dataclass(frozen=True)
class AlmostDecidablePair:
    """Disjoint effectively open (U, V) with mu(U)+mu(V)=mu(R), U u V dense."""

    U: SigmaSet
    V: SigmaSet
    for_measure: Measure

    def masses(self) -> tuple[Fraction, Fraction, Fraction]:
        mu = self.for_measure
        return (
            mu.region_mass_open(self.U.components),
            mu.region_mass_open(self.V.components),
            mu.exact_total_mass(),
        )

    def check(self) -> bool:
        if self.U.components is None or self.V.components is None:
            raise UnsupportedMeasureClass("check needs exact set descriptions")
        for al, ar in self.U.components:
            for bl, br in self.V.components:
                lo = max(
                    al if al is not None else bl, bl if bl is not None else al
                )
                hi = min(
                    ar if ar is not None else br, br if br is not None else ar
                )
                if lo is None or hi is None or lo < hi:
                    return False
        mu_u, mu_v, mu_r = self.masses()
        if mu_u + mu_v != mu_r:
            return False
        return _union_is_dense(self.U.components, self.V.components)


def _union_is_dense(a_comps, b_comps) -> bool:
    """closure(union) = R: unbounded both ways and only point-sized gaps."""
    comps = merge_open(list(a_comps) + list(b_comps))
    if not comps:
        return False
    if comps[0][0] is not None or comps[-1][1] is not None:
        return False
    return all(r0 == l1 for (_, r0), (l1, _) in zip(comps, comps[1:]))


def _sphere_is_null(mu: Measure, points: Sequence[Fraction]) -> bool:
    if isinstance(mu, DiscreteMeasure):
        locs = {loc for loc, _ in mu.atoms}
        return all(x not in locs for x in points)
    if isinstance(mu, PolyDensityMeasure):
        return True
    if isinstance(mu, LazyDiscreteMeasure):
        pred = getattr(mu, "location_predicate", None)
        if pred is None:
            raise UnsupportedMeasureClass(
                "lazy measure needs a location predicate for null spheres"
            )
        return all(not pred(x) for x in points)
    raise UnsupportedMeasureClass(f"unsupported measure class {type(mu).__name__}")


def almost_decidable_ball(
    mu: Measure, center, radius_bound, min_radius=0
) -> tuple[Fraction, AlmostDecidablePair]:
    """A ball around ``center`` whose bounding sphere is mu-null.

    Searches rational radii on successively finer odd grids inside
    (min_radius, radius_bound); only finitely many radii are excluded by
    atoms, so the search succeeds for the concrete classes.
    """
    center = Fraction(center)
    radius_bound = Fraction(radius_bound)
    min_radius = Fraction(min_radius)
    if not min_radius < radius_bound:
        raise ValueError("need min_radius < radius_bound")
    span = radius_bound - min_radius
    for K in (4, 16, 64, 256, 1024, 4096):
        for i in range(K):
            r = min_radius + span * Fraction(2 * i + 1, 2 * K)
            if _sphere_is_null(mu, (center - r, center + r)):
                pair = AlmostDecidablePair(
                    U=SigmaSet.ball(center, r),
                    V=SigmaSet.ball_exterior(center, r),
                    for_measure=mu,
                )
                return r, pair
    raise SearchExhausted("search exhausted: no null sphere found")


def almost_decidable_cover(mu: Measure, s) -> Stream:
    """An open cover of R by mu-almost decidable balls with radius < s.

    Centers walk the grid 0, s/2, -s/2, s, -s, ...; radii live in
    (s/4, 15s/16), so consecutive balls overlap and the union is all of R.
    """
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    pitch = s / 2

    def centers():
        yield Fraction(0)
        for j in itertools.count(1):
            yield j * pitch
            yield -j * pitch

    def pairs():
        for c in centers():
            _, pair = almost_decidable_ball(
                mu, c, radius_bound=s * Fraction(15, 16), min_radius=s / 4
            )
            yield pair

    return Stream(pairs())


def mass_of_interval(mu: Measure, interval) -> LowerReal:
    """mu(I) for an open interval I as the left-c.e. limit of tent integrals."""
    a, b = Fraction(interval[0]), Fraction(interval[1])

    def term(k: int) -> Fraction:
        t_k = indicator_approx((a, b), k)
        if isinstance(mu, LazyDiscreteMeasure):
            return sum((w * t_k(loc) for loc, w in mu.prefix(k)), Fraction(0))
        return integrate_poly(t_k, mu)

    return LowerReal(term)
