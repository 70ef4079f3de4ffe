"""Effective subsets of the real line.

Open sets are enumerations of rational open intervals they contain, closed
sets are enumerations of rational open intervals they avoid, and compact
sets are enumerations of minimal finite covers.  Sets built from concrete
rational data additionally carry an exact finite description, on which every
semi-decision collapses to a decidable rational-geometry check; the stream
interfaces stay fully general.

Open components are ``(left, right)`` pairs of rationals where ``None``
stands for an infinite endpoint; closed components are finite ``[left,
right]`` pairs with ``left <= right`` (points allowed).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from . import codes
from .errors import EmptyCompact, MalformedInterval
from .reals import CauchyReal, LowerReal, _pow2
from .streams import Fuel, Stream, interleave

OpenComp = tuple[Optional[Fraction], Optional[Fraction]]
ClosedComp = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class RationalInterval:
    """A bounded rational interval, open or closed."""

    left: Fraction
    right: Fraction
    kind: str = "open"  # "open" | "closed"

    def __post_init__(self):
        object.__setattr__(self, "left", Fraction(self.left))
        object.__setattr__(self, "right", Fraction(self.right))
        if self.kind not in ("open", "closed"):
            raise MalformedInterval(f"unknown interval kind {self.kind!r}")
        if self.kind == "open" and not self.left < self.right:
            raise MalformedInterval("open interval needs left < right")
        if self.kind == "closed" and not self.left <= self.right:
            raise MalformedInterval("closed interval needs left <= right")


# ---------------------------------------------------------------------------
# exact geometry on component lists


def _key(x: Optional[Fraction], sign: int) -> Fraction:
    # None sorts as -inf on the left (sign -1) / +inf on the right (sign +1)
    if x is not None:
        return x
    return Fraction(sign) * Fraction(10**30)


def merge_open(intervals: Sequence[OpenComp]) -> tuple[OpenComp, ...]:
    """Union of open intervals as disjoint sorted open components.

    Touching open intervals like (0,1) and (1,2) are NOT merged: their union
    is not an interval.
    """
    ivs = [iv for iv in intervals if iv[0] is None or iv[1] is None or iv[0] < iv[1]]
    ivs.sort(key=lambda iv: (_key(iv[0], -1), _key(iv[1], 1)))
    out: list[OpenComp] = []
    for l, r in ivs:
        if out:
            pl, pr = out[-1]
            if pr is None or (l is not None and l < pr):
                if pr is not None and (r is None or r > pr):
                    out[-1] = (pl, r)
                continue
        out.append((l, r))
    return tuple(out)


def merge_closed(intervals: Sequence[ClosedComp]) -> tuple[ClosedComp, ...]:
    """Union of closed intervals as disjoint sorted closed components."""
    ivs = sorted(intervals)
    out: list[ClosedComp] = []
    for l, r in ivs:
        if l > r:
            raise MalformedInterval("closed component needs left <= right")
        if out and l <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], r))
        else:
            out.append((l, r))
    return tuple(out)


def open_contains_interval(comps: Sequence[OpenComp], l: Fraction, r: Fraction) -> bool:
    """Is the open interval (l, r) contained in the union of components?"""
    for cl, cr in comps:
        if (cl is None or cl <= l) and (cr is None or r <= cr):
            return True
    return False


def open_contains_point(comps: Sequence[OpenComp], x: Fraction) -> bool:
    return any((cl is None or cl < x) and (cr is None or x < cr) for cl, cr in comps)


def closed_contains_point(comps: Sequence[ClosedComp], x: Fraction) -> bool:
    return any(l <= x <= r for l, r in comps)


def open_disjoint_from_closed(
    l: Fraction, r: Fraction, comps: Sequence[ClosedComp]
) -> bool:
    """Is the open interval (l, r) disjoint from the closed union?"""
    return all(r <= cl or cr <= l for cl, cr in comps)


def dist_point_to_closed(x: Fraction, comps: Sequence[ClosedComp]) -> Fraction:
    if not comps:
        raise ValueError("distance to the empty set is undefined")
    best = None
    for l, r in comps:
        d = Fraction(0) if l <= x <= r else (l - x if x < l else x - r)
        best = d if best is None else min(best, d)
    return best


def expand_closed(comps: Sequence[ClosedComp], s: Fraction) -> tuple[ClosedComp, ...]:
    """closure(B(C, s)) for a finite closed union C."""
    return merge_closed([(l - s, r + s) for l, r in comps])


def complement_of_closed(comps: Sequence[ClosedComp]) -> tuple[OpenComp, ...]:
    """The complement of a finite closed union, as open components."""
    comps = merge_closed(comps)
    out: list[OpenComp] = []
    prev: Optional[Fraction] = None
    for l, r in comps:
        out.append((prev, l))
        prev = r
    out.append((prev, None))
    if not comps:
        return ((None, None),)
    return tuple(iv for iv in out if iv[0] is None or iv[1] is None or iv[0] < iv[1])


# ---------------------------------------------------------------------------
# enumeration schedules


def _code_filtered(predicate) -> Iterator[tuple[Fraction, Fraction]]:
    """Intervals whose codes pass ``predicate``, in code order."""
    for i in itertools.count():
        l, r = codes.decode_open_interval(i)
        if predicate(l, r):
            yield (l, r)


def _safe_inner_exhaustion(comps) -> Iterator[tuple[Fraction, Fraction]]:
    """Bounded open intervals exhausting the open components from inside.

    Round m emits, per component, the sub-interval staying 2^-m away from
    finite endpoints and truncated to [-2^m, 2^m]; a component thinner than
    2^-m contributes nothing in round m.
    """
    for m in itertools.count(1):
        delta = _pow2(m)
        span = Fraction(2**m)
        for cl, cr in comps:
            l = -span if cl is None else cl + delta
            r = span if cr is None else cr - delta
            if l < r:
                yield (l, r)


class SigmaSet:
    """An effectively open subset of R: a stream of open intervals inside it."""

    def __init__(self, enumeration, components: Sequence[OpenComp] | None = None):
        self.components = merge_open(components) if components is not None else None

        def check_inside(_i: int, prefix: list):
            l, r = prefix[-1]
            if self.components is not None and not open_contains_interval(
                self.components, l, r
            ):
                raise MalformedInterval(
                    f"enumerated interval ({l}, {r}) escapes the open set"
                )

        self.enumeration = Stream(enumeration, validate=check_inside)

    @classmethod
    def from_components(cls, comps: Sequence[OpenComp]) -> "SigmaSet":
        comps = merge_open(comps)
        if not comps:
            return cls(iter(()), components=())
        stream = interleave(
            _code_filtered(lambda l, r: open_contains_interval(comps, l, r)),
            _safe_inner_exhaustion(comps),
        )
        return cls(stream, components=comps)

    @classmethod
    def full_line(cls) -> "SigmaSet":
        return cls.from_components([(None, None)])

    @classmethod
    def ball(cls, center: Fraction, radius: Fraction) -> "SigmaSet":
        return cls.from_components([(center - radius, center + radius)])

    @classmethod
    def ball_exterior(cls, center: Fraction, radius: Fraction) -> "SigmaSet":
        return cls.from_components(
            [(None, center - radius), (center + radius, None)]
        )

    def interval(self, k: int) -> tuple[Fraction, Fraction]:
        return self.enumeration[k]

    def enumerates_interval(self, l: Fraction, r: Fraction) -> bool:
        """Decidable membership of an interval code in the enumeration
        (exact-description sets only)."""
        if self.components is None:
            raise ValueError("no exact description; pull the enumeration instead")
        return open_contains_interval(self.components, Fraction(l), Fraction(r))

    def enumerates_code(self, i: int) -> bool:
        return self.enumerates_interval(*codes.decode_open_interval(i))


def sigma_from_intervals(intervals) -> SigmaSet:
    """SigmaSet for a finite union of rational open intervals."""
    comps: list[OpenComp] = []
    for iv in intervals:
        if isinstance(iv, RationalInterval):
            if iv.kind != "open":
                raise MalformedInterval("sigma_from_intervals expects open intervals")
            comps.append((iv.left, iv.right))
        else:
            l, r = iv
            if not (l is None or r is None or Fraction(l) < Fraction(r)):
                raise MalformedInterval(f"malformed open interval ({l}, {r})")
            comps.append(
                (None if l is None else Fraction(l), None if r is None else Fraction(r))
            )
    return SigmaSet.from_components(comps)


class PiSet:
    """An effectively closed subset of R: a stream of avoided open intervals."""

    def __init__(self, avoid_enumeration, closed_components: Sequence[ClosedComp] | None = None):
        self.closed_components = (
            merge_closed(closed_components) if closed_components is not None else None
        )

        def check_disjoint(_i: int, prefix: list):
            l, r = prefix[-1]
            if self.closed_components is not None and not open_disjoint_from_closed(
                l, r, self.closed_components
            ):
                raise MalformedInterval(
                    f"enumerated interval ({l}, {r}) meets the closed set"
                )

        self.avoid_enumeration = Stream(avoid_enumeration, validate=check_disjoint)

    def avoided(self, k: int) -> tuple[Fraction, Fraction]:
        return self.avoid_enumeration[k]

    def avoids_interval(self, l: Fraction, r: Fraction) -> bool:
        if self.closed_components is None:
            raise ValueError("no exact description; pull the enumeration instead")
        return open_disjoint_from_closed(
            Fraction(l), Fraction(r), self.closed_components
        )

    def avoids_code(self, i: int) -> bool:
        return self.avoids_interval(*codes.decode_open_interval(i))


def pi_from_complement(closed_intervals) -> PiSet:
    """PiSet for a finite union of closed rational intervals (points allowed)."""
    comps: list[ClosedComp] = []
    for iv in closed_intervals:
        if isinstance(iv, RationalInterval):
            if iv.kind != "closed":
                raise MalformedInterval("pi_from_complement expects closed intervals")
            comps.append((iv.left, iv.right))
        else:
            l, r = iv
            l, r = Fraction(l), Fraction(r)
            if l > r:
                raise MalformedInterval(f"malformed closed interval [{l}, {r}]")
            comps.append((l, r))
    merged = merge_closed(comps)
    hole = complement_of_closed(merged)
    stream = interleave(
        _code_filtered(lambda l, r: open_disjoint_from_closed(l, r, merged)),
        _safe_inner_exhaustion(hole),
    )
    return PiSet(stream, closed_components=merged)


# ---------------------------------------------------------------------------
# semi-decisions and derived objects


class Membership:
    INSIDE = "inside"
    UNDETERMINED = "undetermined"


def sigma_member(x: CauchyReal, U: SigmaSet, fuel: Fuel) -> str:
    """Semi-decide x in U: certified containment of an approximant box."""
    pulled: list[tuple[Fraction, Fraction]] = []
    for k in range(fuel.budget):
        pulled.append(U.interval(k))
        xk = x.approx(k)
        err = _pow2(k - 1)
        for l, r in pulled:
            if l < xk - err and xk + err < r:
                return Membership.INSIDE
    return Membership.UNDETERMINED


def dist_to_closed(x: CauchyReal, C: PiSet) -> LowerReal:
    """d(x, C) as a left-c.e. real, from the avoided-interval enumeration.

    If the merged avoided intervals contain a ball of radius t around the
    approximant, the true point is at distance > t - 2^{-n+1} from C.
    """

    def gen():
        best = Fraction(0)
        pulled: list[OpenComp] = []
        for n in itertools.count():
            pulled.append(C.avoided(n))
            merged = merge_open(pulled)
            xn = x.approx(n)
            t = Fraction(0)
            for l, r in merged:
                if (l is None or l < xn) and (r is None or xn < r):
                    tl = Fraction(10**9) if l is None else xn - l
                    tr = Fraction(10**9) if r is None else r - xn
                    t = min(tl, tr)
                    break
            best = max(best, t - _pow2(n - 1), Fraction(0))
            yield best

    return LowerReal(gen())


def closed_neighborhood(C: PiSet, s: Fraction) -> PiSet:
    """A PiSet for closure(B(C, s)).

    An interval B(a, r) is avoided exactly when d(a, C) > r + s is
    certified: exactly for concrete closed sets, by fueled lower bounds on
    the distance otherwise.
    """
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be a positive rational")
    if C.closed_components is not None:
        return pi_from_complement(expand_closed(C.closed_components, s))

    def gen():
        for m in itertools.count(2):
            step = _pow2(m)
            radius = _pow2(m)
            span = m
            j_range = range(-span * 2**m, span * 2**m + 1)
            for j in j_range:
                a = j * step
                d = dist_to_closed(CauchyReal.from_rational(a), C)
                if d.approx(Fuel(m)) > radius + s:
                    yield (a - radius, a + radius)

    return PiSet(gen())


class CompactName:
    """A compact set named by a stream of minimal finite covers.

    Names constructed by :func:`compact_from_closed_union` shrink their
    cover hull by at least 2^-m per index m; :func:`compact_bounds` relies
    on that schedule to emit valid Cauchy names (a foreign name with slower
    covers surfaces as a name violation downstream).
    """

    def __init__(self, covers, exact_hull: ClosedComp | None = None):
        self.covers = Stream(covers)
        self.exact_hull = exact_hull

    def cover(self, m: int) -> tuple[tuple[Fraction, Fraction], ...]:
        return self.covers[m]


def compact_from_closed_union(closed_intervals) -> CompactName:
    raw = [
        (iv.left, iv.right) if isinstance(iv, RationalInterval) else iv
        for iv in closed_intervals
    ]
    comps = merge_closed([(Fraction(l), Fraction(r)) for l, r in raw])
    if not comps:
        raise EmptyCompact("empty compact")
    gaps = [comps[i + 1][0] - comps[i][1] for i in range(len(comps) - 1)]
    max_delta = min(gaps) / 3 if gaps else None

    def cover_at(m: int):
        delta = _pow2(m)
        if max_delta is not None:
            delta = min(delta, max_delta)
        return tuple((l - delta, r + delta) for l, r in comps)

    hull = (comps[0][0], comps[-1][1])
    return CompactName(cover_at, exact_hull=hull)


def compact_bounds(K: CompactName) -> tuple[CauchyReal, CauchyReal]:
    """(min K, max K) as Cauchy names read off shrinking cover hulls."""

    def hull(m: int) -> tuple[Fraction, Fraction]:
        cov = K.cover(m)
        if not cov:
            raise EmptyCompact("empty compact")
        return min(l for l, _ in cov), max(r for _, r in cov)

    lo = CauchyReal(lambda n: hull(n + 2)[0])
    hi = CauchyReal(lambda n: hull(n + 2)[1])
    return lo, hi


def compact_hull_bounds(K: CompactName, m: int) -> tuple[Fraction, Fraction]:
    """Rational hull [l, u] with l <= min K and max K <= u, from cover m."""
    cov = K.cover(m)
    if not cov:
        raise EmptyCompact("empty compact")
    return min(l for l, _ in cov), max(r for _, r in cov)
