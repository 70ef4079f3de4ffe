"""Builtin measure-sequence families and their analytic certificate oracles.

Each corpus bundles a sequence, its limit, and closed-form moduli derived
from the family's geometry (atom drift rates or support escape), entirely
independent of the certified-scan constructions they are used to test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .convergence import (
    MeasureSeq,
    Modulus,
    SpeckerSequence,
    TotalMassModulus,
    specker_sequence,
)
from .errors import UnsupportedMeasureClass
from .functions import (
    CompactOpenName,
    PolyFunc,
    SupportedFunc,
    constant_func,
    hat_function,
)
from .measures import AlmostDecidablePair, DiscreteMeasure, Measure
from .reals import _pow2


def _poly_backing(f) -> PolyFunc:
    """Exact polygonal backing of a named function, for analytic oracles."""
    if isinstance(f, SupportedFunc):
        p = f.poly
    elif isinstance(f, tuple):
        p = getattr(f[0], "poly", None)
    elif isinstance(f, CompactOpenName):
        p = getattr(f, "poly", None)
    else:
        p = None
    if p is None:
        raise UnsupportedMeasureClass(
            "analytic corpus oracles need a polygonal-backed function name"
        )
    return p


def _first_below(target: Fraction) -> int:
    """Smallest n with 2^-n < target (target > 0)."""
    n = 0
    while _pow2(n) >= target:
        n += 1
    return n


@dataclass
class Corpus:
    """A builtin family with analytic moduli."""

    name: str
    seq: MeasureSeq
    limit: Measure
    weakly_convergent: bool
    vague_oracle: Callable[[SupportedFunc], Modulus]
    weak_oracle: Optional[Callable] = None
    tm: Optional[TotalMassModulus] = None
    ad_modulus: Optional[Callable[[AlmostDecidablePair], Modulus]] = None


# ---------------------------------------------------------------------------
# drifting-atom families: fixed weights, locations x_i + d_i * 2^-n


class DriftingAtomFamily:
    def __init__(self, atoms: Sequence[tuple[Fraction, Fraction, int]]):
        """``atoms``: (limit location, weight, drift flag 0/1)."""
        self.atoms = [(Fraction(x), Fraction(w), int(d)) for x, w, d in atoms]
        self.total = sum((w for _, w, _ in self.atoms), Fraction(0))

    def member(self, n: int) -> DiscreteMeasure:
        return DiscreteMeasure(
            tuple((x + d * _pow2(n), w) for x, w, d in self.atoms)
        )

    def limit(self) -> DiscreteMeasure:
        return DiscreteMeasure(tuple((x, w) for x, w, _ in self.atoms))

    def integral_oracle(self, f) -> Modulus:
        """|int f dmu_n - int f dmu| <= total * L * 2^-n for Lipschitz L."""
        p = _poly_backing(f)
        lw = p.lipschitz() * self.total
        if lw == 0:
            return Modulus.constant(0)
        return Modulus(lambda N: _first_below(_pow2(N) / lw))

    def ad_modulus(self, pair: AlmostDecidablePair) -> Modulus:
        """Exact-stability index: drift below every boundary clearance.

        Once every drifting atom's displacement is smaller than its
        distance to each finite endpoint of the pair's open part, member
        and limit masses agree exactly on the set, so any precision is met.
        """
        comps = pair.U.components
        if comps is None:
            raise UnsupportedMeasureClass("need exact components")
        ends = [e for c in comps for e in c if e is not None]
        gaps = [
            abs(x - e) for x, _, d in self.atoms if d for e in ends
        ]
        if not gaps:
            return Modulus.constant(0)
        delta = min(gaps)
        if delta == 0:
            raise UnsupportedMeasureClass(
                "pair boundary touches a drifting atom's limit location"
            )
        idx = _first_below(delta)
        return Modulus.constant(idx)


def deltashrink() -> Corpus:
    fam = DriftingAtomFamily([(Fraction(0), Fraction(1), 1)])
    return Corpus(
        name="deltashrink",
        seq=MeasureSeq(fam.member),
        limit=fam.limit(),
        weakly_convergent=True,
        vague_oracle=fam.integral_oracle,
        weak_oracle=fam.integral_oracle,
        tm=TotalMassModulus.constant(0),
        ad_modulus=fam.ad_modulus,
    )


def mixture(
    w1: Fraction = Fraction(1, 2),
    w2: Fraction = Fraction(1, 2),
    a: Fraction = Fraction(0),
    b: Fraction = Fraction(1),
) -> Corpus:
    fam = DriftingAtomFamily([(a, w1, 0), (b, w2, 1)])
    return Corpus(
        name="mixture",
        seq=MeasureSeq(fam.member),
        limit=fam.limit(),
        weakly_convergent=True,
        vague_oracle=fam.integral_oracle,
        weak_oracle=fam.integral_oracle,
        tm=TotalMassModulus.constant(0),
        ad_modulus=fam.ad_modulus,
    )


def deltadrift(loc: Fraction = Fraction(1)) -> Corpus:
    """delta at loc + 2^-n, converging to delta at loc."""
    fam = DriftingAtomFamily([(loc, Fraction(1), 1)])
    return Corpus(
        name="deltadrift",
        seq=MeasureSeq(fam.member),
        limit=fam.limit(),
        weakly_convergent=True,
        vague_oracle=fam.integral_oracle,
        weak_oracle=fam.integral_oracle,
        tm=TotalMassModulus.constant(0),
        ad_modulus=fam.ad_modulus,
    )


# ---------------------------------------------------------------------------
# the escaping-atom family: vaguely null, not weakly convergent


def _deltan_vague_oracle(f) -> Modulus:
    """Constant index: once n clears sup supp f, all integrals vanish."""
    p = _poly_backing(f)
    if p.extension != "zero-outside":
        raise UnsupportedMeasureClass("need a compactly supported function")
    comps = p.support_components()
    if not comps:
        return Modulus.constant(0)
    hi = comps[-1][1]
    return Modulus.constant(max(0, hi.__ceil__()) + 1)


def deltan() -> Corpus:
    return Corpus(
        name="deltan",
        seq=MeasureSeq(lambda n: DiscreteMeasure.point(Fraction(n))),
        limit=DiscreteMeasure.zero(),
        weakly_convergent=False,
        vague_oracle=_deltan_vague_oracle,
        weak_oracle=None,
        tm=TotalMassModulus.constant(0),
        ad_modulus=None,
    )


# ---------------------------------------------------------------------------
# Specker enumerations


def specker_enumeration(name: str):
    if name == "identity":
        return iter(itertools.count())
    if name == "squares":
        return (i * i for i in itertools.count())
    raise KeyError(f"unknown builtin enumeration {name!r}")


def specker_corpus(enum_name: str = "identity") -> SpeckerSequence:
    return specker_sequence(specker_enumeration(enum_name))


# ---------------------------------------------------------------------------
# registries


def corpus_by_name(name: str, **params) -> Corpus:
    table = {
        "deltashrink": deltashrink,
        "deltan": deltan,
        "mixture": mixture,
        "deltadrift": deltadrift,
    }
    if name not in table:
        raise KeyError(f"unknown builtin corpus {name!r}")
    return table[name](**params)


def builtin_measure(name: str) -> Measure:
    table = {
        "delta0": lambda: DiscreteMeasure.point(Fraction(0)),
        "delta1": lambda: DiscreteMeasure.point(Fraction(1)),
        "zero": DiscreteMeasure.zero,
        "halfhalf": lambda: DiscreteMeasure(
            ((Fraction(0), Fraction(1, 2)), (Fraction(1), Fraction(1, 2)))
        ),
    }
    if name not in table:
        raise KeyError(f"unknown builtin measure {name!r}")
    return table[name]()


def builtin_function(name: str):
    """Named test functions for the CLI.

    Returns (poly, kind) where kind is "supported" or "bounded".
    """
    if name == "constant-one":
        return constant_func(Fraction(1)), "bounded"
    if name == "hat":
        return (
            hat_function(Fraction(0), Fraction(5, 4), Fraction(5, 2), Fraction(1)),
            "supported",
        )
    if name == "clamped-identity":
        return (
            PolyFunc(
                ((Fraction(-1), Fraction(-1)), (Fraction(1), Fraction(1))),
                "constant-extend",
            ),
            "bounded",
        )
    if name == "zero":
        return (
            PolyFunc(
                ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
                "zero-outside",
            ),
            "supported",
        )
    raise KeyError(f"unknown builtin function {name!r}")
