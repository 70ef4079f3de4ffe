"""Shared deterministic generators for the test suite.

Randomized checks use seeded ``random.Random`` instances so every run
exercises the same cases; hypothesis-based properties carry their own
shrinking seeds.
"""

import random
from fractions import Fraction

import pytest

from effmeas import DiscreteMeasure, PolyFunc


def rand_rational(rng: random.Random, lo=-4, hi=4, max_den=16) -> Fraction:
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def rand_discrete(rng: random.Random, max_atoms=5) -> DiscreteMeasure:
    """<= max_atoms atoms, rational locations in [-4, 4], weights summing <= 2."""
    n = rng.randint(0, max_atoms)
    budget = Fraction(2)
    atoms = []
    for _ in range(n):
        den = rng.randint(1, 16)
        w = Fraction(rng.randint(1, 2 * den), 2 * den)
        if w > budget:
            w = budget
        if w == 0:
            continue
        budget -= w
        atoms.append((rand_rational(rng), w))
    return DiscreteMeasure(tuple(atoms))


def rand_supported_poly(rng: random.Random, span=3, max_verts=5) -> PolyFunc:
    """A random compactly supported polygonal function."""
    k = rng.randint(1, max_verts)
    xs = sorted({rand_rational(rng, -span, span) for _ in range(k)})
    if not xs:
        xs = [Fraction(0)]
    verts = [(xs[0] - 1, Fraction(0))]
    verts += [(x, rand_rational(rng, -2, 2, 8)) for x in xs]
    verts += [(xs[-1] + 1, Fraction(0))]
    return PolyFunc(tuple(verts), "zero-outside")


@pytest.fixture
def rng():
    return random.Random(0xEFF)
