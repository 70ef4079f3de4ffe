"""Plain-text file formats for measures, functions, and certificates.

Measure files::

    discrete
    atom 0 1/2
    atom 1 1/2

    polydensity
    0 0
    1/2 1
    1 0
    tailbound 1/1024      # optional, lazy discrete only

Function files::

    polyfunc zero-outside
    0 0
    5/4 1
    5/2 0

Certificate files are modulus tables (``modulus`` header, then ``N index``
rows).  Enumeration files carry one natural number per line.  All numbers
are exact rationals ``p/q`` or integers; serialization always emits
reduced fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .convergence import Modulus
from .errors import ParseError
from .functions import PolyFunc
from .measures import DiscreteMeasure, Measure, PolyDensityMeasure


def _rational(tok: str, line_no: int) -> Fraction:
    try:
        if "/" in tok:
            p, q = tok.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(line_no, f"bad rational {tok!r}: {exc}") from None


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def parse_measure(text: str) -> Measure:
    rows = list(_lines(text))
    if not rows:
        raise ParseError(1, "empty measure file")
    line_no, header = rows[0]
    if header == "discrete":
        atoms = []
        for line_no, line in rows[1:]:
            parts = line.split()
            if parts[0] != "atom" or len(parts) != 3:
                raise ParseError(line_no, f"expected 'atom <loc> <weight>', got {line!r}")
            atoms.append((_rational(parts[1], line_no), _rational(parts[2], line_no)))
        try:
            return DiscreteMeasure(tuple(atoms))
        except Exception as exc:
            raise ParseError(line_no, str(exc)) from None
    if header == "polydensity":
        verts = []
        for line_no, line in rows[1:]:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(line_no, f"expected 'x y' vertex, got {line!r}")
            verts.append((_rational(parts[0], line_no), _rational(parts[1], line_no)))
        try:
            return PolyDensityMeasure(PolyFunc(tuple(verts), "zero-outside"))
        except Exception as exc:
            raise ParseError(line_no, str(exc)) from None
    raise ParseError(line_no, f"unknown header {header!r} (want discrete|polydensity)")


def serialize_measure(mu: Measure) -> str:
    if isinstance(mu, DiscreteMeasure):
        out = ["discrete"]
        out.extend(f"atom {x} {w}" for x, w in mu.atoms)
        return "\n".join(out) + "\n"
    if isinstance(mu, PolyDensityMeasure):
        out = ["polydensity"]
        out.extend(f"{x} {y}" for x, y in mu.density.vertices)
        return "\n".join(out) + "\n"
    raise TypeError(f"cannot serialize measure class {type(mu).__name__}")


def parse_function(text: str) -> PolyFunc:
    rows = list(_lines(text))
    if not rows:
        raise ParseError(1, "empty function file")
    line_no, header = rows[0]
    parts = header.split()
    if parts[0] != "polyfunc" or len(parts) != 2:
        raise ParseError(line_no, "expected 'polyfunc <zero-outside|constant-extend>'")
    extension = parts[1]
    if extension not in ("zero-outside", "constant-extend"):
        raise ParseError(line_no, f"unknown extension {extension!r}")
    verts = []
    for line_no, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"expected 'x y' vertex, got {line!r}")
        verts.append((_rational(parts[0], line_no), _rational(parts[1], line_no)))
    try:
        return PolyFunc(tuple(verts), extension)
    except Exception as exc:
        raise ParseError(line_no, str(exc)) from None


def serialize_function(p: PolyFunc) -> str:
    out = [f"polyfunc {p.extension}"]
    out.extend(f"{x} {y}" for x, y in p.vertices)
    return "\n".join(out) + "\n"


def parse_enumeration(text: str) -> list[int]:
    values = []
    for line_no, line in _lines(text):
        try:
            v = int(line)
        except ValueError:
            raise ParseError(line_no, f"expected a natural number, got {line!r}") from None
        if v < 0:
            raise ParseError(line_no, "enumeration values must be nonnegative")
        values.append(v)
    return values


def parse_modulus(text: str) -> Modulus:
    rows = list(_lines(text))
    if not rows or rows[0][1] != "modulus":
        raise ParseError(rows[0][0] if rows else 1, "expected 'modulus' header")
    table: dict[int, int] = {}
    for line_no, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"expected '<N> <index>', got {line!r}")
        try:
            table[int(parts[0])] = int(parts[1])
        except ValueError as exc:
            raise ParseError(line_no, str(exc)) from None
    if not table:
        raise ParseError(rows[0][0], "modulus table has no rows")
    return Modulus.from_table(table)


def serialize_modulus(entries: dict[int, int]) -> str:
    out = ["modulus"]
    out.extend(f"{n} {idx}" for n, idx in sorted(entries.items()))
    return "\n".join(out) + "\n"
