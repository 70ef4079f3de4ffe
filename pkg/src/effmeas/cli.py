"""Command-line front door.

Subcommands::

    effmeas prokhorov A.measure B.measure [--precision n]
    effmeas demo specker [--enum NAME|FILE] [--function NAME|FILE] [--fuel k]
    effmeas verify MODE SEQ LIMIT [FUNCTION] [N-LIST] [--construct]
                   [--certificate FILE] [--fuel k] [--out FILE.csv]

MODE is one of weak, vague, eps, witness, vague-to-weak.  SEQ names a
builtin family (deltashrink, deltan, mixture, deltadrift, specker); LIMIT
is a builtin measure name or a measure file.  N-LIST tokens look like
``4`` or ``1..8`` or ``1,3,5``.  Exit codes: 0 all rows pass, 1 some row
fails, 2 certified divergence, 3 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import re
import sys
from fractions import Fraction

from .convergence import (
    Modulus,
    check_modulus,
    vague_to_weak,
    weak_modulus,
)
from .corpora import (
    builtin_function,
    builtin_measure,
    corpus_by_name,
    specker_corpus,
)
from .errors import (
    ContractViolation,
    DivergenceDetected,
    DuplicateEnumeration,
    EffmeasError,
    ParseError,
)
from .fileformat import (
    parse_enumeration,
    parse_function,
    parse_measure,
    parse_modulus,
)
from .functions import co_name_of_poly, supported_from_poly
from .measures import DiscreteMeasure, integrate_poly
from .prokhorov import (
    eps_function,
    prokhorov_bounds,
    prokhorov_discrete,
    witness_from_eps,
    NOT_IN_CUT,
)
from .reals import _pow2
from .sets import pi_from_complement
from .streams import Fuel


REPORT_HEADER = ("N", "index", "checked_n", "quantity", "bound", "result")


def _decimal(q: Fraction, digits: int = 20) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole = q.numerator // q.denominator
    frac = q - whole
    digits_str = (
        str((frac.numerator * 10**digits) // frac.denominator).rjust(digits, "0")
        if frac
        else "0" * digits
    )
    return f"{sign}{whole}.{digits_str}"


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class Report:
    def __init__(self):
        self.rows: list[tuple] = []

    def add(self, N, index, checked_n, quantity, bound, ok: bool):
        self.rows.append(
            (N, index, checked_n, str(quantity), str(bound), "pass" if ok else "fail")
        )

    @property
    def passed(self) -> bool:
        return all(r[-1] == "pass" for r in self.rows)

    def emit(self, out_path=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        writer.writerows(self.rows)
        text = buf.getvalue()
        sys.stdout.write(text)
        if out_path:
            with open(out_path, "w") as fh:
                fh.write(text)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _resolve_measure(token: str):
    if os.path.exists(token):
        return parse_measure(_read(token))
    try:
        return builtin_measure(token)
    except KeyError:
        raise ParseError(1, f"unknown measure {token!r} (no such file or builtin)")


def _resolve_function(token: str):
    """(PolyFunc, kind) from a builtin name or a polyfunc file."""
    if os.path.exists(token):
        p = parse_function(_read(token))
        return p, ("supported" if p.extension == "zero-outside" else "bounded")
    try:
        return builtin_function(token)
    except KeyError:
        raise ParseError(1, f"unknown function {token!r} (no such file or builtin)")


_NLIST = re.compile(r"^\d+(\.\.\d+)?(,\d+(\.\.\d+)?)*$")


def _parse_nlist(token: str) -> list[int]:
    ns: list[int] = []
    for part in token.split(","):
        if ".." in part:
            a, b = part.split("..")
            ns.extend(range(int(a), int(b) + 1))
        else:
            ns.append(int(part))
    return ns


# ---------------------------------------------------------------------------
# subcommands


def cmd_prokhorov(args) -> int:
    a = _resolve_measure(args.file_a)
    b = _resolve_measure(args.file_b)
    if isinstance(a, DiscreteMeasure) and isinstance(b, DiscreteMeasure):
        d = prokhorov_discrete(a, b)
        print(_frac(d))
        print(_decimal(d))
        return 0
    lo, hi = prokhorov_bounds(a, b, args.precision)
    print(f"{_frac(lo)} {_frac(hi)}")
    print(f"{_decimal(lo)} {_decimal(hi)}")
    return 0


def cmd_demo_specker(args) -> int:
    if args.enum and os.path.exists(args.enum):
        from .convergence import specker_sequence

        values = parse_enumeration(_read(args.enum))
        sp = specker_sequence(iter(values))
        horizon = len(values) - 1
    else:
        sp = specker_corpus(args.enum or "identity")
        horizon = None
    poly, kind = _resolve_function(args.function or "hat")
    if kind != "supported":
        raise ParseError(1, "the demo needs a compactly supported function")
    f = supported_from_poly(poly)
    mod = sp.vague_modulus(f)
    idx = mod.of(0)
    report = Report()
    top = idx + args.fuel if horizon is None else min(idx + args.fuel, horizon)
    hull_hi = f.support.exact_hull[1]
    limit_val = sum(
        (sp.weight(i) * poly(Fraction(i)) for i in range(max(0, hull_hi.__ceil__()) + 1)),
        Fraction(0),
    )
    for n in range(top + 1):
        q = abs(integrate_poly(poly, sp.seq[n]) - limit_val)
        ok = q == 0 if n >= idx else True
        report.add(0, idx, n, q, Fraction(0), ok)
    report.emit(args.out)
    print("# total-mass lower bounds (hidden oracle; strictly partial):")
    lower = sp.total_mass_lower()
    for k in range(0, args.fuel + 1, max(1, args.fuel // 5)):
        print(f"#   fuel {k}: {_frac(lower.bound(k))}")
    return 0 if report.passed else 1


def _verify_integral_rows(report, values, limit_val, mod, Ns, window):
    rep = check_modulus(values, limit_val, mod, Ns, Fuel(window))
    for row in rep.rows:
        report.add(row.N, row.index, row.checked_n, row.quantity, row.bound, row.ok)


def cmd_verify(args) -> int:
    Ns = args.ns or list(range(1, 7))
    window = args.fuel
    report = Report()
    corpus = None
    if args.seq.startswith("specker"):
        sp = specker_corpus(args.seq.split(":", 1)[1] if ":" in args.seq else "identity")
        seq = sp.seq
    else:
        corpus = corpus_by_name(args.seq)
        seq = corpus.seq
    limit = _resolve_measure(args.limit)

    cert_mod = parse_modulus(_read(args.certificate)) if args.certificate else None
    construct = args.construct or cert_mod is None

    if args.mode in ("weak", "vague", "vague-to-weak"):
        poly, kind = _resolve_function(args.function or ("hat" if args.mode == "vague" else "constant-one"))
        exact_limit = integrate_poly(poly, limit)

        if args.mode == "weak":
            if construct:
                if corpus is not None and corpus.weak_oracle is not None:
                    mod = corpus.weak_oracle((co_name_of_poly(poly), poly.bound()))
                else:
                    mod = weak_modulus(seq, limit, co_name_of_poly(poly), poly.bound())
            else:
                mod = cert_mod
        elif args.mode == "vague":
            if kind != "supported":
                raise ParseError(1, "vague verification needs a supported function")
            f = supported_from_poly(poly)
            if construct:
                if corpus is not None:
                    mod = corpus.vague_oracle(f)
                else:
                    mod = sp.vague_modulus(f)
            else:
                mod = cert_mod
        else:  # vague-to-weak
            if corpus is None or corpus.tm is None:
                raise ParseError(1, "vague-to-weak needs a builtin corpus with mass data")
            entries = {}
            for N in Ns:
                entries[N] = vague_to_weak(
                    seq,
                    limit,
                    corpus.tm,
                    corpus.vague_oracle,
                    co_name_of_poly(poly),
                    int(poly.bound().__ceil__()),
                    N,
                )
            mod = Modulus.from_table(entries)
        _verify_integral_rows(
            report, lambda n: integrate_poly(poly, seq[n]), exact_limit, mod, Ns, window
        )

    elif args.mode == "eps":
        if corpus is None or corpus.ad_modulus is None:
            raise ParseError(1, "eps verification needs a builtin corpus with ball moduli")
        eps = (
            eps_function(seq, limit, corpus.ad_modulus)
            if construct
            else cert_mod
        )
        for N in Ns:
            idx = eps.of(N)
            bound = _pow2(N)
            for n in range(idx, idx + window + 1):
                d = prokhorov_discrete(seq[n], limit)
                report.add(N, idx, n, d, bound, d < bound)

    elif args.mode == "witness":
        if corpus is None or corpus.ad_modulus is None:
            raise ParseError(1, "witness verification needs a builtin corpus")
        eps = eps_function(seq, limit, corpus.ad_modulus)
        comps = ((Fraction(0), Fraction(1)),)
        C = pi_from_complement(comps)
        mu_c = limit.mass_closed(comps)
        for N in Ns:
            r = mu_c + _pow2(N)
            idx = witness_from_eps(seq, limit, eps, C, r)
            if idx == NOT_IN_CUT:
                report.add(N, -1, -1, r, mu_c, False)
                continue
            for n in range(idx, idx + window + 1):
                q = seq[n].mass_closed(comps)
                report.add(N, idx, n, q, r, q < r)
    else:
        raise ParseError(1, f"unknown verify mode {args.mode!r}")

    report.emit(args.out)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effmeas",
        description="Exact-arithmetic effective convergence toolkit for measures on R.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prokhorov", help="distance between two measure files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--precision", type=int, default=6)
    p.set_defaults(fn=cmd_prokhorov)

    d = sub.add_parser("demo", help="built-in demonstrations")
    dsub = d.add_subparsers(dest="demo_name", required=True)
    ds = dsub.add_parser("specker", help="slowly revealed total mass demo")
    ds.add_argument("--enum", default=None, help="builtin enumeration name or file")
    ds.add_argument("--function", default=None, help="builtin function name or file")
    ds.add_argument("--fuel", type=int, default=10)
    ds.add_argument("--out", default=None)
    ds.set_defaults(fn=cmd_demo_specker)

    v = sub.add_parser("verify", help="construct and/or validate certificates")
    v.add_argument("mode", choices=["weak", "vague", "eps", "witness", "vague-to-weak"])
    v.add_argument("seq", help="builtin family name")
    v.add_argument("limit", help="builtin measure name or measure file")
    v.add_argument("extras", nargs="*", help="optional function and N-list tokens")
    v.add_argument("--certificate", default=None)
    v.add_argument("--construct", action="store_true")
    v.add_argument("--precision", default=None, help="N list, e.g. 1..8")
    v.add_argument("--fuel", type=int, default=10)
    v.add_argument("--out", default=None)
    v.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, leftover = parser.parse_known_args(argv)
    bad = [t for t in leftover if t.startswith("-")]
    if bad or (leftover and args.fn is not cmd_verify):
        parser.error(f"unrecognized arguments: {' '.join(leftover)}")
    if args.fn is cmd_verify:
        args.extras = list(args.extras) + leftover
        args.function = None
        args.ns = _parse_nlist(args.precision) if args.precision else None
        for token in args.extras:
            if _NLIST.match(token):
                args.ns = _parse_nlist(token)
            else:
                args.function = token
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (DivergenceDetected,) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ContractViolation, DuplicateEnumeration) as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return 1
    except EffmeasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
