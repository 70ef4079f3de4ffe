"""Moduli, witnesses, and the convergence converters.

A modulus maps a precision exponent N to an index beyond which the target
sequence stays within 2^-N of its limit.  Converters in this module build
new moduli out of supplied ones; convergence of the input sequence is
always caller-asserted (it is undecidable), and every produced certificate
is meant to be re-checked by :func:`check_modulus` on concrete data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import (
    ContractViolation,
    DivergenceDetected,
    DuplicateEnumeration,
    SearchExhausted,
    UnsupportedMeasureClass,
)
from .functions import (
    PolyFunc,
    SupportedFunc,
    approx_polygonal,
    polygonal_on_window,
    supported_from_poly,
    tent_function,
)
from .measures import (
    DiscreteMeasure,
    LazyDiscreteMeasure,
    Measure,
    PolyDensityMeasure,
    integrate_named,
    mass_of_interval,
)
from .reals import CauchyReal, LowerReal, _pow2
from .sets import compact_hull_bounds
from .streams import Fuel, Stream


class MeasureSeq:
    """A uniformly given sequence of measures, memoized by index."""

    def __init__(self, at: Callable[[int], Measure]):
        self._at = at
        self._memo: dict[int, Measure] = {}

    def __getitem__(self, n: int) -> Measure:
        if n not in self._memo:
            self._memo[n] = self._at(n)
        return self._memo[n]


@dataclass
class Modulus:
    """N -> index certificate: n >= of(N) implies |a_n - a| < 2^-N."""

    fn: Callable[[int], int]
    _memo: dict = field(default_factory=dict, repr=False)

    def of(self, N: int) -> int:
        if N not in self._memo:
            self._memo[N] = int(self.fn(N))
        return self._memo[N]

    @classmethod
    def constant(cls, n0: int) -> "Modulus":
        return cls(lambda _N: n0)

    @classmethod
    def from_table(cls, table: dict[int, int]) -> "Modulus":
        def fn(N):
            if N in table:
                return table[N]
            usable = [i for k, i in table.items() if k >= N]
            if not usable:
                raise KeyError(f"no table entry usable for precision {N}")
            return min(usable)

        return cls(fn)


TotalMassModulus = Modulus


@dataclass(frozen=True)
class LimsupWitness:
    """Partial map on the right Dedekind cut: r > a_n for n >= g(r)."""

    entries: tuple[tuple[Fraction, int], ...]

    def items(self):
        return self.entries


@dataclass(frozen=True)
class LiminfWitness:
    """Partial map on the left Dedekind cut: r < a_n for n >= g(r)."""

    entries: tuple[tuple[Fraction, int], ...]

    def items(self):
        return self.entries


@dataclass(frozen=True)
class CheckRow:
    N: int
    index: int
    checked_n: int
    quantity: Fraction
    bound: Fraction
    ok: bool


@dataclass
class CheckReport:
    rows: list[CheckRow]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if not r.ok]


def _limit_value_and_error(limit, prec: int) -> tuple[Fraction, Fraction]:
    if isinstance(limit, CauchyReal):
        return limit.approx(prec), _pow2(prec - 1)
    return Fraction(limit), Fraction(0)


def check_modulus(
    values: Callable[[int], Fraction],
    limit: Union[Fraction, int, CauchyReal],
    m: Modulus,
    Ns: Sequence[int],
    fuel: Fuel,
) -> CheckReport:
    """Validate a modulus against exactly computed sequence values.

    For each N the indices of(N) .. of(N)+budget are sampled; a row passes
    when |a_n - limit| < 2^-N is certified.
    """
    rows: list[CheckRow] = []
    for N in Ns:
        idx = m.of(N)
        lim, lim_err = _limit_value_and_error(limit, N + 3)
        bound = _pow2(N)
        for n in range(idx, idx + fuel.budget + 1):
            q = abs(Fraction(values(n)) - lim)
            rows.append(CheckRow(N, idx, n, q, bound, q + lim_err < bound))
    return CheckReport(rows)


# ---------------------------------------------------------------------------
# modulus construction by certified scanning


def _scan_for_index(
    value_at: Callable[[int], Fraction],
    err: Fraction,
    limit_value: Fraction,
    limit_err: Fraction,
    N: int,
    *,
    max_n: int,
    window: int,
) -> int:
    """Smallest index whose whole lookahead window is certified 2^-N-close.

    Raises DivergenceDetected when, at the end of the scan, the deviation
    from the claimed limit is still certified to be at least 2^-N: that
    refutes every candidate index within the scanned range (it cannot
    refute convergence itself, which is the caller's assertion).
    """
    bound = _pow2(N)
    slack = err + limit_err
    devs: dict[int, Fraction] = {}

    def dev(n: int) -> Fraction:
        if n not in devs:
            devs[n] = abs(value_at(n) - limit_value)
        return devs[n]

    candidate: Optional[int] = None
    for n0 in range(max_n + 1):
        hi = min(max_n, n0 + window)
        if all(dev(n) + slack < bound for n in range(n0, hi + 1)):
            candidate = n0
            break
    if candidate is not None:
        return candidate
    tail_dev = dev(max_n)
    if tail_dev - slack >= bound:
        raise DivergenceDetected(
            "divergence detected: certified deviation "
            f"{tail_dev} at index {max_n} is not below 2^-{N}",
            witness=(N, max_n, tail_dev),
        )
    raise SearchExhausted(
        f"insufficient name progress: no stable index below {max_n}"
    )


def weak_modulus(
    seq: MeasureSeq,
    limit: Measure,
    f_name,
    B: int,
    *,
    max_n: int = 128,
    window: int = 24,
) -> Modulus:
    """A modulus for the integrals of a bounded named function.

    ``f_name`` is a compact-open name; ``B`` bounds |f|.  Built from
    certified integration plus tail bounds; raises DivergenceDetected when
    the sequence provably fails to track the claimed limit integral.
    """

    def of(N: int) -> int:
        prec = N + 3
        lim = integrate_named((f_name, B), limit, prec)
        return _scan_for_index(
            lambda n: integrate_named((f_name, B), seq[n], prec),
            _pow2(prec),
            lim,
            _pow2(prec),
            N,
            max_n=max_n,
            window=window,
        )

    return Modulus(of)


def vague_modulus(
    seq: MeasureSeq,
    limit: Measure,
    f: SupportedFunc,
    *,
    max_n: int = 128,
    window: int = 24,
) -> Modulus:
    """A modulus for the integrals of a compactly supported named function."""

    def of(N: int) -> int:
        prec = N + 3
        lim = integrate_named(f, limit, prec)
        return _scan_for_index(
            lambda n: integrate_named(f, seq[n], prec),
            _pow2(prec),
            lim,
            _pow2(prec),
            N,
            max_n=max_n,
            window=window,
        )

    return Modulus(of)


VagueOracle = Callable[[SupportedFunc], Modulus]


def scan_vague_oracle(seq: MeasureSeq, limit: Measure, **kw) -> VagueOracle:
    return lambda f: vague_modulus(seq, limit, f, **kw)


# ---------------------------------------------------------------------------
# the uniformizer (vague convergence)


def uniformize_vague(
    seq: MeasureSeq,
    limit: Measure,
    oracle: VagueOracle,
    f: SupportedFunc,
    N: int,
) -> int:
    """Uniform modulus for an arbitrary compactly supported named function.

    Dominating-tent construction: a plateau-1 tent T over the integer hull
    of supp f caps the local mass, a polygonal surrogate psi is taken
    2^-(N+2)/(1 + int T dmu_n0)-close to f, and the oracle's index for psi
    at precision N+1 closes the 2^-(N+2) + 2^-(N+1) + 2^-(N+2) = 2^-N
    budget.  The tent plateau is widened by one unit on each side so that
    it also covers the surrogate's support.
    """
    l, u = compact_hull_bounds(f.support, 8)
    F = l.__floor__() - 1
    C = u.__ceil__() + 1
    tent = tent_function((Fraction(F), Fraction(C)))
    tent_s = supported_from_poly(tent)
    tent_mod = oracle(tent_s)
    n0 = tent_mod.of(1)
    d_up = integrate_named(tent_s, seq[n0], 6) + _pow2(6)
    tol = _pow2(N + 2) / (1 + d_up)
    psi = approx_polygonal(f, tol)
    n1 = oracle(supported_from_poly(psi)).of(N + 1)
    return max(n0, n1)


# ---------------------------------------------------------------------------
# the Specker-style demonstration sequence


class SpeckerSequence:
    """mu_n = sum_{i<=n} 2^-(a_i+1) delta_i for an injective enumeration a.

    Vague moduli for compactly supported functions are exactly constant
    beyond the support window, while the limit's total mass is only ever
    revealed through strictly improving lower bounds.
    """

    def __init__(self, enum_source):
        seen: set[int] = set()

        def check(i: int, prefix: list):
            v = prefix[i]
            if v != int(v) or int(v) < 0:
                raise DuplicateEnumeration(
                    f"enumeration value {v!r} is not a natural number"
                )
            if int(v) in seen:
                raise DuplicateEnumeration(
                    f"duplicate enumeration of {int(v)} at position {i}"
                )
            seen.add(int(v))

        self.enum = Stream(enum_source, validate=check)
        self.seq = MeasureSeq(self._measure_at)

    def weight(self, i: int) -> Fraction:
        return _pow2(int(self.enum[i]) + 1)

    def _measure_at(self, n: int) -> DiscreteMeasure:
        return DiscreteMeasure(
            tuple((Fraction(i), self.weight(i)) for i in range(n + 1))
        )

    def vague_modulus(self, f: SupportedFunc) -> Modulus:
        hull = f.support.exact_hull
        if hull is not None:
            u = hull[1]
        else:
            _, u = compact_hull_bounds(f.support, 8)
        idx = max(0, u.__ceil__()) + 1
        return Modulus.constant(idx)

    def vague_oracle(self) -> VagueOracle:
        return self.vague_modulus

    def limit_measure(self) -> LazyDiscreteMeasure:
        return LazyDiscreteMeasure(
            lambda i: (Fraction(i), self.weight(i)),
            locations_increasing=True,
            location_predicate=lambda x: x == int(x) and x >= 0,
        )

    def total_mass_lower(self) -> LowerReal:
        return LowerReal(
            lambda k: sum((self.weight(i) for i in range(k + 1)), Fraction(0))
        )


def specker_sequence(enum_source) -> SpeckerSequence:
    return SpeckerSequence(enum_source)


# ---------------------------------------------------------------------------
# vague => weak machinery


def complement_modulus(g1: Modulus, g2: TotalMassModulus, N: int) -> int:
    """Modulus index for the integrals of 1 - f, 0 <= f <= 1."""
    return max(g1.of(N + 1), g2.of(N + 1))


def validate_total_mass_modulus(
    seq: MeasureSeq,
    tm: TotalMassModulus,
    Ns: Sequence[int],
    window: int,
) -> None:
    """Refute an invalid total-mass modulus via a Cauchy-condition violation.

    A valid modulus forces |mu_n(R) - mu_m(R)| < 2^-(N-1) for n, m >= of(N);
    an exact violation inside the window is a certified contract failure.
    """
    for N in Ns:
        idx = tm.of(N)
        masses = []
        for n in range(idx, idx + window + 1):
            m = seq[n].exact_total_mass()
            if m is None:
                raise UnsupportedMeasureClass("need exact member masses")
            masses.append((n, m))
        for (n1, m1) in masses:
            for (n2, m2) in masses:
                if abs(m1 - m2) >= _pow2(N - 1):
                    raise ContractViolation(
                        "total-mass modulus contract failure: "
                        f"|mu_{n1}(R) - mu_{n2}(R)| = {abs(m1 - m2)} >= 2^-{N - 1}",
                        witness=(N, n1, n2, abs(m1 - m2)),
                    )


def tail_mass_bound(
    seq: MeasureSeq,
    tm: TotalMassModulus,
    oracle: VagueOracle,
    N: int,
    *,
    max_doublings: int = 24,
) -> tuple[int, int]:
    """(a, n0) with mu_n(R \\ [-a, a]) < 2^-N for all n >= n0.

    Compares the limiting total mass against limiting integrals of wide
    tents; once the gap is certified below 2^-(N+2) the tent support wins.
    """
    prec = N + 5
    i_m = tm.of(prec)
    m_apx = seq[i_m].exact_total_mass()
    a = 1
    for _ in range(max_doublings):
        tent_s = supported_from_poly(tent_function((Fraction(-a), Fraction(a))))
        mod = oracle(tent_s)
        j = mod.of(prec)
        l_apx = integrate_named(tent_s, seq[j], prec)
        if m_apx - l_apx + 4 * _pow2(prec) <= _pow2(N + 2):
            n0 = max(tm.of(N + 3), mod.of(N + 3))
            return a + 1, n0
        a *= 2
    raise SearchExhausted("search exhausted: no tail-capturing window found")


def polygonal_surrogate(
    f_name,
    B: int,
    N: int,
    seq: MeasureSeq,
    limit: Measure,
    tm: TotalMassModulus,
    oracle: VagueOracle,
) -> tuple[int, int, PolyFunc]:
    """(a, n1, psi): a computably compactly supported polygonal stand-in.

    psi tracks f within tol on [-a+1, a-1] and ramps to zero, so the
    integral error splits into tol * mass inside and (2B+1) * tail outside;
    both budgets are pinned to 2^-(N+1).
    """
    B = int(B)
    Nt = N + 2 + (2 * B + 1).bit_length()
    a1, n1 = tail_mass_bound(seq, tm, oracle, Nt)
    W = a1 + 1
    i0 = tm.of(0)
    prefix_masses = [seq[n].exact_total_mass() for n in range(i0 + 1)]
    mass_bound = max(prefix_masses, default=Fraction(0)) + 2
    tol = _pow2(N + 1) / (mass_bound + 1)
    core = polygonal_on_window(f_name, Fraction(-a1), Fraction(a1), tol)
    verts = (
        [(Fraction(-W), Fraction(0))]
        + list(core.vertices)
        + [(Fraction(W), Fraction(0))]
    )
    psi = PolyFunc(tuple(verts), "zero-outside")

    lim_tail = limit.exact_total_mass()
    if lim_tail is not None:
        inside = limit.region_mass_open([(Fraction(-a1), Fraction(a1))])
        if lim_tail - inside >= _pow2(Nt):
            raise ContractViolation(
                "limit measure carries more tail mass than the certified bound",
                witness=(a1, lim_tail - inside),
            )
    return W, n1, psi


def vague_to_weak(
    seq: MeasureSeq,
    limit: Measure,
    tm: TotalMassModulus,
    oracle: VagueOracle,
    f_name,
    B: int,
    N: int,
    *,
    validate_tm: bool = True,
    tm_check: tuple[Sequence[int], int] = ((2, 4, 6), 40),
) -> int:
    """Weak-modulus index for a bounded named function, from vague data.

    The total-mass modulus is sanity-checked first: an exact Cauchy
    violation within the check window is reported as a contract failure
    instead of silently producing an invalid certificate.
    """
    if validate_tm:
        validate_total_mass_modulus(seq, tm, *tm_check)
    lim_mass = limit.exact_total_mass()
    if lim_mass is not None:
        p = N + 6
        m_apx = seq[tm.of(p)].exact_total_mass()
        if m_apx is not None and abs(m_apx - lim_mass) - _pow2(p) > 0:
            raise DivergenceDetected(
                "divergence detected: the total masses converge to "
                f"{m_apx} (within 2^-{p}) but the limit has mass {lim_mass}",
                witness=(m_apx, lim_mass),
            )
    _, n1, psi = polygonal_surrogate(f_name, B, N + 2, seq, limit, tm, oracle)
    n2 = oracle(supported_from_poly(psi)).of(N + 1)
    return max(n1, n2)


# ---------------------------------------------------------------------------
# computable-limit reconstruction


class ReconstructedMeasure(Measure):
    """The limit measure rebuilt from a vague oracle and its total mass.

    Interval masses are enumerated from below through the monotone tent
    family; an open set is handled as a countable union of intervals with
    inner monotone approximation.
    """

    def __init__(self, seq: MeasureSeq, oracle: VagueOracle, total_mass: CauchyReal):
        self.seq = seq
        self.oracle = oracle
        self._total = total_mass

    def total_mass_real(self) -> CauchyReal:
        return self._total

    def interval_mass_lower(self, a, b) -> LowerReal:
        from .functions import indicator_approx

        a, b = Fraction(a), Fraction(b)

        def gen():
            best = None
            for t in itertools.count():
                t_k = supported_from_poly(indicator_approx((a, b), t))
                prec = t + 2
                j = self.oracle(t_k).of(prec)
                val = integrate_named(t_k, self.seq[j], prec)
                lower = max(val - 2 * _pow2(prec), Fraction(0))
                best = lower if best is None else max(best, lower)
                yield best

        return LowerReal(gen())

    def open_mass(self, U) -> LowerReal:
        def comp_lower(comp, t: int) -> Fraction:
            l, r = comp
            if l is None:
                l = -Fraction(2**t)
            if r is None:
                r = Fraction(2**t)
            if not l < r:
                return Fraction(0)
            return self.interval_mass_lower(l, r).bound(t)

        if U.components is not None:
            comps = U.components

            def gen():
                best = None
                for t in itertools.count():
                    v = sum((comp_lower(c, t) for c in comps), Fraction(0))
                    best = v if best is None else max(best, v)
                    yield best

            return LowerReal(gen())

        def gen_pull():
            from .sets import merge_open

            best = None
            pulled = []
            for t in itertools.count():
                pulled.append(U.interval(t))
                comps = merge_open(pulled)
                v = sum((comp_lower(c, t) for c in comps), Fraction(0))
                best = v if best is None else max(best, v)
                yield best

        return LowerReal(gen_pull())


def limit_from_vague(
    seq: MeasureSeq, oracle: VagueOracle, total_mass: CauchyReal
) -> ReconstructedMeasure:
    return ReconstructedMeasure(seq, oracle, total_mass)


# ---------------------------------------------------------------------------
# portmanteau certificate checking


@dataclass(frozen=True)
class PortmanteauRow:
    label: str
    checked_n: int
    quantity: Fraction
    bound: Fraction
    ok: bool


@dataclass
class PortmanteauReport:
    rows: list[PortmanteauRow]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)


def _member_mass_closed(mu: Measure, comps) -> Fraction:
    if isinstance(mu, (DiscreteMeasure, PolyDensityMeasure)):
        return mu.mass_closed(comps)
    raise UnsupportedMeasureClass("need a concrete measure class")


def portmanteau_check(
    seq: MeasureSeq,
    limit: Measure,
    mode: str,
    target,
    certificate,
    *,
    window: int = 20,
    Ns: Sequence[int] = (1, 2, 3, 4, 5, 6),
) -> PortmanteauReport:
    """Validate a supplied convergence certificate on concrete data.

    Modes: ``closed-limsup`` (LimsupWitness on a PiSet), ``open-liminf``
    (LiminfWitness on a SigmaSet), ``almost-decidable`` (Modulus on an
    AlmostDecidablePair).
    """
    rows: list[PortmanteauRow] = []
    if mode == "closed-limsup":
        mu_c = _member_mass_closed(limit, target.closed_components)
        for r, idx in certificate.items():
            r = Fraction(r)
            in_cut = r > mu_c
            rows.append(
                PortmanteauRow(f"r={r} in right cut", idx, mu_c, r, in_cut)
            )
            if not in_cut:
                continue
            for n in range(idx, idx + window + 1):
                q = _member_mass_closed(seq[n], target.closed_components)
                rows.append(PortmanteauRow(f"mu_n(C) < {r}", n, q, r, q < r))
    elif mode == "open-liminf":
        mu_u = limit.region_mass_open(target.components)
        for r, idx in certificate.items():
            r = Fraction(r)
            in_cut = r < mu_u
            rows.append(
                PortmanteauRow(f"r={r} in left cut", idx, mu_u, r, in_cut)
            )
            if not in_cut:
                continue
            for n in range(idx, idx + window + 1):
                q = seq[n].region_mass_open(target.components)
                rows.append(PortmanteauRow(f"mu_n(U) > {r}", n, q, r, q > r))
    elif mode == "almost-decidable":
        mu_a = limit.region_mass_open(target.U.components)
        for N in Ns:
            idx = certificate.of(N)
            bound = _pow2(N)
            for n in range(idx, idx + window + 1):
                q = abs(seq[n].region_mass_open(target.U.components) - mu_a)
                rows.append(
                    PortmanteauRow(f"|mu_n(A)-mu(A)| < 2^-{N}", n, q, bound, q < bound)
                )
    else:
        raise ValueError(f"unknown portmanteau mode {mode!r}")
    return PortmanteauReport(rows)
