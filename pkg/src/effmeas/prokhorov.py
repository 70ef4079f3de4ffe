"""The Prokhorov metric and its equivalence with effective weak convergence.

``prokhorov_discrete`` computes the exact rational distance between finite
discrete measures; ``prokhorov_discrete_bruteforce`` is an independent
exhaustive oracle used by the test suite.  ``eps_from_weak`` and
``witness_from_eps`` implement the two converter directions between weak
convergence data and Prokhorov convergence data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .convergence import MeasureSeq, Modulus
from .errors import ContractViolation, SearchExhausted, UnsupportedMeasureClass
from .measures import (
    AlmostDecidablePair,
    DiscreteMeasure,
    Measure,
    PolyDensityMeasure,
    almost_decidable_cover,
)
from .reals import _pow2
from .sets import PiSet, expand_closed


class EpsFunction(Modulus):
    """N -> index with rho(mu_n, mu) < 2^-N for n >= of(N)."""


NOT_IN_CUT = "not in cut yet"


# ---------------------------------------------------------------------------
# exact distance on finite discrete measures


def _max_flow(n_nodes: int, capacity: dict, source: int, sink: int) -> Fraction:
    """Edmonds-Karp on exact rational capacities."""
    adj: dict[int, list[int]] = {i: [] for i in range(n_nodes)}
    cap = dict(capacity)
    for (u, v) in list(cap):
        adj[u].append(v)
        adj[v].append(u)
        cap.setdefault((v, u), Fraction(0))
    flow = Fraction(0)
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap.get((u, v), Fraction(0)) > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        path = []
        v = sink
        while v != source:
            path.append((parent[v], v))
            v = parent[v]
        push = min(cap[e] for e in path)
        for e in path:
            cap[e] -= push
            cap[(e[1], e[0])] = cap.get((e[1], e[0]), Fraction(0)) + push
        flow += push


def _direction_deficit(
    src: Sequence[tuple[Fraction, Fraction]],
    dst: Sequence[tuple[Fraction, Fraction]],
    threshold: Fraction,
) -> Fraction:
    """sup over atom sets S of src-mass(S) - dst-mass(neighbors of S).

    Neighborhood uses |x - y| <= threshold.  Equals total - maxflow by
    minimax duality for the bipartite transport relaxation.
    """
    if not src:
        return Fraction(0)
    # Source atoms with the same adjacency set are interchangeable; merge
    # them so the flow network stays small on fine discretization grids.
    groups: dict[tuple[int, ...], Fraction] = {}
    for x, w in src:
        sig = tuple(j for j, (y, _) in enumerate(dst) if abs(x - y) <= threshold)
        groups[sig] = groups.get(sig, Fraction(0)) + w
    isolated = groups.pop((), Fraction(0))
    sigs = list(groups)
    # The same merge applies to destination atoms seen from the groups.
    incident: dict[tuple[int, ...], Fraction] = {}
    back = {j: tuple(i for i, sig in enumerate(sigs) if j in sig) for j in range(len(dst))}
    for j, (_, v) in enumerate(dst):
        if back[j]:
            incident[back[j]] = incident.get(back[j], Fraction(0)) + v
    dsig = list(incident)
    ns, nd = len(sigs), len(dsig)
    total = sum(groups.values(), Fraction(0))
    source, sink = ns + nd, ns + nd + 1
    cap: dict[tuple[int, int], Fraction] = {}
    big = total + sum(incident.values(), Fraction(0)) + 1
    for i, sig in enumerate(sigs):
        cap[(source, i)] = groups[sig]
    for j, ds in enumerate(dsig):
        for i in ds:
            cap[(i, ns + j)] = big
        cap[(ns + j, sink)] = incident[ds]
    return isolated + total - _max_flow(ns + nd + 2, cap, source, sink)


def _critical_thresholds(
    a: Sequence[tuple[Fraction, Fraction]], b: Sequence[tuple[Fraction, Fraction]]
) -> list[Fraction]:
    ds = {Fraction(0)}
    ds.update(abs(x - y) for x, _ in a for y, _ in b)
    return sorted(ds)


def _infimum_over_levels(
    a: Sequence[tuple[Fraction, Fraction]],
    b: Sequence[tuple[Fraction, Fraction]],
    deficit: Callable[..., Fraction],
) -> Fraction:
    """rho as an infimum over the finitely many adjacency levels.

    For eps in (t_i, t_(i+1)] the open-neighborhood adjacency is |x-y| <=
    t_i; validity there means eps >= D_i, the worst mass deficit of either
    direction.  The interval contributes inf max(D_i, t_i) when D_i fits
    below the next threshold.
    """
    ts = _critical_thresholds(a, b)
    best = None
    for i, t in enumerate(ts):
        d = max(deficit(a, b, t), deficit(b, a, t))
        nxt = ts[i + 1] if i + 1 < len(ts) else None
        if nxt is not None and d > nxt:
            continue
        cand = max(d, t)
        if best is None or cand < best:
            best = cand
    assert best is not None  # the last level always yields a candidate
    return best


def _infimum_by_bisection(
    a: Sequence[tuple[Fraction, Fraction]],
    b: Sequence[tuple[Fraction, Fraction]],
    deficit: Callable[..., Fraction],
) -> Fraction:
    """Same infimum as :func:`_infimum_over_levels`, with O(log) deficits.

    D_i is nonincreasing in the level while t_i is increasing, so the
    predicate D_i <= t_i is monotone and max(D_i, t_i) is quasi-convex.
    At the first crossing i* the candidate is t_(i*) (always valid); the
    only other contender is D_(i*-1) when it fits below t_(i*).  Without a
    crossing the minimum is the last deficit, valid since t_(last+1) is
    unbounded.
    """
    ts = _critical_thresholds(a, b)

    def d_at(i: int) -> Fraction:
        return max(deficit(a, b, ts[i]), deficit(b, a, ts[i]))

    lo, hi = 0, len(ts)  # smallest i with D_i <= t_i, or len(ts) if none
    while lo < hi:
        mid = (lo + hi) // 2
        if d_at(mid) <= ts[mid]:
            hi = mid
        else:
            lo = mid + 1
    if lo == len(ts):
        return d_at(len(ts) - 1)
    best = ts[lo]
    if lo > 0:
        prev = d_at(lo - 1)
        if prev <= ts[lo]:
            best = min(best, prev)
    return best


def prokhorov_discrete(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    """Exact Prokhorov distance between finite discrete measures.

    Deficits per adjacency level are computed by an exact max-flow; the
    returned value is the infimum of the valid epsilons, which need not be
    valid itself (the neighborhoods are open).
    """
    return _infimum_by_bisection(mu.atoms, nu.atoms, _direction_deficit)


def _brute_deficit(
    src: Sequence[tuple[Fraction, Fraction]],
    dst: Sequence[tuple[Fraction, Fraction]],
    threshold: Fraction,
) -> Fraction:
    """Deficit by exhaustive subset enumeration (test oracle)."""
    best = Fraction(0)
    n = len(src)
    for mask in range(1, 1 << n):
        s = [src[i] for i in range(n) if mask >> i & 1]
        s_mass = sum((w for _, w in s), Fraction(0))
        nb = sum(
            (v for y, v in dst if any(abs(x - y) <= threshold for x, _ in s)),
            Fraction(0),
        )
        best = max(best, s_mass - nb)
    return best


def prokhorov_discrete_bruteforce(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    """Independent exhaustive oracle for :func:`prokhorov_discrete`."""
    return _infimum_over_levels(mu.atoms, nu.atoms, _brute_deficit)


def brute_force_valid(
    mu: DiscreteMeasure, nu: DiscreteMeasure, eps: Fraction
) -> bool:
    """Check every test-set inequality at a fixed eps (open neighborhoods)."""

    def one_way(a, b) -> bool:
        n = len(a)
        for mask in range(1, 1 << n):
            s = [a[i] for i in range(n) if mask >> i & 1]
            s_mass = sum((w for _, w in s), Fraction(0))
            nb = sum(
                (v for y, v in b if any(abs(x - y) < eps for x, _ in s)),
                Fraction(0),
            )
            if s_mass > nb + eps:
                return False
        return True

    return one_way(mu.atoms, nu.atoms) and one_way(nu.atoms, mu.atoms)


# ---------------------------------------------------------------------------
# bounds for mixed / density measures via grid discretization


def _discretize(mu: Measure, pitch: Fraction) -> tuple[DiscreteMeasure, Fraction]:
    """(atomic surrogate, Prokhorov discretization error bound)."""
    if isinstance(mu, DiscreteMeasure):
        return mu, Fraction(0)
    if isinstance(mu, PolyDensityMeasure):
        comps = mu.density.support_components()
        atoms: list[tuple[Fraction, Fraction]] = []
        for l, r in comps:
            k = (l / pitch).__floor__()
            a = k * pitch
            while a < r:
                b = a + pitch
                w = mu.mass_closed(((max(a, l), min(b, r)),))
                if w > 0:
                    atoms.append((a + pitch / 2, w))
                a = b
        return DiscreteMeasure(tuple(atoms)), pitch
    raise UnsupportedMeasureClass(
        f"unsupported measure class for discretization: {type(mu).__name__}"
    )


def prokhorov_bounds(mu: Measure, nu: Measure, n: int) -> tuple[Fraction, Fraction]:
    """Certified rational bounds on rho(mu, nu), gap at most 2^-n.

    Densities are replaced by cell-mass atoms on a grid of pitch 2^-(n+2);
    moving mass within a cell perturbs the distance by at most the pitch.
    """
    pitch = _pow2(n + 2)
    mu_d, e1 = _discretize(mu, pitch)
    nu_d, e2 = _discretize(nu, pitch)
    d = prokhorov_discrete(mu_d, nu_d)
    return max(Fraction(0), d - e1 - e2), d + e1 + e2


# ---------------------------------------------------------------------------
# weak convergence => eps-function


def _union_mass_gap_sup(
    mu_n: DiscreteMeasure,
    mu: DiscreteMeasure,
    balls: Sequence[tuple[Fraction, Fraction]],
) -> Fraction:
    """sup over all unions A of the given open balls of |mu_n(A) - mu(A)|.

    Atoms are grouped by ball-membership signature; a hit-pattern of
    signature classes is realizable iff every hit signature survives after
    removing all indices touched by a miss signature.  The sup is then a
    max over at most 2^(#classes) patterns, never 2^(#balls) unions.
    """
    classes: dict[frozenset, Fraction] = {}

    def add(x: Fraction, signed_w: Fraction):
        sig = frozenset(
            j for j, (l, r) in enumerate(balls) if l < x < r
        )
        if sig:
            classes[sig] = classes.get(sig, Fraction(0)) + signed_w

    for x, w in mu_n.atoms:
        add(x, w)
    for x, w in mu.atoms:
        add(x, -w)
    sigs = list(classes)
    best = Fraction(0)
    for mask in range(1 << len(sigs)):
        hit = [sigs[i] for i in range(len(sigs)) if mask >> i & 1]
        miss = [sigs[i] for i in range(len(sigs)) if not mask >> i & 1]
        excluded = frozenset().union(*miss) if miss else frozenset()
        if all(sig - excluded for sig in hit):
            val = sum((classes[s] for s in hit), Fraction(0))
            best = max(best, abs(val))
    return best


def eps_from_weak(
    seq: MeasureSeq,
    limit: Measure,
    ad_modulus: Callable[[AlmostDecidablePair], Modulus],
    N: int,
    *,
    max_balls: int = 1 << 16,
) -> int:
    """Smallest index beyond which all ball-union masses are 2^-(N+2)-close.

    Construction: almost decidable balls of radius below 2^-(N+3) cover all
    but 2^-(N+2) of the limit mass using the first k0+1 balls; the returned
    index is the least n from which sup over unions A of |mu_n(A) - mu(A)|
    stays below 2^-(N+2), which forces rho(mu_n, mu) < 2^-N.

    The supplied per-ball moduli must certify exact stability for the
    corpus (their index bounds the drift below every ball boundary), which
    makes the per-ball maximum an upper bound for all unions; the scan
    below then verifies the union bound exactly at every intermediate n.
    """
    if not isinstance(limit, DiscreteMeasure):
        raise UnsupportedMeasureClass(
            "eps_from_weak requires a finite discrete limit"
        )
    s = _pow2(N + 3)
    cover = almost_decidable_cover(limit, s)

    total = limit.exact_total_mass()
    slack = _pow2(N + 2)
    # Pull balls until the uncovered limit mass drops below the slack.
    pulled: list[AlmostDecidablePair] = []
    need = [(x, w) for x, w in limit.atoms]
    uncovered = total
    j = 0
    while uncovered > slack:
        if j >= max_balls:
            raise SearchExhausted("cover search exhausted within ball budget")
        pulled.append(cover[j])
        l, r = pulled[j].U.components[0]
        still = []
        for x, w in need:
            if l < x < r:
                uncovered -= w
            else:
                still.append((x, w))
        need = still
        j += 1
    k0 = max(j - 1, 0)
    while len(pulled) <= k0:
        pulled.append(cover[len(pulled)])
    balls = [p.U.components[0] for p in pulled[: k0 + 1]]

    n_hi = max(ad_modulus(p).of(N + 2) for p in pulled[: k0 + 1])
    bound = _pow2(N + 2)
    sups = [
        _union_mass_gap_sup(seq[n], limit, balls) for n in range(n_hi + 1)
    ]
    if sups and sups[-1] >= bound:
        raise ContractViolation(
            "almost-decidable modulus contract failure at its own index",
            witness=(N, n_hi, sups[-1]),
        )
    n0 = n_hi
    while n0 > 0 and sups[n0 - 1] < bound:
        n0 -= 1
    return n0


def eps_function(
    seq: MeasureSeq,
    limit: Measure,
    ad_modulus: Callable[[AlmostDecidablePair], Modulus],
    **kw,
) -> EpsFunction:
    return EpsFunction(lambda N: eps_from_weak(seq, limit, ad_modulus, N, **kw))


# ---------------------------------------------------------------------------
# eps-function => limsup witness


def witness_from_eps(
    seq: MeasureSeq,
    limit: Measure,
    eps: EpsFunction,
    C: PiSet,
    r: Union[Fraction, int],
    *,
    max_m: int = 64,
) -> Union[int, str]:
    """Index beyond which mu_n(C) < r, for r in the right cut of mu(C).

    Waits for r to clear the cut (exact here: corpus limits have exactly
    computable closed masses), then finds M0 with r - mu(C) > 2^-M0 and N0
    with r - mu(closure of the 2^-N0 neighborhood of C) > 2^-M0, and
    returns eps(M0 + N0 + 1).  Returns the sentinel string when r is not
    (yet) certified above mu(C).
    """
    r = Fraction(r)
    comps = C.closed_components
    if comps is None:
        raise UnsupportedMeasureClass("witness_from_eps needs exact closed components")
    if not isinstance(limit, (DiscreteMeasure, PolyDensityMeasure)):
        raise UnsupportedMeasureClass("witness_from_eps needs a concrete limit")
    mu_c = limit.mass_closed(comps)
    if r <= mu_c:
        return NOT_IN_CUT
    gap = r - mu_c
    m0 = 0
    while _pow2(m0) >= gap:
        m0 += 1
    for n0_exp in range(max_m):
        fat = expand_closed(comps, _pow2(n0_exp))
        if r - limit.mass_closed(fat) > _pow2(m0):
            return eps.of(m0 + n0_exp + 1)
    raise SearchExhausted(
        f"search exhausted: no shrinking neighborhood certified within 2^-{max_m}"
    )


def assemble_limsup_witness(
    seq: MeasureSeq,
    limit: Measure,
    eps: EpsFunction,
    C: PiSet,
    rs: Sequence[Fraction],
):
    """LimsupWitness table over the sampled rationals that clear the cut."""
    from .convergence import LimsupWitness

    entries = []
    for r in rs:
        idx = witness_from_eps(seq, limit, eps, C, r)
        if idx != NOT_IN_CUT:
            entries.append((Fraction(r), idx))
    return LimsupWitness(tuple(entries))
