"""Moduli, the uniformizer, Specker demo, and the vague-to-weak pipeline."""

from fractions import Fraction

import pytest

from effmeas import (
    CauchyReal,
    ContractViolation,
    DiscreteMeasure,
    DivergenceDetected,
    DuplicateEnumeration,
    Fuel,
    MeasureSeq,
    Modulus,
    TotalMassModulus,
    check_modulus,
    complement_modulus,
    constant_func,
    hat_function,
    integrate_poly,
    limit_from_vague,
    pi_from_complement,
    portmanteau_check,
    specker_sequence,
    supported_from_poly,
    tail_mass_bound,
    uniformize_vague,
    vague_modulus,
    vague_to_weak,
    weak_modulus,
)
from effmeas.convergence import (
    LimsupWitness,
    LiminfWitness,
    polygonal_surrogate,
    scan_vague_oracle,
    validate_total_mass_modulus,
)
from effmeas.corpora import deltan, deltashrink, mixture
from effmeas.functions import co_name_of_poly
from effmeas.reals import _pow2
from tests.conftest import rand_supported_poly


HAT = hat_function(Fraction(0), Fraction(5, 4), Fraction(5, 2), Fraction(1))


class TestModulus:
    def test_constant_and_table(self):
        assert Modulus.constant(7).of(3) == 7
        m = Modulus.from_table({2: 5, 4: 9})
        assert m.of(4) == 9
        assert m.of(3) == 9  # falls back to a deeper entry
        with pytest.raises(KeyError):
            m.of(6)

    def test_memoized(self):
        calls = []
        m = Modulus(lambda N: calls.append(N) or N)
        m.of(3), m.of(3)
        assert calls == [3]


class TestCheckModulus:
    def test_passes_valid_modulus(self):
        rep = check_modulus(
            lambda n: _pow2(n), Fraction(0), Modulus(lambda N: N + 1), [1, 3, 5], Fuel(4)
        )
        assert rep.passed

    def test_fails_invalid_modulus(self):
        rep = check_modulus(
            lambda n: _pow2(n), Fraction(0), Modulus.constant(0), [4], Fuel(2)
        )
        assert not rep.passed
        assert rep.failures()[0].checked_n == 0

    def test_cauchy_limit(self):
        limit = CauchyReal.from_rational(Fraction(1, 3))
        rep = check_modulus(
            lambda n: Fraction(1, 3) + _pow2(n),
            limit,
            Modulus(lambda N: N + 2),
            [2, 6],
            Fuel(3),
        )
        assert rep.passed


class TestScanModuli:
    def test_weak_modulus_matches_analytic_rate(self):
        c = deltashrink()
        p = HAT
        m = weak_modulus(c.seq, c.limit, co_name_of_poly(p), 1)
        for N in (1, 3, 6):
            idx = m.of(N)
            lim = integrate_poly(p, c.limit)
            for n in range(idx, idx + 10):
                assert abs(integrate_poly(p, c.seq[n]) - lim) < _pow2(N)

    def test_vague_modulus(self):
        c = mixture()
        f = supported_from_poly(HAT)
        m = vague_modulus(c.seq, c.limit, f)
        lim = integrate_poly(HAT, c.limit)
        idx = m.of(5)
        for n in range(idx, idx + 10):
            assert abs(integrate_poly(HAT, c.seq[n]) - lim) < _pow2(5)

    def test_divergence_detected_for_escaping_mass(self):
        dn = deltan()
        one = constant_func(Fraction(1))
        with pytest.raises(DivergenceDetected):
            weak_modulus(dn.seq, dn.limit, co_name_of_poly(one), 1, max_n=48).of(2)


class TestUniformizer:
    def test_error_budget_identity(self):
        for N in range(0, 12):
            assert _pow2(N + 2) + _pow2(N + 1) + _pow2(N + 2) == _pow2(N)

    def test_uniform_index_valid_on_corpora(self, rng):
        for corpus in (deltashrink(), mixture()):
            for _ in range(5):
                p = rand_supported_poly(rng)
                f = supported_from_poly(p)
                lim = integrate_poly(p, corpus.limit)
                for N in (2, 6):
                    n0 = uniformize_vague(corpus.seq, corpus.limit, corpus.vague_oracle, f, N)
                    for n in range(n0, n0 + 8):
                        assert abs(integrate_poly(p, corpus.seq[n]) - lim) < _pow2(N)

    def test_works_with_scanning_oracle(self):
        c = deltashrink()
        oracle = scan_vague_oracle(c.seq, c.limit)
        f = supported_from_poly(HAT)
        n0 = uniformize_vague(c.seq, c.limit, oracle, f, 4)
        lim = integrate_poly(HAT, c.limit)
        for n in range(n0, n0 + 8):
            assert abs(integrate_poly(HAT, c.seq[n]) - lim) < _pow2(4)


class TestSpecker:
    def test_modulus_index_and_constancy(self):
        sp = specker_sequence(iter(range(100)))
        f = supported_from_poly(HAT)
        m = sp.vague_modulus(f)
        assert m.of(0) == 4  # ceil(5/2) + 1
        vals = {integrate_poly(HAT, sp.seq[n]) for n in range(4, 20)}
        assert vals == {Fraction(1, 4)}  # frozen exact value, identity enumeration

    def test_integrals_before_the_index_differ(self):
        sp = specker_sequence(iter(range(100)))
        assert integrate_poly(HAT, sp.seq[0]) != Fraction(1, 4)

    def test_duplicate_enumeration_rejected(self):
        sp = specker_sequence(iter([0, 1, 1]))
        sp.seq[1]
        with pytest.raises(DuplicateEnumeration):
            sp.seq[2]

    def test_total_mass_lower_strictly_increases(self):
        sp = specker_sequence(iter(range(100)))
        lower = sp.total_mass_lower()
        vals = [lower.bound(k) for k in range(30)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_limit_measure_is_lazy(self):
        sp = specker_sequence(iter(range(100)))
        mu = sp.limit_measure()
        from effmeas.errors import UnsupportedMeasureClass

        with pytest.raises(UnsupportedMeasureClass):
            mu.total_mass_real()
        f = supported_from_poly(HAT)
        from effmeas import integrate_named

        assert abs(integrate_named(f, mu, 8) - Fraction(1, 4)) <= _pow2(8)


class TestVagueToWeak:
    def test_complement_modulus(self):
        g1 = Modulus(lambda N: 2 * N)
        g2 = Modulus(lambda N: N + 3)
        assert complement_modulus(g1, g2, 4) == max(g1.of(5), g2.of(5)) == 10

    def test_tail_mass_bound_contract(self):
        c = mixture()
        a, n0 = tail_mass_bound(c.seq, c.tm, c.vague_oracle, 6)
        for n in range(n0, n0 + 10):
            total = c.seq[n].exact_total_mass()
            inside = c.seq[n].region_mass_open([(Fraction(-a), Fraction(a))])
            assert total - inside < _pow2(6)

    def test_polygonal_surrogate_contract(self):
        c = deltashrink()
        one = constant_func(Fraction(1))
        W, n1, psi = polygonal_surrogate(co_name_of_poly(one), 1, 5, c.seq, c.limit, c.tm, c.vague_oracle)
        assert psi.extension == "zero-outside"
        assert psi.support_components()[-1][1] <= W
        lim = integrate_poly(one, c.limit)
        for n in range(n1, n1 + 8):
            assert abs(integrate_poly(psi, c.seq[n]) - integrate_poly(one, c.seq[n])) < _pow2(5)

    def test_valid_modulus_produced(self):
        c = mixture()
        clamp = constant_func(Fraction(1))
        for N in (2, 5):
            idx = vague_to_weak(c.seq, c.limit, c.tm, c.vague_oracle, co_name_of_poly(clamp), 1, N)
            lim = integrate_poly(clamp, c.limit)
            for n in range(idx, idx + 8):
                assert abs(integrate_poly(clamp, c.seq[n]) - lim) < _pow2(N)

    def test_invalid_total_mass_modulus_reported(self):
        # masses alternate 0 and 1: any claimed modulus is refutable
        seq = MeasureSeq(
            lambda n: DiscreteMeasure(((Fraction(0), Fraction(n % 2 + 1)),))
        )
        bad_tm = TotalMassModulus.constant(0)
        with pytest.raises(ContractViolation):
            validate_total_mass_modulus(seq, bad_tm, [3], 4)

    def test_mass_escape_reported_as_divergence(self):
        dn = deltan()
        one = constant_func(Fraction(1))
        with pytest.raises(DivergenceDetected):
            vague_to_weak(dn.seq, dn.limit, dn.tm, dn.vague_oracle, co_name_of_poly(one), 1, 3)


class TestLimitReconstruction:
    def test_interval_masses(self):
        c = deltashrink()
        rec = limit_from_vague(c.seq, c.vague_oracle, CauchyReal.from_rational(1))
        for (a, b, expect) in ((-1, 1, 1), (0, 1, 0), (1, 2, 0)):
            val = rec.interval_mass_lower(Fraction(a), Fraction(b)).bound(12)
            assert abs(val - expect) <= _pow2(10)

    def test_open_mass_from_components(self):
        from effmeas import SigmaSet

        c = deltashrink()
        rec = limit_from_vague(c.seq, c.vague_oracle, CauchyReal.from_rational(1))
        U = SigmaSet.from_components([(Fraction(-2), Fraction(-1)), (Fraction(-1, 2), Fraction(1, 2))])
        assert abs(rec.open_mass(U).bound(12) - 1) <= _pow2(10)


class TestPortmanteau:
    def test_closed_limsup_pass_and_fail(self):
        c = deltashrink()
        C = pi_from_complement([(Fraction(1, 2), Fraction(1))])  # mu(C) = 0
        good = LimsupWitness(((Fraction(1, 4), 2),))
        assert portmanteau_check(c.seq, c.limit, "closed-limsup", C, good).passed
        bad = LimsupWitness(((Fraction(-1, 4), 2),))  # not in the right cut
        assert not portmanteau_check(c.seq, c.limit, "closed-limsup", C, bad).passed

    def test_open_liminf(self):
        from effmeas import SigmaSet

        c = deltashrink()
        U = SigmaSet.from_components([(Fraction(-1), Fraction(1))])  # mu(U) = 1
        wit = LiminfWitness(((Fraction(1, 2), 1),))
        assert portmanteau_check(c.seq, c.limit, "open-liminf", U, wit).passed

    def test_almost_decidable_mode(self):
        from effmeas import almost_decidable_ball

        c = deltashrink()
        _, pair = almost_decidable_ball(c.limit, Fraction(0), Fraction(1))
        mod = c.ad_modulus(pair)
        rep = portmanteau_check(
            c.seq, c.limit, "almost-decidable", pair, mod, Ns=(1, 3, 5)
        )
        assert rep.passed

    def test_unknown_mode_rejected(self):
        c = deltashrink()
        with pytest.raises(ValueError):
            portmanteau_check(c.seq, c.limit, "bogus", None, None)
