import math
from fractions import Fraction

import pytest

from treelevel.cohft import (
    CohFTAlgebra,
    Morphism,
    Trace,
    algebra_from_terms,
    bilinear_form,
    check_associativity,
    check_isometry,
    check_star_morphism,
    compose_trace,
    derivative,
    generic_point,
    identity_morphism,
    morphism_from_terms,
    potential,
    pp_family_from,
    push_forward,
    random_even_algebra,
    random_flat_morphism,
    random_trace,
    small_quantum_projective,
    solve_qde,
    star_product,
    trace_from_terms,
)
from treelevel.errors import (
    CurvedMorphismUnsupported,
    DegenerateQDE,
    MissingArity,
)
from treelevel.series import SeriesRing


def ring1(t_cap=5):
    return SeriesRing(tvars=["t0"], t_cap=t_cap)


class TestStarProduct:
    def test_mu2_only_is_v_independent(self):
        r = SeriesRing(tvars=["t0", "t1"], t_cap=4)
        alg = algebra_from_terms(r, ("1", "x"),
                                 [((0, 0), 0, 1), ((0, 1), 1, 1),
                                  ((1, 1), 0, 1)])
        at_zero = star_product(alg, [r.zero(), r.zero()], 1, 1)
        at_generic = star_product(alg, generic_point(r, 2), 1, 1)
        assert at_zero == at_generic

    def test_small_quantum_p1(self):
        alg = small_quantum_projective(2)
        r = alg.ring
        out = star_product(alg, [r.zero(), r.zero()], 1, 1)
        assert out[0] == r.q_power(1) and out[1].is_zero()

    def test_mu3_linear_in_v(self):
        r = SeriesRing(tvars=["t0"], t_cap=3)
        alg = algebra_from_terms(r, ("e",),
                                 [((0, 0), 0, 1), ((0, 0, 0), 0, 6)])
        # e *_v e = e + 6 mu^3(e,e,v)/1! = 1 + 6v as coefficient
        out = star_product(alg, generic_point(r, 1), 0, 0)
        assert out[0] == r.one() + 6 * r.t(0)

    def test_missing_arity(self):
        r = ring1()
        alg = CohFTAlgebra(r, ("e",), {3: {(0, 0, 0): {0: r.one()}}})
        with pytest.raises(MissingArity):
            star_product(alg, [r.zero()], 0, 0)


class TestAssociativity:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_projective(self, k):
        ok, _ = check_associativity(small_quantum_projective(k))
        assert ok

    def test_commutative_associative_mu2(self):
        r = SeriesRing(tvars=["t0", "t1"], t_cap=3)
        alg = algebra_from_terms(r, ("1", "x"),
                                 [((0, 0), 0, 1), ((0, 1), 1, 1)])
        ok, _ = check_associativity(alg)
        assert ok

    def test_defect_reported(self):
        r = SeriesRing(tvars=["t0", "t1"], t_cap=3)
        bad = algebra_from_terms(r, ("1", "x"),
                                 [((0, 0), 0, 1), ((0, 1), 1, 2),
                                  ((1, 1), 1, 1)])
        ok, wit = check_associativity(bad)
        assert not ok
        assert wit["lhs"] != wit["rhs"]


class TestMorphism:
    def test_identity(self):
        r = ring1()
        phi = identity_morphism(r, 1)
        v = generic_point(r, 1)
        assert push_forward(phi, v) == v
        assert derivative(phi, v, 0) == (r.one(),)

    def test_curved_constant(self):
        r = ring1()
        phi = Morphism(r, 1, 1, {}, (r.scalar(7),))
        assert push_forward(phi, generic_point(r, 1)) == (r.scalar(7),)
        assert not phi.flat

    def test_exponential_series(self):
        # phi^n(1,...,1) = 1 for all n gives phi(v) = sum v^n / n!
        r = ring1(t_cap=5)
        phi = morphism_from_terms(
            r, 1, 1, [(tuple([0] * n), 0, 1) for n in range(1, 6)])
        out = push_forward(phi, generic_point(r, 1))[0]
        for n in range(1, 6):
            assert out.coefficient(texp=(n,)) == Fraction(1, math.factorial(n))

    def test_star_morphism_identity_random(self):
        for seed in range(5):
            alg = random_even_algebra(seed, dim=2, max_arity=3)
            ok, _ = check_star_morphism(
                identity_morphism(alg.ring, 2), alg, alg)
            assert ok

    def test_shift_passes_double_fails(self):
        r = ring1()
        one_dim = algebra_from_terms(r, ("e",), [((0, 0), 0, 1)])
        shift = morphism_from_terms(r, 1, 1, [((0,), 0, 1)],
                                    phi0=[Fraction(1, 3)])
        ok, _ = check_star_morphism(shift, one_dim, one_dim)
        assert ok
        double = morphism_from_terms(r, 1, 1, [((0,), 0, 2)])
        ok, wit = check_star_morphism(double, one_dim, one_dim)
        assert not ok and wit is not None


class TestTrace:
    def test_potential(self):
        r = ring1()
        tr = trace_from_terms(r, 1, [((0, 0), 1)])
        assert potential(tr, generic_point(r, 1)) == r.t(0) ** 2 / 2

    def test_compose_identity(self):
        r = ring1()
        tr = trace_from_terms(r, 1, [((0, 0), 1), ((0, 0, 0), 2)])
        ct = compose_trace(tr, identity_morphism(r, 1), generic_point(r, 1))
        assert ct.substitution == potential(tr, generic_point(r, 1))
        assert ct.agree

    def test_compose_hand_example(self):
        # tau potential w^2/2 composed with phi(v) = v + v^2/2
        r = ring1(t_cap=4)
        tr = trace_from_terms(r, 1, [((0, 0), 1)])
        phi = morphism_from_terms(r, 1, 1, [((0,), 0, 1), ((0, 0), 0, 1)])
        ct = compose_trace(tr, phi, generic_point(r, 1))
        t = r.t(0)
        expected = t ** 2 / 2 + t ** 3 / 2 + t ** 4 / 8
        assert ct.substitution == expected
        assert ct.partition_sum == expected

    def test_compose_constant_only(self):
        r = ring1()
        tr = trace_from_terms(r, 1, [((), 5)])
        phi = morphism_from_terms(r, 1, 1, [((0,), 0, 1)])
        ct = compose_trace(tr, phi, generic_point(r, 1))
        assert ct.substitution == r.scalar(5)
        assert ct.agree

    def test_compose_curved(self):
        r = ring1(t_cap=3)
        tr = trace_from_terms(r, 1, [((0, 0), 1)])
        phi = morphism_from_terms(r, 1, 1, [((0,), 0, 1)],
                                  phi0=[Fraction(1, 2)])
        ct = compose_trace(tr, phi, generic_point(r, 1))
        t = r.t(0)
        assert ct.substitution == (t + r.scalar(Fraction(1, 2))) ** 2 / 2
        assert ct.agree

    @pytest.mark.parametrize("seed", range(8))
    def test_exponential_formula_random(self, seed):
        r = SeriesRing(tvars=["t0", "t1"], t_cap=6)
        phi = random_flat_morphism(seed, r, 2, 2, max_arity=4)
        tau = random_trace(seed + 50, r, 2, max_arity=5)
        assert compose_trace(tau, phi, generic_point(r, 2)).agree


class TestIsometry:
    def _setup(self):
        r = ring1(t_cap=4)
        pp = [((0, 0), tuple([0] * n), 1) for n in range(5)]
        tau_w = trace_from_terms(r, 1, [], pp_terms=pp)
        phi = morphism_from_terms(r, 1, 1, [((0,), 0, 1), ((0, 0), 0, 2)])
        return r, tau_w, phi

    def test_identity_isometry(self):
        r = ring1(t_cap=4)
        pp = [((0, 0), tuple([0] * n), 1) for n in range(4)]
        tau = trace_from_terms(r, 1, [], pp_terms=pp)
        ok, _ = check_isometry(tau, tau, identity_morphism(r, 1))
        assert ok

    def test_generated_family(self):
        r, tau_w, phi = self._setup()
        tau_v = pp_family_from(tau_w, phi, bulk_max=4)
        ok, _ = check_isometry(tau_v, tau_w, phi)
        assert ok

    def test_perturbation_caught(self):
        r, tau_w, phi = self._setup()
        tau_v = pp_family_from(tau_w, phi, bulk_max=4)
        broken = {n: dict(t) for n, t in tau_v.tau_pp.items()}
        key = sorted(broken[1])[0]
        broken[1][key] = broken[1][key] + 1
        ok, wit = check_isometry(Trace(r, 1, {}, broken), tau_w, phi)
        assert not ok and wit is not None

    def test_curved_unsupported(self):
        r, tau_w, _ = self._setup()
        curved = morphism_from_terms(r, 1, 1, [((0,), 0, 1)], phi0=[1])
        with pytest.raises(CurvedMorphismUnsupported):
            check_isometry(tau_w, tau_w, curved)
        with pytest.raises(CurvedMorphismUnsupported):
            pp_family_from(tau_w, curved, 2)

    def test_bilinear_form_values(self):
        r = ring1(t_cap=3)
        pp = [((0, 0), tuple([0] * n), 1) for n in range(4)]
        tau = trace_from_terms(r, 1, [], pp_terms=pp)
        g = bilinear_form(tau, generic_point(r, 1), 0, 0)
        # sum_n v^n / n! through the cap
        t = r.t(0)
        assert g == r.one() + t + t ** 2 / 2 + t ** 3 / 6


class TestQde:
    def test_p1_first_order(self):
        sol = solve_qde(small_quantum_projective(2), xi=1, q_cap=3)
        assert sol.residual_is_zero()
        s = sol.sigma
        assert s[0][0].coefficient(q=1, h=2) == -1
        assert s[0][1].coefficient(q=1, h=1) == 1
        assert s[1][0].coefficient(q=1, h=3) == -2
        assert s[1][1].coefficient(q=1, h=2) == 1

    def test_p1_second_order_frozen(self):
        # engine value cross-checked by hand: S_2 = X/(2h) + ad(X)/(4h^2)
        # + ad^2(X)/(8h^3) with X = A_1 S_1
        sol = solve_qde(small_quantum_projective(2), xi=1, q_cap=2)
        s = sol.sigma
        assert s[0][0].coefficient(q=2, h=4) == Fraction(-5, 4)
        assert s[0][1].coefficient(q=2, h=3) == Fraction(1, 2)
        assert s[1][0].coefficient(q=2, h=5) == Fraction(-3, 4)
        assert s[1][1].coefficient(q=2, h=4) == Fraction(1, 4)

    def test_classical_limit(self):
        sol = solve_qde(small_quantum_projective(3), xi=1, q_cap=0)
        for i in range(3):
            for j in range(3):
                expected = sol.ring.one() if i == j else sol.ring.zero()
                assert sol.sigma[i][j] == expected

    @pytest.mark.parametrize("k", [2, 3])
    def test_residual_zero(self, k):
        sol = solve_qde(small_quantum_projective(k), xi=1, q_cap=3)
        assert sol.residual_is_zero()

    def test_degenerate_rejected(self):
        # a q^0 quantum term: xi * xi = 1 makes the classical part
        # non-nilpotent
        r = SeriesRing(tvars=["t0", "t1"], t_cap=2, q_cap=2)
        alg = algebra_from_terms(r, ("1", "x"),
                                 [((0, 0), 0, 1), ((0, 1), 1, 1),
                                  ((1, 1), 0, 1)])
        with pytest.raises(DegenerateQDE):
            solve_qde(alg, xi=1, q_cap=2)

    def test_fractional_novikov(self):
        # teardrop-flavoured scalars: q exponents in (1/2)Z
        r = SeriesRing(tvars=["t0", "t1"], t_cap=2, q_denominator=2, q_cap=2)
        alg = algebra_from_terms(
            r, ("1", "x"),
            [((0, 0), 0, 1), ((0, 1), 1, 1),
             ((1, 1), 0, r.q_power(Fraction(1, 2)))])
        sol = solve_qde(alg, xi=1, q_cap=1)
        assert sol.residual_is_zero()
        assert sol.sigma[0][0].coefficient(q=Fraction(1, 2), h=2) != 0
