import pytest

from treelevel.bruteforce import brute_force_strata
from treelevel.combis import bell
from treelevel.errors import InvalidGraph, TooLarge
from treelevel.graphs import Color, canonical_key, colored_tree
from treelevel.strata import (
    FM,
    M0,
    MULT,
    SCALED,
    boundary_divisors,
    closure_poset,
    enumerate_strata,
    mult_divisor_count,
    stratum_codimension,
    stratum_dimension,
)

ALL_SMALL_SPACES = ([M0(k) for k in (3, 4, 5)] + [FM(k) for k in range(5)]
                    + [MULT(k) for k in range(1, 5)]
                    + [SCALED(k) for k in range(5)])


class TestSpaceKind:
    def test_bounds(self):
        with pytest.raises(InvalidGraph):
            M0(2)
        with pytest.raises(InvalidGraph):
            MULT(0)
        assert FM(0).ambient_dimension == 0
        assert SCALED(0).ambient_dimension == 1

    def test_guard(self):
        with pytest.raises(TooLarge):
            enumerate_strata(MULT(8))

    def test_guard_override(self, monkeypatch):
        monkeypatch.setenv("MODULI_MAX_N", "3")
        with pytest.raises(TooLarge):
            enumerate_strata(MULT(4))
        monkeypatch.setenv("MODULI_MAX_N", "8")
        MULT(8).guard()


class TestEnumeration:
    def test_known_counts(self):
        assert len(enumerate_strata(MULT(1))) == 1
        assert len(enumerate_strata(MULT(2))) == 3
        assert len(enumerate_strata(M0(4))) == 4
        assert len(enumerate_strata(M0(5))) == 26
        assert len(enumerate_strata(SCALED(0))) == 2

    def test_deterministic_order(self):
        a = [canonical_key(g) for g in enumerate_strata(MULT(3))]
        b = [canonical_key(g) for g in enumerate_strata(MULT(3))]
        assert a == b == sorted(a)

    @pytest.mark.parametrize("space", ALL_SMALL_SPACES,
                             ids=[str(s) for s in ALL_SMALL_SPACES])
    def test_matches_brute_force(self, space):
        main = {canonical_key(g) for g in enumerate_strata(space)}
        assert main == set(brute_force_strata(space))


class TestDimensions:
    def test_mult_open_dimension(self):
        g = colored_tree({0: Color.COLORED}, [], {0: 0, 1: 0, 2: 0})
        assert stratum_dimension(g, MULT(2)) == 1

    def test_sep_divisor_dimension_zero(self):
        g = colored_tree(
            {0: Color.INFINITY, 1: Color.COLORED, 2: Color.COLORED},
            [(0, 1), (0, 2)], {0: 0, 1: 1, 2: 2})
        assert stratum_dimension(g, MULT(2)) == 0
        assert stratum_codimension(g, MULT(2)) == 1

    def test_scaled_open_dimension(self):
        for n in range(4):
            open_strata = [g for g in enumerate_strata(SCALED(n))
                           if stratum_codimension(g, SCALED(n)) == 0]
            assert len(open_strata) == 1
            assert stratum_dimension(open_strata[0], SCALED(n)) == n + 1

    @pytest.mark.parametrize("space", ALL_SMALL_SPACES,
                             ids=[str(s) for s in ALL_SMALL_SPACES])
    def test_dim_plus_codim(self, space):
        for g in enumerate_strata(space):
            assert (stratum_dimension(g, space)
                    + stratum_codimension(g, space)) == space.ambient_dimension


class TestDivisors:
    def test_mult2(self):
        names = sorted(d.name for d in boundary_divisors(MULT(2)))
        assert names == sorted(["D_{1,2}", "D_[{1}|{2}]"])

    def test_mult3_counts(self):
        divs = boundary_divisors(MULT(3))
        subsets = [d for d in divs if d.shape[0] == "subset"]
        partitions = [d for d in divs if d.shape[0] == "partition"]
        assert len(subsets) == 4 and len(partitions) == 4

    @pytest.mark.parametrize("n", range(1, 7))
    def test_mult_count_formula(self, n):
        assert len(boundary_divisors(MULT(n))) == mult_divisor_count(n)
        assert mult_divisor_count(n) == 2**n - n - 1 + bell(n) - 1

    def test_scaled_has_rho_and_r1(self):
        divs = boundary_divisors(SCALED(1))
        kinds = sorted(d.shape[0] for d in divs)
        assert kinds == ["partition", "rho"]
        part = [d for d in divs if d.shape[0] == "partition"][0]
        assert part.dimension() == 1

    @pytest.mark.parametrize("space", [M0(5), FM(4), MULT(4), SCALED(4)],
                             ids=str)
    def test_divisors_have_codimension_one(self, space):
        for d in boundary_divisors(space):
            assert d.codimension() == 1
            assert d.generic_type is not None

    def test_m0_splittings(self):
        # stable splittings of 5 marked points: choose the 2-element side
        assert len(boundary_divisors(M0(5))) == 10


class TestClosurePoset:
    def test_mult2_shape(self):
        p = closure_poset(MULT(2))
        opens = [k for k, c in p.codim.items() if c == 0]
        assert len(opens) == 1
        for k, c in p.codim.items():
            if c == 1:
                assert p.covers[k] == {opens[0]}

    def test_m04_three_points_cover_open(self):
        p = closure_poset(M0(4))
        assert sorted(p.codim.values()) == [0, 1, 1, 1]

    @pytest.mark.parametrize("space", [M0(5), FM(4), MULT(4), SCALED(4)],
                             ids=str)
    def test_graded_chains(self, space):
        p = closure_poset(space)
        chains = p.maximal_chain_lengths()
        for k in p.strata:
            assert chains[k] == p.codim[k]
        for k, targets in p.covers.items():
            for t in targets:
                assert p.codim[k] - p.codim[t] == 1

    @pytest.mark.parametrize("space", [M0(5), FM(3), MULT(3), SCALED(3)],
                             ids=str)
    def test_codim_one_strata_are_the_divisors(self, space):
        p = closure_poset(space)
        codim_one = {k for k, c in p.codim.items() if c == 1}
        divisor_keys = {canonical_key(d.generic_type)
                        for d in boundary_divisors(space)
                        if d.shape[0] != "rho"}
        assert codim_one == divisor_keys
        open_keys = {k for k, c in p.codim.items() if c == 0}
        for k in codim_one:
            assert p.covers[k] == open_keys
