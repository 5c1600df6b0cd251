import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernlo.exactdist import build_dist, concentration_bound
from bernlo.oracle import (
    alpha_from_multiset,
    atom_dist,
    concentration,
    point_prob,
    verify_theorem1,
)
from bernlo.puredecomp import check_properties, profile_from_multiset


class TestPointProb:
    def test_two_fair_coins(self):
        assert point_prob([1, 1], F(1, 2), 1) == F(1, 2)

    def test_cancelling_pair(self):
        p = F(1, 3)
        assert point_prob([1, -1], p, 0) == p**2 + (1 - p) ** 2 == F(5, 9)

    def test_zero_sum_subsets(self):
        assert point_prob([1, 2, -3], F(1, 2), 0) == F(1, 4)

    def test_guards(self):
        with pytest.raises(ValueError):
            point_prob([1, 0, 2], F(1, 2), 0)
        with pytest.raises(ValueError):
            point_prob([1] * 25, F(1, 2), 0)
        with pytest.raises(ValueError):
            point_prob([], F(1, 2), 0)


class TestConcentration:
    def test_binomial_mode(self):
        assert concentration([1, 1, 1], F(1, 2)) == (1, F(3, 8))

    def test_cancelling_pair(self):
        assert concentration([1, -1], F(1, 3)) == (0, F(5, 9))

    def test_sign_vectors_match_exact_dist(self):
        p = F(1, 3)
        for n in range(1, 8):
            for ell in range(n + 1):
                coeffs = [1] * ell + [-1] * (n - ell)
                x, prob = concentration(coeffs, p)
                d = build_dist(ell, n - ell, p)
                assert prob == max(d.pmf.values())
                assert d.prob(x) == prob

    @given(
        coeffs=st.lists(
            st.integers(min_value=-5, max_value=5).filter(lambda v: v != 0),
            min_size=1,
            max_size=9,
        ),
        num=st.integers(min_value=1, max_value=9),
    )
    @settings(max_examples=60, deadline=None)
    def test_masses_sum_to_one_and_scaling_invariance(self, coeffs, num):
        p = F(num, 10)
        dist = atom_dist(coeffs, p)
        assert sum(dist.atoms.values()) == 1
        _, prob = dist.heaviest()
        for c in (2, -3, F(1, 2)):
            _, scaled = concentration([c * a for a in coeffs], p)
            assert scaled == prob


class TestFloatBackend:
    def test_matches_rational(self):
        for coeffs in ([1.0, -1.0], [1.5, 2.5, -1.0], [0.3, 0.7, -1.0, 2.0]):
            dist = atom_dist(coeffs, 1 / 3)
            assert math.isclose(sum(dist.atoms.values()), 1.0, abs_tol=1e-12)
        got = point_prob([1.0, -1.0], 1 / 3, 0.0)
        assert math.isclose(got, 5 / 9, rel_tol=1e-12)

    def test_well_separated_atoms_not_merged(self):
        dist = atom_dist([1.0, 2.0, 4.0], 0.5)
        assert len(dist.atoms) == 8

    def test_heaviest_agrees_with_rational(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            ints = rng.integers(1, 6, size=6) * rng.choice([-1, 1], size=6)
            xf, pf = concentration([float(v) for v in ints], 0.25)
            xr, pr = concentration([int(v) for v in ints], F(1, 4))
            assert math.isclose(pf, float(pr), rel_tol=1e-10)
            assert math.isclose(xf, float(xr), abs_tol=1e-9)


class TestAlphaFromMultiset:
    def test_examples(self):
        assert alpha_from_multiset([1, 1, 1], 2, 2) == 1
        assert alpha_from_multiset([1, 2], 1, 1) == F(1, 2)
        assert alpha_from_multiset([1, 2, 3], 2, 4) == F(1, 3)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            alpha_from_multiset([1, 2], 3, 1)

    @given(
        values=st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=6)
    )
    @settings(max_examples=40, deadline=None)
    def test_profiles_satisfy_validity_properties(self, values):
        profile = profile_from_multiset(values)
        assert check_properties(profile).all_pass()


class TestVerify:
    def test_classical_grid_bound(self):
        rep = verify_theorem1(6, F(1, 2), "grid")
        assert rep.passed
        assert rep.bound == str(F(20, 64))

    def test_single_coefficient(self):
        for strategy in ("grid", "random", "hill-climb"):
            rep = verify_theorem1(1, F(1, 3), strategy, count=20, steps=3, seed=0)
            assert rep.passed
            assert rep.bound == str(F(2, 3))

    def test_random_strategy_reports_max(self):
        rep = verify_theorem1(7, F(1, 3), "random", count=300, seed=11)
        assert rep.passed
        assert float(rep.max_observed) <= float(F(rep.bound)) * (1 + 1e-9)

    def test_hill_climb_no_improving_perturbation(self):
        rep = verify_theorem1(6, F(1, 4), "hill-climb", steps=10, seed=3)
        assert rep.passed

    def test_grid_bound_exact_small(self):
        # exhaustive small grid across several p values
        for n, p in product([2, 3, 4], [F(1, 4), F(1, 3), F(2, 3)]):
            rep = verify_theorem1(n, p, "grid")
            assert rep.passed, (n, p)

    def test_guards(self):
        with pytest.raises(ValueError):
            verify_theorem1(20, F(1, 2), "grid")
        with pytest.raises(ValueError):
            verify_theorem1(5, F(1, 2), "annealing")
