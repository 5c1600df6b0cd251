from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernlo.exactdist import bin_diff_pmf
from bernlo.oracle import point_prob
from bernlo.puredecomp import (
    ConvexDecomposition,
    PureProfile,
    SubsetProfile,
    bilinear_B,
    check_properties,
    decompose,
    max_over_pure,
    profile_from_multiset,
    pure_value,
)

multisets = st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=6)


class TestCheckProperties:
    def test_multiset_profile_passes(self):
        assert check_properties(profile_from_multiset([1, 2, 3])).all_pass()

    def test_constructed_violation(self):
        bad = SubsetProfile(i=1, entries={(1, F(1, 2)): F(1), (0, F(1)): F(1)})
        report = check_properties(bad)
        assert report.nonnegative and report.rows_normalized
        assert not report.supports_ordered

    def test_pure_profile_passes(self):
        pure = PureProfile(points=(F(-1), F(0), F(5, 2)))
        assert check_properties(pure.as_profile()).all_pass()

    def test_rejects_float_locations(self):
        with pytest.raises(TypeError):
            SubsetProfile(i=0, entries={(0, 0.5): F(1)})


class TestDecompose:
    def test_pure_input_single_term(self):
        pure = PureProfile(points=(F(0), F(1), F(3)))
        decomp = decompose(pure.as_profile())
        assert len(decomp.terms) == 1
        assert decomp.terms[0][0] == 1
        assert decomp.terms[0][1] == pure

    def test_two_chain_mixture(self):
        gamma = SubsetProfile(
            i=1,
            entries={(0, F(0)): F(1), (1, F(1)): F(1, 2), (1, F(2)): F(1, 2)},
        )
        decomp = decompose(gamma)
        assert [(w, p.points) for w, p in decomp.terms] == [
            (F(1, 2), (F(0), F(1))),
            (F(1, 2), (F(0), F(2))),
        ]

    def test_rejects_invalid_input(self):
        bad = SubsetProfile(i=1, entries={(1, F(1, 2)): F(1), (0, F(1)): F(1)})
        with pytest.raises(ValueError):
            decompose(bad)

    @given(values=multisets)
    @settings(max_examples=80, deadline=None)
    def test_round_trip_exact(self, values):
        gamma = profile_from_multiset(values)
        decomp = decompose(gamma)
        assert decomp.total_weight() == 1
        assert all(w > 0 for w, _ in decomp.terms)
        rec = decomp.recombine()
        assert rec.entries == {k: v for k, v in gamma.entries.items() if v != 0}
        assert len(decomp.terms) <= gamma.support_size() - gamma.i


class TestBilinear:
    def test_equals_enumeration(self):
        pos, neg = [1, 2], [1, 3]
        alpha = profile_from_multiset(pos)
        beta = profile_from_multiset(neg)
        coeffs = pos + [-v for v in neg]
        for p in (F(1, 4), F(1, 3)):
            for x in range(-4, 4):
                assert bilinear_B(alpha, beta, p, x) == point_prob(coeffs, p, x)

    def test_diagonal_pure_match(self):
        a = PureProfile(points=(F(0), F(1), F(2)))
        b = PureProfile(points=(F(0), F(1)))
        got = bilinear_B(a.as_profile(), b.as_profile(), F(1, 3), 0)
        assert got == pure_value(a, b, F(1, 3), 0) == bin_diff_pmf(2, 1, F(1, 3), 0)

    def test_bilinearity_in_first_argument(self):
        a1 = PureProfile(points=(F(0), F(1))).as_profile()
        a2 = PureProfile(points=(F(0), F(2))).as_profile()
        mix = SubsetProfile(
            i=1,
            entries={
                (0, F(0)): F(1),
                (1, F(1)): F(1, 2),
                (1, F(2)): F(1, 2),
            },
        )
        beta = profile_from_multiset([1, 2])
        for x in (-1, 0, 1, 2):
            lhs = bilinear_B(mix, beta, F(1, 3), x)
            rhs = (
                bilinear_B(a1, beta, F(1, 3), x) + bilinear_B(a2, beta, F(1, 3), x)
            ) / 2
            assert lhs == rhs

    def test_decomposition_expands_bilinear_form(self):
        alpha = profile_from_multiset([1, 2, 3])
        beta = profile_from_multiset([2, 3])
        da, db = decompose(alpha), decompose(beta)
        p = F(2, 5)
        for x in (-2, 0, 1, 3):
            direct = bilinear_B(alpha, beta, p, x)
            expanded = sum(
                (wa * wb * pure_value(pa, pb, p, x) for wa, pa in da.terms for wb, pb in db.terms),
                F(0),
            )
            assert direct == expanded


class TestPureValue:
    def test_no_match_is_zero(self):
        a = PureProfile(points=(F(0), F(10)))
        b = PureProfile(points=(F(1), F(2)))
        assert pure_value(a, b, F(1, 3), 0) == 0

    def test_offset_full_match(self):
        # r_{j+d} = s_j + x for every j realizes the difference pmf at d
        p = F(1, 3)
        ell, m, d, x = 3, 2, 1, 5
        s_pts = tuple(F(v) for v in range(m + 1))
        # r_k = k + x - d makes r_k = s_j + x exactly when k - j = d
        r_pts = tuple(F(k + x - d) for k in range(ell + 1))
        a, b = PureProfile(points=r_pts), PureProfile(points=s_pts)
        assert pure_value(a, b, p, x) == bin_diff_pmf(ell, m, p, d)


class TestMaxOverPure:
    def test_one_one(self):
        val, cfg = max_over_pure(1, 1, F(1, 3), 0, 4)
        assert val == bin_diff_pmf(1, 1, F(1, 3), 0) == F(5, 9)

    def test_two_one(self):
        val, _ = max_over_pure(2, 1, F(1, 2), 0, 5)
        assert val == max(bin_diff_pmf(2, 1, F(1, 2), d) for d in range(-1, 3))

    def test_empty_profiles(self):
        val, cfg = max_over_pure(0, 0, F(1, 3), 0, 3)
        assert val == 1

    def test_guard(self):
        with pytest.raises(ValueError):
            max_over_pure(5, 5, F(1, 2), 0, 4)

    def test_chain_bound_holds_through_decomposition(self):
        # point prob <= best pure pair value <= difference-pmf maximum
        pos, neg = [1, 2, 4], [2, 3]
        alpha = profile_from_multiset(pos)
        beta = profile_from_multiset(neg)
        da, db = decompose(alpha), decompose(beta)
        p = F(1, 3)
        for x in (-2, 0, 1, 3):
            direct = bilinear_B(alpha, beta, p, x)
            best_pure = max(
                pure_value(pa, pb, p, x) for _, pa in da.terms for _, pb in db.terms
            )
            diff_max = max(bin_diff_pmf(3, 2, p, d) for d in range(-2, 4))
            assert direct <= best_pure <= diff_max


class TestSerialization:
    def test_json_round_trip(self):
        gamma = profile_from_multiset([1, 2, 2])
        again = SubsetProfile.from_json(gamma.to_json())
        assert again == gamma
