import math
from fractions import Fraction as F

import mpmath as mp
import pytest

from bernlo.lstar import (
    LStarPrediction,
    classify_p,
    exact_lstar,
    float_lstar,
    periodicity_probe,
    predict,
    scan,
    scan_to_csv,
)


class TestClassify:
    def test_small_p_wins_over_parity(self):
        # (1 - 1/20)^9 > 1/2, so the small-p row applies despite odd n
        assert classify_p(9, F(1, 20)) == "small-p"

    def test_even_n(self):
        assert classify_p(10, F(1, 3)) == "even-n"

    def test_half_degenerate(self):
        assert classify_p(9, F(1, 2)) == "degenerate-half"

    def test_denominator_parity(self):
        assert classify_p(9, F(1, 3)) == "odd-denominator"
        assert classify_p(9, F(1, 4)) == "even-denominator"

    def test_irrational_must_be_declared(self):
        assert classify_p(9, "0.3183098861", irrational=True) == "irrational-surrogate"
        with pytest.raises(ValueError):
            classify_p(9, "not-a-number")


class TestPredict:
    def test_small_p(self):
        pred = predict(9, F(1, 20))
        assert pred == LStarPrediction("exact-value", 5, 0, "small-p")

    def test_even_n(self):
        pred = predict(10, F(1, 3))
        assert (pred.kind, pred.value, pred.x_value) == ("exact-value", 5, 0)

    def test_odd_denominator(self):
        pred = predict(101, F(2, 5))
        assert (pred.kind, pred.value, pred.x_value) == ("exact-value", 53, 2)

    def test_even_denominator_ratio(self):
        pred = predict(101, F(1, 4))
        # 1/2 + 3 / (5 * |1 - 1/2| * 4) = 1/2 + 3/10
        assert (pred.kind, pred.value) == ("asymptotic-ratio", F(4, 5))

    def test_irrational_ratio(self):
        pred = predict(101, "0.3183098861", irrational=True)
        assert (pred.kind, pred.value) == ("asymptotic-ratio", F(1, 2))

    def test_degenerate(self):
        assert predict(9, F(1, 2)).kind == "degenerate"

    def test_guard(self):
        with pytest.raises(ValueError):
            predict(0, F(1, 3))


class TestExact:
    def test_known_small_case(self):
        res = exact_lstar(5, F(1, 3))
        assert (res.ell_star, res.x_star) == (4, 1)
        assert res.prob == F(88, 243)

    def test_odd_denominator_settles(self):
        # p = 1/3: from n = 9 on, ell* = (n+3)/2 with x* = 1
        for n in range(9, 42, 2):
            res = exact_lstar(n, F(1, 3))
            assert (res.ell_star, res.x_star) == ((n + 3) // 2, 1), n

    def test_even_n_balanced(self):
        for n in (6, 12, 20):
            res = exact_lstar(n, F(1, 4))
            assert (res.ell_star, res.x_star) == (n // 2, 0)


class TestFloatBackend:
    @pytest.mark.parametrize(
        "n,p",
        [(7, F(1, 3)), (15, F(1, 4)), (24, F(2, 5)), (31, F(1, 6))],
    )
    def test_agrees_with_exact(self, n, p):
        fres = float_lstar(n, p)
        eres = exact_lstar(n, p)
        assert (fres.ell_star, fres.x_star) == (eres.ell_star, eres.x_star)
        with mp.workprec(128):
            exact_prob = mp.mpf(eres.prob.numerator) / eres.prob.denominator
            assert abs(fres.prob - exact_prob) < exact_prob * mp.mpf("1e-30")

    def test_tie_mirroring_at_half(self):
        fres = float_lstar(4, "0.5")
        assert (fres.ell_star, fres.x_star) == (2, 0)
        assert (1, -1) in fres.ties and (3, 1) in fres.ties

    def test_even_denominator_ratio_neighborhood(self):
        fres = float_lstar(101, F(1, 4))
        assert abs(fres.ell_star / 101 - 0.8) < 0.05

    def test_accepts_decimal_strings(self):
        fres = float_lstar(9, "0.333333333333333333333333333333")
        assert fres.ell_star == 6

    def test_guards(self):
        with pytest.raises(ValueError):
            float_lstar(0, F(1, 3))
        with pytest.raises(ValueError):
            float_lstar(5, "1.5")


class TestScan:
    def test_zero_deviation_once_settled(self):
        rows = scan(F(1, 3), range(9, 30, 2))
        for row in rows:
            assert row.prediction.kind == "exact-value"
            assert row.deviation == 0

    def test_ratio_deviation_shrinks(self):
        rows = scan(F(1, 4), [21, 101], backend="float")
        devs = [abs(row.deviation) for row in rows]
        assert devs[1] < devs[0]
        assert all(isinstance(row.deviation, F) for row in rows)

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            scan(F(1, 3), [5], backend="gpu")

    def test_csv_shape(self):
        rows = scan(F(1, 3), [5, 7, 9])
        text = scan_to_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0].startswith("n,p,ell_star,x_star,prob,prediction")
        assert len(lines) == 4
        # 30-digit decimal rendering of 88/243
        assert lines[1].split(",")[4].startswith("0.36213991769")


class TestPeriodicityProbe:
    def test_guards(self):
        with pytest.raises(ValueError):
            periodicity_probe(F(1, 2), [9, 11])
        with pytest.raises(ValueError):
            periodicity_probe(F(1, 3), [9, 11])
        with pytest.raises(ValueError):
            periodicity_probe(F(1, 4), [9, 10, 11])

    def test_residues_bounded_quarter(self):
        ns = list(range(9, 80, 2))
        rep = periodicity_probe(F(1, 4), ns, backend="float")
        assert rep.trend == F(4, 5)
        assert len(rep.residues) == len(ns)
        assert rep.max_abs_residue <= 5
        assert rep.candidate_period is None or rep.candidate_period % 2 == 0

    def test_exact_backend_agrees(self):
        ns = list(range(9, 32, 2))
        ref = periodicity_probe(F(1, 4), ns, backend="float")
        rep = periodicity_probe(F(1, 4), ns, backend="exact")
        assert rep.residues == ref.residues
