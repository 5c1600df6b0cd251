"""Optimal split prediction, exact/float computation, and scan harness.

The optimal number of +1 coefficients ell* follows a case table in the
large-n limit:

  n even, any p                -> ell* = n/2 (exact, x* = 0)
  p <= 1 - (1/2)^(1/n)         -> ell* = ceil(n/2) (exact, x* = 0)
  n odd, p = r/s with s odd    -> ell* = (n+s)/2 eventually (x* = r)
  n odd, p = r/s with s even   -> ell*/n -> 1/2 + 3/(5|1-2p|s)
  n odd, p irrational          -> ell*/n -> 1/2
  p = 1/2                      -> every split ties (degenerate)

`predict` returns the applicable row; `exact_lstar` computes ell*
either exactly (rational p) or via the high-precision float backend;
`scan` reconciles the two over a range of n, and `periodicity_probe`
explores whether ell* minus its linear trend is eventually periodic
for even-denominator p (an open conjecture; the probe only reports).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np
from numpy import logaddexp

from bernlo.exactdist import LStarResult, as_fraction, concentration_bound
from bernlo.fourier import precision_bits, to_mpf

__all__ = [
    "LStarPrediction",
    "ScanRow",
    "PeriodicityReport",
    "classify_p",
    "predict",
    "exact_lstar",
    "float_lstar",
    "scan",
    "scan_to_csv",
    "periodicity_probe",
]


def is_small_p(n: int, p) -> bool:
    """p <= 1 - (1/2)^(1/n), i.e. (1-p)^n >= 1/2; exact for rational p."""
    if isinstance(p, Fraction):
        return (1 - p) ** n >= Fraction(1, 2)
    with mp.workprec(precision_bits()):
        return (1 - to_mpf(p)) ** n >= mp.mpf("0.5")


def classify_p(n: int, p, *, irrational: bool = False) -> str:
    """One of: small-p, even-n, degenerate-half, odd-denominator,
    even-denominator, irrational-surrogate.

    Irrationality is never guessed from a decimal string; the caller
    must declare it.
    """
    if is_small_p(n, p):
        return "small-p"
    if n % 2 == 0:
        return "even-n"
    if irrational:
        return "irrational-surrogate"
    try:
        pf = Fraction(p)
    except (TypeError, ValueError):
        raise ValueError("odd-n classification needs rational p or irrational=True")
    if pf == Fraction(1, 2):
        return "degenerate-half"
    return "odd-denominator" if pf.denominator % 2 == 1 else "even-denominator"


@dataclass(frozen=True)
class LStarPrediction:
    kind: str  # "exact-value" | "asymptotic-ratio" | "degenerate"
    value: object  # int (exact-value) or Fraction in [1/2, 1] (ratio)
    x_value: int | None
    provenance: str


def predict(n: int, p, *, irrational: bool = False) -> LStarPrediction:
    """Case-table prediction for ell*.

    Precedence: the small-p row first (it is exact and parity-free),
    then even n, then the odd-n rows by denominator parity or declared
    irrationality.
    """
    if n < 1:
        raise ValueError("n must be positive")
    case = classify_p(n, p, irrational=irrational)
    if case == "small-p":
        return LStarPrediction("exact-value", (n + 1) // 2, 0, "small-p")
    if case == "even-n":
        return LStarPrediction("exact-value", n // 2, 0, "even-n")
    if case == "degenerate-half":
        return LStarPrediction("degenerate", None, None, "p=1/2: every split ties")
    if case == "odd-denominator":
        pf = Fraction(p)
        return LStarPrediction(
            "exact-value", (n + pf.denominator) // 2, pf.numerator, "odd-denominator"
        )
    if case == "even-denominator":
        pf = Fraction(p)
        s = pf.denominator
        ratio = Fraction(1, 2) + Fraction(3, 5) / (abs(1 - 2 * pf) * s)
        return LStarPrediction("asymptotic-ratio", ratio, None, "even-denominator")
    return LStarPrediction("asymptotic-ratio", Fraction(1, 2), None, "irrational-surrogate")


def exact_lstar(n: int, p) -> LStarResult:
    """Exact ell* via the exhaustive rational scan."""
    return concentration_bound(n, p)


# --- float backend -----------------------------------------------------------

def _log_binom_rows(n: int, ell: int, logp: float, logq: float):
    """log pmf rows of Bin(ell, p) and Bin(n-ell, p) as numpy arrays."""
    m = n - ell
    kf = np.arange(ell + 1, dtype=np.float64)
    km = np.arange(m + 1, dtype=np.float64)
    from scipy.special import gammaln

    lf = gammaln(ell + 1) - gammaln(kf + 1) - gammaln(ell - kf + 1) + kf * logp + (ell - kf) * logq
    lg = gammaln(m + 1) - gammaln(km + 1) - gammaln(m - km + 1) + km * logp + (m - km) * logq
    return lf, lg


def _log_pmf_at(lf, lg, ell, m, d):
    """log Pr(Bin(ell)-Bin(m) = d) from precomputed log rows."""
    k0, k1 = max(0, d), min(ell, m + d)
    if k0 > k1:
        return -np.inf
    terms = lf[k0 : k1 + 1] + lg[k0 - d : k1 - d + 1]
    return logaddexp.reduce(terms)


def _row_max_double(n, ell, p_float, lf, lg):
    """(log max prob, argmax d) for one split, by unimodal walk from
    the mean offset t*p."""
    m = n - ell
    t = ell - m
    d = int(round(t * p_float))
    d = max(-m, min(ell, d))
    cur = _log_pmf_at(lf, lg, ell, m, d)
    while d + 1 <= ell:
        nxt = _log_pmf_at(lf, lg, ell, m, d + 1)
        if nxt > cur:
            d, cur = d + 1, nxt
        else:
            break
    while d - 1 >= -m:
        prv = _log_pmf_at(lf, lg, ell, m, d - 1)
        if prv > cur:
            d, cur = d - 1, prv
        else:
            break
    return cur, d


def _mp_pmf(n: int, ell: int, d: int, pm) -> mp.mpf:
    """High-precision Pr(Bin(ell, p) - Bin(n-ell, p) = d)."""
    m = n - ell
    q = 1 - pm
    f = [mp.mpf(0)] * (ell + 1)
    f[0] = q**ell
    for k in range(ell):
        f[k + 1] = f[k] * (ell - k) / (k + 1) * pm / q
    g = [mp.mpf(0)] * (m + 1)
    g[0] = q**m
    for j in range(m):
        g[j + 1] = g[j] * (m - j) / (j + 1) * pm / q
    k0, k1 = max(0, d), min(ell, m + d)
    return sum((f[k] * g[k - d] for k in range(k0, k1 + 1)), mp.mpf(0))


@dataclass(frozen=True)
class FloatLStarResult:
    """Float-backend analogue of LStarResult; prob is an mpf."""

    n: int
    p: str
    ell_star: int
    x_star: int
    prob: object
    ties: list
    tie_rtol: float


def float_lstar(n: int, p, *, candidate_slack: float = 1e-6) -> FloatLStarResult:
    """ell* via the high-precision float backend.

    Two passes: a double-precision log-space scan over all splits
    (unimodal mode walk per split) collects candidates within
    `candidate_slack` relative of the best, then mpmath at the working
    precision re-evaluates candidates.  Ties are detected at relative
    tolerance 2^-(prec/2), documented in `tie_rtol`.  Splits below
    ceil(n/2) mirror splits above (d -> -d), so only the upper half is
    scanned and mirrors are added to the tie set.
    """
    if n < 1:
        raise ValueError("n must be positive")
    with mp.workprec(64):
        p_float = float(to_mpf(p))
    if not 0 < p_float < 1:
        raise ValueError("p must lie in (0, 1)")
    logp, logq = math.log(p_float), math.log1p(-p_float)

    half = (n + 1) // 2
    rows = []
    for ell in range(half, n + 1):
        lf, lg = _log_binom_rows(n, ell, logp, logq)
        logmax, d = _row_max_double(n, ell, p_float, lf, lg)
        rows.append((ell, d, logmax))
    best_log = max(r[2] for r in rows)
    cands = [r for r in rows if r[2] >= best_log + math.log1p(-candidate_slack)]

    prec = precision_bits()
    with mp.workprec(prec):
        pm = to_mpf(p)
        refined = []
        for ell, d_hint, _ in cands:
            m = n - ell
            # re-walk the mode at full precision around the double hint
            d = d_hint
            cur = _mp_pmf(n, ell, d, pm)
            while d + 1 <= ell:
                nxt = _mp_pmf(n, ell, d + 1, pm)
                if nxt > cur:
                    d, cur = d + 1, nxt
                else:
                    break
            while d - 1 >= -m:
                prv = _mp_pmf(n, ell, d - 1, pm)
                if prv > cur:
                    d, cur = d - 1, prv
                else:
                    break
            refined.append((ell, d, cur))
        best = max(r[2] for r in refined)
        tie_rtol = float(mp.mpf(2) ** (-(prec // 2)))
        ties = []
        for ell, d, v in refined:
            if abs(v - best) <= best * tie_rtol:
                ties.append((ell, d))
                if ell != n - ell:
                    ties.append((n - ell, -d))
        canon = min(ties, key=lambda tx: (tx[0] < half, tx[0], abs(tx[1]), tx[1]))
        return FloatLStarResult(
            n=n,
            p=str(p),
            ell_star=canon[0],
            x_star=canon[1],
            prob=best,
            ties=sorted(ties),
            tie_rtol=tie_rtol,
        )


# --- scan harness ------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    n: int
    p: str
    ell_star: int
    x_star: int
    prob: object  # Fraction (exact) or mpf (float backend)
    prediction: LStarPrediction
    deviation: object  # ell* - prediction (exact kind) or ell*/n - ratio
    tie_count: int
    ties: list


def _deviation(n: int, ell_star: int, pred: LStarPrediction):
    if pred.kind == "exact-value":
        return ell_star - pred.value
    if pred.kind == "asymptotic-ratio":
        return Fraction(ell_star, n) - pred.value
    return None


def scan(p, n_values, *, backend: str = "exact", irrational: bool = False) -> list[ScanRow]:
    """Per-n ell* with deviations from the case-table prediction."""
    rows = []
    for n in n_values:
        if backend == "exact":
            res = exact_lstar(n, p)
        elif backend == "float":
            res = float_lstar(n, p)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        pred = predict(n, p, irrational=irrational)
        rows.append(
            ScanRow(
                n=n,
                p=str(p),
                ell_star=res.ell_star,
                x_star=res.x_star,
                prob=res.prob,
                prediction=pred,
                deviation=_deviation(n, res.ell_star, pred),
                tie_count=len(res.ties),
                ties=list(res.ties),
            )
        )
    return rows


def _prob_decimal(prob, digits: int = 30) -> str:
    with mp.workprec(int(digits * 3.33) + 16):
        if isinstance(prob, Fraction):
            return mp.nstr(mp.mpf(prob.numerator) / prob.denominator, digits)
        return mp.nstr(mp.mpf(prob), digits)


def scan_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["n", "p", "ell_star", "x_star", "prob", "prediction", "deviation", "tie_count"]
    )
    for row in rows:
        pred = row.prediction
        pred_str = str(pred.value) if pred.value is not None else "degenerate"
        writer.writerow(
            [
                row.n,
                row.p,
                row.ell_star,
                row.x_star,
                _prob_decimal(row.prob),
                pred_str,
                "" if row.deviation is None else str(row.deviation),
                row.tie_count,
            ]
        )
    return buf.getvalue()


# --- periodicity probe -------------------------------------------------------

@dataclass(frozen=True)
class PeriodicityReport:
    p: Fraction
    trend: Fraction  # slope 1/2 + 3/(5|1-2p|s)
    n_values: list
    residues: list  # ell*(n) - trend*n, exact rationals
    max_abs_residue: Fraction
    candidate_period: int | None  # in units of n; None if no period found


def periodicity_probe(p, n_values, *, backend: str = "float") -> PeriodicityReport:
    """Residues of ell* around its linear trend for even-denominator p.

    Reports boundedness and the smallest even shift P under which the
    residue sequence is invariant across the tested window.  Absence of
    a period is a report outcome, not a failure: the underlying
    statement is a conjecture.
    """
    pf = as_fraction(p)
    if pf == Fraction(1, 2):
        raise ValueError("p = 1/2 is degenerate (trend slope undefined)")
    if pf.denominator % 2 != 0:
        raise ValueError("periodicity probe requires even-denominator p")
    n_values = sorted(n_values)
    if any(n % 2 == 0 for n in n_values):
        raise ValueError("probe expects odd n only")
    s = pf.denominator
    trend = Fraction(1, 2) + Fraction(3, 5) / (abs(1 - 2 * pf) * s)
    rows = scan(pf, n_values, backend=backend)
    residues = [Fraction(row.ell_star) - trend * row.n for row in rows]
    max_abs = max((abs(r) for r in residues), default=Fraction(0))

    by_n = dict(zip(n_values, residues))
    candidate = None
    span = n_values[-1] - n_values[0]
    for period in range(2, span // 2 + 1, 2):
        pairs = [(n, n + period) for n in n_values if n + period in by_n]
        if len(pairs) < max(3, len(n_values) // 4):
            continue
        if all(by_n[a] == by_n[b] for a, b in pairs):
            candidate = period
            break
    return PeriodicityReport(
        p=pf,
        trend=trend,
        n_values=list(n_values),
        residues=residues,
        max_abs_residue=max_abs,
        candidate_period=candidate,
    )
