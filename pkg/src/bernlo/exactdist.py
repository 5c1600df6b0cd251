"""Exact binomial-difference point probabilities and concentration maxima.

Everything here is computed in arbitrary-precision rational arithmetic.
The central object is the distribution of Bin(ell, p) - Bin(m, p) for
independent binomials: the law of a signed sum with `ell` coefficients
equal to +1 and `m` equal to -1.  `concentration_bound` exhaustively
maximizes its point probabilities over both the split `ell` and the
target point, which gives the extremal concentration probability over
all nonzero real coefficient vectors of length n.

The exhaustive scan packs pmf numerators into big-integer "slots" so
that moving from split ell to ell+1 costs one small-integer multiply
and one exact division; this keeps full scans exact yet fast for n in
the thousands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

__all__ = [
    "BinDiffDist",
    "LStarResult",
    "as_fraction",
    "binom_pmf",
    "bin_diff_pmf",
    "build_dist",
    "concentration_bound",
    "pr_zero_convolution",
]


def as_fraction(p) -> Fraction:
    """Coerce p (Fraction, int, or 'r/s' string) to an exact Fraction.

    Floats are rejected: this module is the exact path, and silently
    rationalizing a float would misrepresent the input.
    """
    if isinstance(p, float):
        raise TypeError("floats are not accepted on the exact path; pass a Fraction or 'r/s'")
    return Fraction(p)


def _check_prob(p: Fraction) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def binom_pmf(n: int, k: int, p) -> Fraction:
    """Pr(Bin(n, p) = k), exactly. Zero for k outside [0, n]."""
    p = as_fraction(p)
    _check_prob(p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return Fraction(0)
    return math.comb(n, k) * p**k * (1 - p) ** (n - k)


def bin_diff_pmf(ell: int, m: int, p, d: int) -> Fraction:
    """Pr(Bin(ell, p) - Bin(m, p) = d), exactly.

    Computed as sum over k - j = d of the two binomial pmfs; zero for
    d outside [-m, ell].
    """
    p = as_fraction(p)
    _check_prob(p)
    if ell < 0 or m < 0:
        raise ValueError("ell and m must be nonnegative")
    if d < -m or d > ell:
        return Fraction(0)
    total = Fraction(0)
    for k in range(max(0, d), min(ell, m + d) + 1):
        total += binom_pmf(ell, k, p) * binom_pmf(m, k - d, p)
    return total


@dataclass(frozen=True)
class BinDiffDist:
    """Full pmf of Bin(ell, p) - Bin(m, p) on its support [-m, ell]."""

    ell: int
    m: int
    p: Fraction
    pmf: dict[int, Fraction]

    @property
    def support(self) -> range:
        return range(-self.m, self.ell + 1)

    def prob(self, d: int) -> Fraction:
        return self.pmf.get(d, Fraction(0))

    def mode(self) -> tuple[int, Fraction]:
        """Heaviest atom; ties broken toward smaller |d| then smaller d."""
        best = max(self.pmf.values())
        cands = [d for d, v in self.pmf.items() if v == best]
        cands.sort(key=lambda d: (abs(d), d))
        return cands[0], best

    def is_log_concave(self) -> bool:
        ds = sorted(self.pmf)
        return all(
            self.pmf[d] ** 2 >= self.pmf[d - 1] * self.pmf[d + 1]
            for d in ds[1:-1]
        )


def build_dist(ell: int, m: int, p) -> BinDiffDist:
    """Materialize the full binomial-difference pmf by convolution."""
    p = as_fraction(p)
    _check_prob(p)
    if ell < 0 or m < 0:
        raise ValueError("ell and m must be nonnegative")
    f = [binom_pmf(ell, k, p) for k in range(ell + 1)]
    g = [binom_pmf(m, j, p) for j in range(m + 1)]
    pmf = {d: Fraction(0) for d in range(-m, ell + 1)}
    for k, fk in enumerate(f):
        if fk == 0:
            continue
        for j, gj in enumerate(g):
            pmf[k - j] += fk * gj
    return BinDiffDist(ell=ell, m=m, p=p, pmf=pmf)


def pr_zero_convolution(n: int, ell: int, p) -> Fraction:
    """Pr(Bin(ell, p) - Bin(n - ell, p) = 0) via the diagonal sum.

    Equals sum over k of p^(2k) (1-p)^(n-2k) C(ell, k) C(n-ell, k).
    """
    p = as_fraction(p)
    _check_prob(p)
    if not 0 <= ell <= n:
        raise ValueError("require 0 <= ell <= n")
    m = n - ell
    total = Fraction(0)
    for k in range(min(ell, m) + 1):
        total += p ** (2 * k) * (1 - p) ** (n - 2 * k) * math.comb(ell, k) * math.comb(m, k)
    return total


@dataclass(frozen=True)
class LStarResult:
    """Result of exhaustive concentration maximization over (ell, x).

    `ties` holds every (ell, x) pair achieving the maximum; the
    canonical representative is the tie with smallest ell >= ceil(n/2),
    then smallest |x|, then smallest x.
    """

    n: int
    p: Fraction
    ell_star: int
    x_star: int
    prob: Fraction
    ties: list[tuple[int, int]] = field(default_factory=list)
    degenerate: bool = False


def _packed_pmf_rows(n: int, r: int, s: int) -> Iterator[tuple[int, list[int]]]:
    """Yield (ell, numerators) for every split ell in [0, n].

    numerators[i] is s^n * Pr(Bin(ell, r/s) - Bin(n - ell, r/s) = i - (n - ell)).
    Each pmf is the coefficient list of ((s-r) + r z)^ell * (r + (s-r) z)^(n-ell);
    packing coefficients into fixed-width slots of a big integer turns the
    ell -> ell+1 update into X * B // C with small B, C, which is exact and
    linear in the packed size.
    """
    # Slot width: intermediate products have coefficients <= s^(n+1).
    w_bits = (s ** (n + 1)).bit_length() + 1
    wb = (w_bits + 7) // 8
    w = 8 * wb
    base = 1 << w
    B = (s - r) + r * base
    C = r + (s - r) * base
    X = 1
    for _ in range(n):
        X *= C
    nbytes = (n + 2) * wb
    for ell in range(n + 1):
        raw = X.to_bytes(nbytes, "little")
        nums = [
            int.from_bytes(raw[i * wb : (i + 1) * wb], "little")
            for i in range(n + 1)
        ]
        yield ell, nums
        if ell < n:
            X = (X * B) // C


def diff_pmf_numerators(ell: int, m: int, r: int, s: int) -> list[int]:
    """Integer numerators over s^(ell+m) of the Bin(ell, r/s) - Bin(m, r/s)
    pmf, indexed so that entry i corresponds to d = i - m."""
    A = [1]
    for _ in range(ell):
        A = [
            (A[j] if j < len(A) else 0) * (s - r) + (A[j - 1] if j > 0 else 0) * r
            for j in range(len(A) + 1)
        ]
    B = [1]
    for _ in range(m):
        B = [
            (B[j] if j < len(B) else 0) * r + (B[j - 1] if j > 0 else 0) * (s - r)
            for j in range(len(B) + 1)
        ]
    out = [0] * (ell + m + 1)
    for ja, va in enumerate(A):
        if va:
            for jb, vb in enumerate(B):
                out[ja + jb] += va * vb
    return out


def concentration_bound(n: int, p) -> LStarResult:
    """Exact max over ell in [0, n] and integer x of the point probability.

    Scans every split and every support point; returns the global
    maximum, the complete tie set, and the canonical representative.
    p in {0, 1} is degenerate: the sum is deterministic for every
    split, so prob = 1 and all ell are tied.
    """
    if n <= 0:
        raise ValueError("n must be a positive integer")
    p = as_fraction(p)
    _check_prob(p)

    if p == 0 or p == 1:
        ties = [(ell, 0 if p == 0 else 2 * ell - n) for ell in range(n + 1)]
        ell0 = (n + 1) // 2
        x0 = 0 if p == 0 else 2 * ell0 - n
        return LStarResult(
            n=n, p=p, ell_star=ell0, x_star=x0, prob=Fraction(1),
            ties=ties, degenerate=True,
        )

    r, s = p.numerator, p.denominator
    best_num = -1
    ties: list[tuple[int, int]] = []
    for ell, nums in _packed_pmf_rows(n, r, s):
        m = n - ell
        row_best = max(nums)
        if row_best > best_num:
            best_num = row_best
            ties = []
        if row_best == best_num:
            ties.extend((ell, i - m) for i, v in enumerate(nums) if v == best_num)

    half = (n + 1) // 2
    canon = min(ties, key=lambda t: (t[0] < half, t[0] if t[0] >= half else -t[0], abs(t[1]), t[1]))
    return LStarResult(
        n=n, p=p, ell_star=canon[0], x_star=canon[1],
        prob=Fraction(best_num, s**n), ties=sorted(ties),
    )
