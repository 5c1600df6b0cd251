"""Subset profiles, their convex decomposition, and the bilinear point form.

A subset profile gamma assigns, for each k in {0..i}, a probability
distribution gamma(k, .) over real locations r (here: the chance that a
random k-subset of a coefficient multiset sums to r).  Valid profiles
satisfy three properties:

  1. gamma(k, r) >= 0;
  2. each row k sums to 1;
  3. for all k < i and all r:
       sum_{r' <= r} gamma(k+1, r') + sum_{r' >= r} gamma(k, r') <= 1.

Property 3 forces row supports to move strictly right as k grows, and
is exactly what makes every valid profile a convex combination of
"pure" profiles (single strictly increasing chains r_0 < ... < r_i with
unit mass per row).  `decompose` constructs that combination by
repeatedly peeling off the chain of row minima.

All locations and weights are exact rationals; floats are rejected
because both Property 3 and the peeling rule need exact order
comparisons.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from bernlo.exactdist import as_fraction, binom_pmf, bin_diff_pmf

__all__ = [
    "SubsetProfile",
    "PureProfile",
    "ConvexDecomposition",
    "PropertyReport",
    "profile_from_multiset",
    "check_properties",
    "decompose",
    "bilinear_B",
    "pure_value",
    "max_over_pure",
]


def _as_exact(r) -> Fraction:
    if isinstance(r, float):
        raise TypeError("profile locations must be exact rationals, not floats")
    return Fraction(r)


@dataclass(frozen=True)
class SubsetProfile:
    """Finite-support function on {0..i} x Q with nonnegative rational weights."""

    i: int
    entries: dict[tuple[int, Fraction], Fraction]

    def __post_init__(self):
        for (k, r), w in self.entries.items():
            if not 0 <= k <= self.i:
                raise ValueError(f"row index {k} outside 0..{self.i}")
            _as_exact(r)
            if w < 0:
                raise ValueError("weights must be nonnegative")

    def row(self, k: int) -> dict[Fraction, Fraction]:
        return {r: w for (kk, r), w in self.entries.items() if kk == k and w != 0}

    def support_size(self) -> int:
        return sum(1 for w in self.entries.values() if w != 0)

    def to_json(self) -> str:
        rows = [
            [k, r.numerator, r.denominator, w.numerator, w.denominator]
            for (k, r), w in sorted(self.entries.items())
            if w != 0
        ]
        return json.dumps({"i": self.i, "entries": rows})

    @classmethod
    def from_json(cls, text: str) -> "SubsetProfile":
        obj = json.loads(text)
        entries = {
            (k, Fraction(rn, rd)): Fraction(wn, wd)
            for k, rn, rd, wn, wd in obj["entries"]
        }
        return cls(i=obj["i"], entries=entries)


@dataclass(frozen=True)
class PureProfile:
    """Strictly increasing chain r_0 < r_1 < ... < r_i of locations."""

    points: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(_as_exact(r) for r in self.points)
        object.__setattr__(self, "points", pts)
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("pure profile points must be strictly increasing")

    @property
    def i(self) -> int:
        return len(self.points) - 1

    def as_profile(self) -> SubsetProfile:
        return SubsetProfile(
            i=self.i,
            entries={(k, r): Fraction(1) for k, r in enumerate(self.points)},
        )


@dataclass(frozen=True)
class ConvexDecomposition:
    terms: list[tuple[Fraction, PureProfile]]

    def total_weight(self) -> Fraction:
        return sum((w for w, _ in self.terms), Fraction(0))

    def recombine(self) -> SubsetProfile:
        if not self.terms:
            raise ValueError("empty decomposition")
        i = self.terms[0][1].i
        entries: dict[tuple[int, Fraction], Fraction] = {}
        for w, pure in self.terms:
            for k, r in enumerate(pure.points):
                key = (k, r)
                entries[key] = entries.get(key, Fraction(0)) + w
        return SubsetProfile(i=i, entries=entries)


def profile_from_multiset(values, i: int | None = None) -> SubsetProfile:
    """Subset-sum profile of a multiset: row k is the distribution of the
    sum of a uniformly random k-subset."""
    vals = [Fraction(v) for v in values]
    if i is None:
        i = len(vals)
    if i != len(vals):
        raise ValueError("profile index must equal the multiset size")
    entries: dict[tuple[int, Fraction], Fraction] = {}
    for k in range(i + 1):
        denom = math.comb(i, k)
        for sub in combinations(vals, k):
            key = (k, Fraction(sum(sub)))
            entries[key] = entries.get(key, Fraction(0)) + Fraction(1, denom)
    return SubsetProfile(i=i, entries=entries)


@dataclass(frozen=True)
class PropertyReport:
    nonnegative: bool
    rows_normalized: bool
    supports_ordered: bool  # Property 3

    def all_pass(self) -> bool:
        return self.nonnegative and self.rows_normalized and self.supports_ordered


def _property3_holds(rows: list[dict[Fraction, Fraction]], total: Fraction) -> bool:
    """Check sum_{r'<=r} row[k+1] + sum_{r'>=r} row[k] <= total at every
    candidate r.

    Both partial sums are step functions jumping only at support points
    of the two rows, the first right-continuous and the second
    left-continuous, so checking at the union of support points (the
    +-inf sentinels contribute total <= total trivially) suffices.
    """
    for k in range(len(rows) - 1):
        lo, hi = rows[k + 1], rows[k]
        for r in set(lo) | set(hi):
            left = sum((w for rr, w in lo.items() if rr <= r), Fraction(0))
            right = sum((w for rr, w in hi.items() if rr >= r), Fraction(0))
            if left + right > total:
                return False
    return True


def check_properties(profile: SubsetProfile) -> PropertyReport:
    """Evaluate the three validity properties exactly."""
    rows = [profile.row(k) for k in range(profile.i + 1)]
    nonneg = all(w >= 0 for w in profile.entries.values())
    sums = [sum(r.values(), Fraction(0)) for r in rows]
    normalized = all(s == 1 for s in sums)
    ordered = _property3_holds(rows, Fraction(1)) if normalized else (
        len(set(sums)) == 1 and _property3_holds(rows, sums[0])
    )
    return PropertyReport(
        nonnegative=nonneg, rows_normalized=normalized, supports_ordered=ordered
    )


def decompose(profile: SubsetProfile) -> ConvexDecomposition:
    """Express a valid profile as a convex combination of pure profiles.

    Repeatedly extracts the chain of row minima: with r_k the smallest
    location in row k, the chain r_0 < ... < r_i is a pure profile, and
    peeling it off with weight lambda = min_k gamma(k, r_k) strictly
    shrinks the support.  The remainder is kept unnormalized (all rows
    share the remaining mass), which keeps denominators bounded; each
    intermediate remainder is asserted to satisfy the three properties
    at its own mass level.
    """
    report = check_properties(profile)
    if not report.all_pass():
        raise ValueError(f"profile violates validity properties: {report}")

    i = profile.i
    rows = [dict(profile.row(k)) for k in range(i + 1)]
    mass = Fraction(1)
    terms: list[tuple[Fraction, PureProfile]] = []
    while True:
        chain = []
        for k in range(i + 1):
            if not rows[k]:
                raise RuntimeError("row emptied before remainder became pure")
            chain.append(min(rows[k]))
        if any(a >= b for a, b in zip(chain, chain[1:])):
            raise RuntimeError("row minima not strictly increasing; input inconsistent")
        support = sum(len(r) for r in rows)
        if support == i + 1:
            terms.append((mass, PureProfile(points=tuple(chain))))
            break
        lam = min(rows[k][r] for k, r in enumerate(chain))
        terms.append((lam, PureProfile(points=tuple(chain))))
        for k, r in enumerate(chain):
            rows[k][r] -= lam
            if rows[k][r] == 0:
                del rows[k][r]
        mass -= lam
        if sum(len(r) for r in rows) >= support:
            raise RuntimeError("support failed to shrink")
        # remainder must stay valid at its current mass level
        row_sums = {sum(r.values(), Fraction(0)) for r in rows}
        if row_sums != {mass} or not _property3_holds(rows, mass):
            raise RuntimeError("intermediate remainder violates validity properties")
    return ConvexDecomposition(terms=terms)


def _binom_weights(i: int, p: Fraction) -> list[Fraction]:
    return [binom_pmf(i, k, p) for k in range(i + 1)]


def bilinear_B(alpha: SubsetProfile, beta: SubsetProfile, p, x) -> Fraction:
    """Point probability Pr(X = x) as a bilinear form of the two profiles.

    X = Y - Z where Y collects the positive coefficients (profile alpha,
    |A| = ell) and Z the negated negative ones (profile beta, |B| = m).
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    x = _as_exact(x)
    f = _binom_weights(alpha.i, p)
    g = _binom_weights(beta.i, p)
    y_dist: dict[Fraction, Fraction] = {}
    for (k, r), w in alpha.entries.items():
        if w:
            y_dist[r] = y_dist.get(r, Fraction(0)) + f[k] * w
    z_dist: dict[Fraction, Fraction] = {}
    for (k, r), w in beta.entries.items():
        if w:
            z_dist[r] = z_dist.get(r, Fraction(0)) + g[k] * w
    return sum(
        (wy * z_dist.get(r - x, Fraction(0)) for r, wy in y_dist.items()),
        Fraction(0),
    )


def pure_value(alpha: PureProfile, beta: PureProfile, p, x) -> Fraction:
    """Bilinear form at a pure pair: sum of f(k) g(j) over r_k = s_j + x."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    x = _as_exact(x)
    f = _binom_weights(alpha.i, p)
    g = _binom_weights(beta.i, p)
    pos = {r: k for k, r in enumerate(alpha.points)}
    total = Fraction(0)
    for j, s in enumerate(beta.points):
        k = pos.get(s + x)
        if k is not None:
            total += f[k] * g[j]
    return total


def _increasing_tuples(points: list[int], length: int, first: int | None):
    if first is None:
        yield from combinations(points, length)
    else:
        rest = [q for q in points if q > first]
        for tail in combinations(rest, length - 1):
            yield (first,) + tail


def max_over_pure(ell: int, m: int, p, x, grid_size: int):
    """Maximize pure_value over all integer-grid placements.

    Enumerates strictly increasing chains r_0 < ... < r_ell (translation
    fixed by r_0 = 0; only differences matter) against chains
    s_0 < ... < s_m drawn from [-grid_size, grid_size).  Returns
    (best value, (r chain, s chain)); ties broken lexicographically.
    """
    if ell + m > 8 or grid_size > 12:
        raise ValueError("enumeration guard: ell + m <= 8 and grid_size <= 12")
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    x = int(x)
    f = _binom_weights(ell, p)
    g = _binom_weights(m, p)
    # integer numerators over s_den^(ell+m) keep the inner loop exact and fast
    den = p.denominator
    scale_f = den**ell
    scale_m = den**m
    fi = [int(v * scale_f) for v in f]
    gi = [int(v * scale_m) for v in g]

    r_grid = list(range(grid_size))
    s_grid = list(range(-grid_size, grid_size))
    best = -1
    best_cfg = None
    for r_pts in _increasing_tuples(r_grid, ell + 1, first=0):
        rpos = {rv: k for k, rv in enumerate(r_pts)}
        for s_pts in combinations(s_grid, m + 1):
            val = 0
            for j, sv in enumerate(s_pts):
                k = rpos.get(sv + x)
                if k is not None:
                    val += fi[k] * gi[j]
            if val > best or (val == best and (r_pts, s_pts) < best_cfg):
                best = val
                best_cfg = (r_pts, s_pts)
    return Fraction(best, scale_f * scale_m), best_cfg
