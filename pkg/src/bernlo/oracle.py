"""Brute-force ground truth for signed Bernoulli sums with arbitrary coefficients.

Computes the atom distribution of X = sum a_i xi_i (xi_i ~ Ber(p)) by
full enumeration over the 2^n subsets of indices with xi_i = 1, in one
of two backends:

* rational: coefficients are ints/Fractions and p is rational; atoms
  are grouped by exact value.  Internally the coefficients are scaled
  to integers and masses are tracked as integer numerators over s^n,
  so the inner loop is pure machine/big-int work.
* float: coefficients are floats; subset sums come from the
  enumeration kernel and atoms are grouped after sorting with a
  relative tolerance (default 1e-9).

`verify_theorem1` tests, over grids / random samples / local
perturbations, that no coefficient vector beats the extremal signed
+-1 bound from exactdist.concentration_bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from bernlo import kernels
from bernlo.exactdist import as_fraction, concentration_bound

__all__ = [
    "AtomDist",
    "VerificationReport",
    "point_prob",
    "concentration",
    "atom_dist",
    "verify_theorem1",
    "alpha_from_multiset",
]

MAX_POINT_N = 24
MAX_VERIFY_N = 16
FLOAT_MATCH_RTOL = 1e-9


def _check_coeffs(coeffs):
    if len(coeffs) < 1:
        raise ValueError("need at least one coefficient")
    if any(c == 0 for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    if len(coeffs) > MAX_POINT_N:
        raise ValueError(f"enumeration guard: n <= {MAX_POINT_N}")


def _is_rational_input(coeffs, p) -> bool:
    return not isinstance(p, float) and all(
        isinstance(c, (int, Fraction)) for c in coeffs
    )


@dataclass(frozen=True)
class AtomDist:
    """Atoms of the subset-sum distribution: value -> probability mass."""

    atoms: dict
    backend: str  # "rational" | "float"

    def mass(self, x):
        if self.backend == "rational":
            return self.atoms.get(as_fraction(x), Fraction(0))
        x = float(x)
        for v, w in self.atoms.items():
            if math.isclose(v, x, rel_tol=FLOAT_MATCH_RTOL, abs_tol=1e-12):
                return w
        return 0.0

    def heaviest(self):
        """(location, mass) of the heaviest atom; ties toward smaller |x| then x."""
        best = max(self.atoms.values())
        cands = [v for v, w in self.atoms.items() if w == best]
        cands.sort(key=lambda v: (abs(v), v))
        return cands[0], best


def _atom_dist_rational(coeffs, p: Fraction) -> AtomDist:
    n = len(coeffs)
    fracs = [Fraction(c) for c in coeffs]
    scale = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * scale) for f in fracs]
    r, s = p.numerator, p.denominator
    # masses tracked as integer numerators over s^n; atoms keyed by the
    # integer-scaled sum.
    dist = {0: 1}
    for a in ints:
        new = {}
        for v, w in dist.items():
            new[v] = new.get(v, 0) + w * (s - r)
            vv = v + a
            new[vv] = new.get(vv, 0) + w * r
        dist = new
    denom = s**n
    atoms = {Fraction(v, scale): Fraction(w, denom) for v, w in dist.items()}
    return AtomDist(atoms=atoms, backend="rational")


def _atom_dist_float(coeffs, p: float) -> AtomDist:
    sums, weights = kernels.subset_sums(np.asarray(coeffs, dtype=np.float64), float(p))
    order = np.argsort(sums, kind="stable")
    sums = sums[order]
    weights = weights[order]
    scale = max(1.0, float(np.max(np.abs(sums))))
    # group atoms at gaps wider than the relative tolerance
    breaks = np.flatnonzero(np.diff(sums) > FLOAT_MATCH_RTOL * scale) + 1
    starts = np.concatenate(([0], breaks))
    mass = np.add.reduceat(weights, starts)
    loc = np.add.reduceat(sums * weights, starts) / mass
    atoms: dict[float, float] = {}
    for v, w in zip(loc.tolist(), mass.tolist()):
        atoms[v] = atoms.get(v, 0.0) + w
    return AtomDist(atoms=atoms, backend="float")


def atom_dist(coeffs, p) -> AtomDist:
    """Full atom distribution of X = sum a_i xi_i."""
    _check_coeffs(coeffs)
    if _is_rational_input(coeffs, p):
        return _atom_dist_rational(coeffs, as_fraction(p))
    return _atom_dist_float([float(c) for c in coeffs], float(p))


def point_prob(coeffs, p, x):
    """Pr(X = x) by enumeration; exact in the rational backend."""
    return atom_dist(coeffs, p).mass(x)


def concentration(coeffs, p):
    """(x*, max point probability) of X; ties toward smaller |x| then x."""
    return atom_dist(coeffs, p).heaviest()


def alpha_from_multiset(values, k: int, r) -> Fraction:
    """Probability that a uniformly random k-subset of `values` sums to r."""
    values = list(values)
    if not 0 <= k <= len(values):
        raise ValueError("k out of range")
    target = as_fraction(r)
    hits = 0
    from itertools import combinations

    for sub in combinations(values, k):
        if as_fraction(sum(Fraction(v) for v in sub)) == target:
            hits += 1
    return Fraction(hits, math.comb(len(values), k))


@dataclass
class VerificationReport:
    """Outcome of an extremality check against the signed +-1 bound."""

    n: int
    p: str
    strategy: str
    samples: int
    bound: str
    max_observed: str
    worst_coeffs: list
    passed: bool
    counterexamples: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _dedup_grid_vectors(n: int, values) -> list[tuple[int, ...]]:
    """Integer grid vectors deduplicated up to permutation and scaling."""
    from itertools import combinations_with_replacement

    seen = set()
    out = []
    for vec in combinations_with_replacement(sorted(values), n):
        g = math.gcd(*(abs(v) for v in vec))
        canon = tuple(sorted(v // g for v in vec))
        canon_neg = tuple(sorted(-v // g for v in vec))
        key = min(canon, canon_neg)
        if key not in seen:
            seen.add(key)
            out.append(vec)
    return out


def verify_theorem1(
    n: int,
    p,
    strategy: str = "grid",
    *,
    count: int = 1000,
    grid_values=(-3, -2, -1, 1, 2, 3),
    perturbation: float = 0.25,
    steps: int = 50,
    seed: int | None = None,
) -> VerificationReport:
    """Check that no tested coefficient vector exceeds the +-1 bound.

    strategy:
      grid        -- all integer vectors over `grid_values`, deduplicated
                     up to permutation and scaling; rational backend, exact.
      random      -- `count` random real vectors, i.i.d. uniform on [-2, 2]
                     rejecting |a_i| < 0.05; float backend.
      hill-climb  -- perturb each coordinate of +-1 vectors and check no
                     perturbation strictly increases the concentration.

    A violation is reported (pass flag false, counterexample recorded),
    never raised.
    """
    if n > MAX_VERIFY_N:
        raise ValueError(f"verification guard: n <= {MAX_VERIFY_N}")
    if strategy not in ("grid", "random", "hill-climb"):
        raise ValueError(f"unknown strategy {strategy!r}")

    p_exact = as_fraction(p)  # bound must be exact; rejects float p
    bound = concentration_bound(n, p_exact).prob
    bound_f = float(bound)
    tol = 1e-9

    max_obs = Fraction(0) if strategy == "grid" else 0.0
    worst: tuple = ()
    counterexamples = []
    samples = 0

    if strategy == "grid":
        for vec in _dedup_grid_vectors(n, grid_values):
            samples += 1
            _, prob = concentration(list(vec), p_exact)
            if prob > max_obs:
                max_obs, worst = prob, vec
            if prob > bound:
                counterexamples.append({"coeffs": list(vec), "prob": str(prob)})
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        pf = float(p_exact)
        done = 0
        while done < count:
            vec = rng.uniform(-2.0, 2.0, size=n)
            if np.any(np.abs(vec) < 0.05):
                continue
            done += 1
            samples += 1
            _, prob = concentration(list(vec), pf)
            if prob > max_obs:
                max_obs, worst = prob, tuple(round(v, 6) for v in vec)
            if prob > bound_f * (1 + tol):
                counterexamples.append({"coeffs": list(vec), "prob": prob})
    else:  # hill-climb
        rng = np.random.default_rng(seed)
        pf = float(p_exact)
        for _ in range(steps):
            signs = rng.choice([-1.0, 1.0], size=n)
            _, base_prob = concentration(list(signs), pf)
            samples += 1
            if base_prob > max_obs:
                max_obs, worst = base_prob, tuple(signs)
            for i in range(n):
                for delta in (-perturbation, perturbation):
                    vec = signs.copy()
                    vec[i] += delta
                    if abs(vec[i]) < 1e-9:
                        continue
                    samples += 1
                    _, prob = concentration(list(vec), pf)
                    if prob > max_obs:
                        max_obs, worst = prob, tuple(round(v, 6) for v in vec)
                    if prob > bound_f * (1 + tol):
                        counterexamples.append({"coeffs": list(vec), "prob": prob})

    passed = not counterexamples
    return VerificationReport(
        n=n,
        p=str(p),
        strategy=strategy,
        samples=samples,
        bound=str(bound),
        max_observed=str(max_obs),
        worst_coeffs=[str(c) for c in worst],
        passed=passed,
        counterexamples=counterexamples,
    )
