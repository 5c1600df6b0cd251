"""Exact and asymptotic concentration probabilities for signed Bernoulli sums."""

from bernlo.exactdist import (
    BinDiffDist,
    LStarResult,
    bin_diff_pmf,
    binom_pmf,
    build_dist,
    concentration_bound,
    pr_zero_convolution,
)
from bernlo.kernels import KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "BinDiffDist",
    "LStarResult",
    "KERNEL_BACKEND",
    "binom_pmf",
    "bin_diff_pmf",
    "build_dist",
    "concentration_bound",
    "pr_zero_convolution",
    "__version__",
]
