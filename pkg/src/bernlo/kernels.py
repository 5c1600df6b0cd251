"""Kernel selection: compiled extension if available, numpy fallback otherwise."""

try:
    from bernlo import _ext as _impl

    KERNEL_BACKEND = "compiled"
except ImportError:  # pragma: no cover
    from bernlo import _fallback as _impl

    KERNEL_BACKEND = "fallback"

from bernlo import _fallback

subset_sums = _impl.subset_sums
subset_sums_fallback = _fallback.subset_sums
