"""Numerical kernels with a compiled core and a pure-Python fallback.

At import time the Cython extension is preferred; if it is not built (for
example when running from a source checkout without compiling), the numpy
fallback is selected.  ``KERNEL_BACKEND`` records which one is active.
"""

import numpy as np

try:
    from ._cheb import cheb_eval as _cheb_eval_impl

    KERNEL_BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build environment
    from ._fallback import cheb_eval as _cheb_eval_impl

    KERNEL_BACKEND = "numpy"

from ._fallback import cheb_eval as _cheb_eval_fallback


def chebyshev_values(coeffs, xs, *, backend: str | None = None) -> np.ndarray:
    """Evaluate the Chebyshev series with coefficients ``coeffs`` at ``xs``.

    ``backend`` forces ``"cython"`` or ``"numpy"`` (used by the benchmark and
    the agreement tests); by default the best available implementation runs.
    """
    c = np.ascontiguousarray(coeffs, dtype=np.float64)
    x = np.ascontiguousarray(xs, dtype=np.float64)
    out = np.empty_like(x)
    if backend is None:
        _cheb_eval_impl(c, x, out)
    elif backend == "numpy":
        _cheb_eval_fallback(c, x, out)
    elif backend == "cython":
        if KERNEL_BACKEND != "cython":
            raise RuntimeError("compiled kernel not available")
        _cheb_eval_impl(c, x, out)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return out
