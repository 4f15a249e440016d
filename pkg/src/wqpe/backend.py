"""Kernel backend selection.

Default is the numba-jitted path; set WQPE_PURE_NUMPY=1 to force the
vectorized pure-numpy twin (also used automatically when numba is not
importable).  Both expose the same names:

    rect_filter(qs, m) -> complex128[:]
    cosine_filter(qs, m) -> complex128[:]
    cosine_plus_filter(qs, m) -> complex128[:]
    error_tail_sum(delta2m, m, k, window) -> float
    cbar_quadrature(m, window, nodes) -> float
"""

import os

WINDOW_RECT = 0
WINDOW_COS = 1


def _want_pure_numpy() -> bool:
    return os.environ.get("WQPE_PURE_NUMPY", "").strip() not in ("", "0")


if _want_pure_numpy():
    from . import _fkernels_numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _fkernels_numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        from . import _fkernels_numpy as _impl

        BACKEND = "numpy"

rect_filter = _impl.rect_filter
cosine_filter = _impl.cosine_filter
cosine_plus_filter = _impl.cosine_plus_filter
error_tail_sum = _impl.error_tail_sum
cbar_quadrature = _impl.cbar_quadrature


def warmup() -> str:
    """Trigger JIT compilation of the hot kernels; returns the backend name."""
    import numpy as np

    qs = np.array([0.0, 0.3])
    rect_filter(qs, 3)
    cosine_filter(qs, 3)
    cosine_plus_filter(qs, 3)
    error_tail_sum(0.1, 4, 2, WINDOW_RECT)
    error_tail_sum(0.1, 4, 2, WINDOW_COS)
    cbar_quadrature(2, WINDOW_RECT, 8)
    cbar_quadrature(2, WINDOW_COS, 8)
    return BACKEND
