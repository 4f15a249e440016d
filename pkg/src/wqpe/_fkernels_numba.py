"""numba-jitted filter kernels (hot path).

Scalar evaluators plus the grid reductions that dominate runtime in the
error-rate sweeps and the variance-metric quadrature.  Keep in lockstep
with _fkernels_numpy, which is the pure-numpy twin selected by
WQPE_PURE_NUMPY=1.
"""

import math

import numpy as np
from numba import njit

WINDOW_RECT = 0
WINDOW_COS = 1

# Switch to the analytic limit when the sine in a denominator has its
# argument within this distance of a zero.
SINGULARITY_TOL = 1e-8


@njit(cache=True)
def _sin_pi(x):
    # sin(pi*x) with exact argument reduction; accurate for large |x|.
    n = int(math.floor(x + 0.5))
    s = math.sin(math.pi * (x - n))
    if n & 1:
        return -s
    return s


@njit(cache=True)
def _sinc(w):
    if abs(w) < 1e-12:
        return 1.0
    pw = math.pi * w
    return math.sin(pw) / pw


@njit(cache=True)
def _dirichlet_ratio(u, M):
    # sin(pi u) / (M sin(pi u / M)), singularity at u = 0 mod M removable.
    j = int(math.floor(u / M + 0.5))
    w = u - M * j
    if math.pi * abs(w) / M < SINGULARITY_TOL:
        v = _sinc(w)
    else:
        v = _sin_pi(w) / (M * math.sin(math.pi * w / M))
    if j & 1:
        return -v
    return v


@njit(cache=True)
def _rect_one(q, m):
    M = float(2 ** m)
    r = _dirichlet_ratio(q, M)
    ph = math.pi * q / M
    return complex(math.cos(ph) * r, math.sin(ph) * r)


@njit(cache=True)
def _cos_one_real(s, m):
    # Central-peak cosine-window filter; real-valued and even in s.
    M = float(2 ** m)
    s = s - M * math.floor(s / M + 0.5)
    u = abs(s) - 0.5
    num = math.sqrt(2.0) * math.sin(math.pi / M) * _dirichlet_ratio(u, M)
    return num / (2.0 * math.sin(math.pi * (1.0 + u) / M))


@njit(cache=True)
def _cos_plus_one_real(q, m):
    return (_cos_one_real(q - 0.5, m) + _cos_one_real(q + 0.5, m)) / math.sqrt(2.0)


@njit(cache=True)
def rect_filter(qs, m):
    out = np.empty(qs.shape[0], dtype=np.complex128)
    for i in range(qs.shape[0]):
        out[i] = _rect_one(qs[i], m)
    return out


@njit(cache=True)
def cosine_filter(qs, m):
    out = np.empty(qs.shape[0], dtype=np.complex128)
    for i in range(qs.shape[0]):
        out[i] = complex(_cos_one_real(qs[i], m), 0.0)
    return out


@njit(cache=True)
def cosine_plus_filter(qs, m):
    out = np.empty(qs.shape[0], dtype=np.complex128)
    for i in range(qs.shape[0]):
        out[i] = complex(_cos_plus_one_real(qs[i], m), 0.0)
    return out


@njit(cache=True)
def error_tail_sum(delta2m, m, k, window):
    """Sum of |filter(l - delta2m)|^2 over l in [k, 2^(m-1)) and [-2^(m-1), -k)."""
    half = 2 ** (m - 1)
    acc = 0.0
    for l in range(k, half):
        q = l - delta2m
        if window == WINDOW_RECT:
            v = _dirichlet_ratio(q, float(2 ** m))
        else:
            v = _cos_one_real(q, m)
        acc += v * v
    for l in range(-half, -k):
        q = l - delta2m
        if window == WINDOW_RECT:
            v = _dirichlet_ratio(q, float(2 ** m))
        else:
            v = _cos_one_real(q, m)
        acc += v * v
    return acc


@njit(cache=True)
def cbar_quadrature(m, window, nodes):
    """Windowed-variance metric: sum_z int dtau Pr(z|tau) sin^2(pi(tau - z/2^m)),
    trapezoid rule over one period (uniform weights by periodicity)."""
    M = 2 ** m
    acc = 0.0
    for jt in range(nodes):
        tau = jt / nodes
        for z in range(-(M // 2), M // 2):
            q = z - M * tau
            if window == WINDOW_RECT:
                v = _dirichlet_ratio(q, float(M))
            else:
                v = _cos_one_real(q, m)
            s = math.sin(math.pi * (tau - z / M))
            acc += v * v * s * s
    return acc / nodes
