"""Pure-numpy twin of _fkernels_numba; same names, vectorized internals.

Selected when numba is unavailable or WQPE_PURE_NUMPY=1 is set.
"""

import numpy as np

WINDOW_RECT = 0
WINDOW_COS = 1

SINGULARITY_TOL = 1e-8


def _sin_pi(x):
    x = np.asarray(x, dtype=np.float64)
    n = np.floor(x + 0.5)
    s = np.sin(np.pi * (x - n))
    return np.where(n.astype(np.int64) & 1, -s, s)


def _dirichlet_ratio(u, M):
    u = np.asarray(u, dtype=np.float64)
    j = np.floor(u / M + 0.5)
    w = u - M * j
    near = np.pi * np.abs(w) / M < SINGULARITY_TOL
    den = np.where(near, 1.0, M * np.sin(np.pi * w / M))
    v = np.where(near, np.sinc(w), _sin_pi(w) / den)
    return np.where(j.astype(np.int64) & 1, -v, v)


def _cos_real(s, m):
    M = float(2 ** m)
    s = np.asarray(s, dtype=np.float64)
    s = s - M * np.floor(s / M + 0.5)
    u = np.abs(s) - 0.5
    num = np.sqrt(2.0) * np.sin(np.pi / M) * _dirichlet_ratio(u, M)
    return num / (2.0 * np.sin(np.pi * (1.0 + u) / M))


def rect_filter(qs, m):
    M = float(2 ** m)
    qs = np.asarray(qs, dtype=np.float64)
    return np.exp(1j * np.pi * qs / M) * _dirichlet_ratio(qs, M)


def cosine_filter(qs, m):
    return _cos_real(qs, m).astype(np.complex128)


def cosine_plus_filter(qs, m):
    qs = np.asarray(qs, dtype=np.float64)
    return ((_cos_real(qs - 0.5, m) + _cos_real(qs + 0.5, m)) / np.sqrt(2.0)).astype(
        np.complex128
    )


def error_tail_sum(delta2m, m, k, window):
    half = 2 ** (m - 1)
    ls = np.concatenate([np.arange(k, half), np.arange(-half, -k)])
    qs = ls - delta2m
    if window == WINDOW_RECT:
        v = _dirichlet_ratio(qs, float(2 ** m))
    else:
        v = _cos_real(qs, m)
    return float(np.sum(v * v))


def cbar_quadrature(m, window, nodes):
    M = 2 ** m
    taus = np.arange(nodes) / nodes
    acc = 0.0
    for z in range(-(M // 2), M // 2):
        qs = z - M * taus
        if window == WINDOW_RECT:
            v = _dirichlet_ratio(qs, float(M))
        else:
            v = _cos_real(qs, m)
        s = np.sin(np.pi * (taus - z / M))
        acc += float(np.sum(v * v * s * s))
    return acc / nodes
