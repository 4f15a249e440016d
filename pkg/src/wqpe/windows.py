"""Window amplitude tables, spectral filter functions, and their tail bounds.

The two windows and their discrete-Fourier images, as continuous functions
of the real offset q (in units of 1/2^m of a phase turn):

* rectangular window 1/sqrt(2^m) -> Dirichlet-kernel filter
  e^{i pi q / 2^m} sin(pi q) / (2^m sin(pi q / 2^m));
* cosine window sqrt(2) cos(pi x / 2^m)/sqrt(2^m) -> real central-peak
  filter with |F(+-1/2)|^2 = 1/2, plus the coherently binned variant
  F+(q) = (F(q-1/2) + F(q+1/2))/sqrt(2) used for state preparation.

All evaluators are 2^m-periodic (exactly for the cosine forms, up to a
unit phase for the rectangular one) and switch to analytic limits near
removable singularities.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import WqpeError

MAX_CIRCUIT_M = 14  # ancilla registers; plain filter evaluation allows more
MAX_FILTER_M = 20


class WindowKind(enum.Enum):
    RECT = "rect"
    COSINE = "cos"

    @classmethod
    def parse(cls, text: str) -> "WindowKind":
        key = text.strip().lower()
        if key in ("rect", "rectangular", "r"):
            return cls.RECT
        if key in ("cos", "cosine", "c"):
            return cls.COSINE
        raise WqpeError(f"unknown window kind {text!r} (use rect|cos)")

    @property
    def backend_id(self) -> int:
        return backend.WINDOW_RECT if self is WindowKind.RECT else backend.WINDOW_COS


@dataclass(frozen=True)
class WindowSpec:
    m: int
    kind: WindowKind

    def __post_init__(self):
        if not 1 <= self.m <= MAX_CIRCUIT_M:
            raise WqpeError(f"window needs 1 <= m <= {MAX_CIRCUIT_M}, got {self.m}")


def _check_filter_m(m: int) -> None:
    if not 1 <= m <= MAX_FILTER_M:
        raise WqpeError(f"filters need 1 <= m <= {MAX_FILTER_M}, got {m}")


def window_amplitudes(spec: WindowSpec) -> np.ndarray:
    """Window samples in ascending label order x = -2^(m-1) .. 2^(m-1)-1."""
    M = 1 << spec.m
    xs = np.arange(-(M // 2), M // 2)
    if spec.kind is WindowKind.RECT:
        return np.full(M, 1.0 / math.sqrt(M), dtype=np.complex128)
    return (np.sqrt(2.0) * np.cos(np.pi * xs / M) / math.sqrt(M)).astype(np.complex128)


def _eval(fn, q, m: int):
    _check_filter_m(m)
    arr = np.asarray(q, dtype=np.float64)
    out = fn(np.ascontiguousarray(arr.ravel()), m).reshape(arr.shape)
    if arr.ndim == 0:
        return complex(out[()])
    return out


def filter_rect(q, m: int):
    """Rectangular-window filter G(q); G(0) = 1, zeros at other integers."""
    return _eval(backend.rect_filter, q, m)


def filter_cosine(q, m: int):
    """Cosine-window filter F(q); real, even, |F(+-1/2)|^2 = 1/2."""
    return _eval(backend.cosine_filter, q, m)


def filter_cosine_plus(q, m: int):
    """Coherently binned cosine filter F+(q) = (F(q-1/2)+F(q+1/2))/sqrt(2)."""
    return _eval(backend.cosine_plus_filter, q, m)


def qpe_filter(q, m: int, kind: WindowKind):
    """Filter governing the measured phase-estimation distribution."""
    if kind is WindowKind.RECT:
        return filter_rect(q, m)
    return filter_cosine(q, m)


def prep_filter(q, m: int, kind: WindowKind):
    """Filter applied by one all-zero-postselected preparation round."""
    if kind is WindowKind.RECT:
        return filter_rect(q, m)
    return filter_cosine_plus(q, m)


def bound_rect_tail(q, m: int):
    """Dirichlet-kernel tail bound 1/(2|q|), valid for 0 < |q| <= 2^(m-1)."""
    _check_filter_m(m)
    qa = np.abs(np.asarray(q, dtype=np.float64))
    if np.any(qa == 0.0):
        raise WqpeError("rectangular tail bound undefined at q = 0")
    if np.any(qa > 2 ** (m - 1)):
        raise WqpeError(f"rectangular tail bound needs |q| <= 2^{m - 1}")
    out = 1.0 / (2.0 * qa)
    return float(out) if out.ndim == 0 else out


def bound_cosine_plus_tail(q):
    """Binned-cosine tail bound pi^2 / (8 |q| |q-1| |q+1|), |q| not in {0, 1}."""
    qa = np.abs(np.asarray(q, dtype=np.float64))
    if np.any(qa == 0.0) or np.any(qa == 1.0):
        raise WqpeError("binned-cosine tail bound undefined at q in {0, +-1}")
    out = np.pi**2 / (8.0 * qa * np.abs(qa - 1.0) * (qa + 1.0))
    return float(out) if out.ndim == 0 else out
