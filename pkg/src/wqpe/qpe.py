"""Windowed phase estimation: circuit simulation, analytic outcome
distributions, error-rate sums, qubit-count calculators, and the
windowed-variance metric.

Phases are measured in turns: theta = lambda * E in [-1/2, 1/2).  The
nearest grid point z to 2^m theta uses round-half-up (floor(x + 1/2)), so
the residue delta satisfies 2^m delta in [-1/2, 1/2) and the -1/2 endpoint
is representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend, circuit
from .errors import WqpeError
from .statevector import EigenDecomposition, QuantumState, UnitaryOperator
from .windows import MAX_FILTER_M, WindowKind, qpe_filter

CBAR_NODES = 1 << 12


def nearest_grid_point(x: float) -> int:
    """Nearest integer with ties rounded up (delta = x - z lands in [-1/2, 1/2))."""
    return int(math.floor(x + 0.5))


def reduce_phase(theta: float) -> float:
    """Map a phase in turns into [-1/2, 1/2)."""
    return (theta + 0.5) % 1.0 - 0.5


@dataclass(frozen=True)
class QpeConfig:
    """t precision qubits plus p extra qubits; m = t + p total ancillas."""

    t: int
    p: int
    window: WindowKind
    lam: float = 1.0

    def __post_init__(self):
        if self.t < 1 or self.p < 0:
            raise WqpeError(f"need t >= 1 and p >= 0, got t={self.t}, p={self.p}")
        if self.t + self.p > MAX_FILTER_M:
            raise WqpeError(f"m = t + p = {self.t + self.p} above cap {MAX_FILTER_M}")

    @property
    def m(self) -> int:
        return self.t + self.p


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Ancilla outcome probabilities over labels q = -2^(m-1) .. 2^(m-1)-1."""

    m: int
    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=np.float64)
        object.__setattr__(self, "probabilities", probs)
        if probs.shape != (1 << self.m,):
            raise WqpeError(f"expected {1 << self.m} probabilities, got {probs.shape}")
        if np.any(probs < -1e-12):
            raise WqpeError("negative probability in outcome distribution")
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-10:
            raise WqpeError(f"outcome distribution sums to {total}, not 1")

    @property
    def labels(self) -> np.ndarray:
        M = 1 << self.m
        return np.arange(-(M // 2), M // 2)

    def prob_at(self, q: int) -> float:
        M = 1 << self.m
        idx = (int(q) + M // 2) % M
        return float(self.probabilities[idx])

    def total_variation(self, other: "OutcomeDistribution") -> float:
        if other.m != self.m:
            raise WqpeError("cannot compare distributions of different size")
        return 0.5 * float(np.sum(np.abs(self.probabilities - other.probabilities)))


def analytic_distribution(theta: float, cfg: QpeConfig) -> OutcomeDistribution:
    """Pr(q) = |filter(q - 2^m theta)|^2, reduced into the centered range."""
    theta = reduce_phase(theta)
    M = 1 << cfg.m
    qs = np.arange(-(M // 2), M // 2, dtype=np.float64)
    amps = qpe_filter(qs - M * theta, cfg.m, cfg.window)
    return OutcomeDistribution(cfg.m, np.abs(amps) ** 2)


def run_qpe_circuit(
    state: QuantumState,
    u: UnitaryOperator,
    cfg: QpeConfig,
    u_eig: EigenDecomposition | None = None,
) -> OutcomeDistribution:
    """Simulate the windowed m-qubit phase-estimation circuit.

    Window preparation, controlled powers u^{2^0} .. u^{2^(m-2)} and
    u^{-2^(m-1)} on the top qubit (centered convention), final centered
    QFT, then the marginal ancilla distribution.
    """
    if abs(state.norm() - 1.0) > 1e-9:
        raise WqpeError("input state must be normalized")
    m = cfg.m
    joint = circuit.join_ancilla(state, m)
    joint = circuit.window_prep(joint, m, cfg.window)
    joint = circuit.controlled_powers(joint, u, m, u_eig=u_eig)
    joint = circuit.final_qft(joint, m)
    return OutcomeDistribution(m, circuit.ancilla_probabilities(joint, m))


def error_rate(t: int, p: int, delta2m: float, window: WindowKind) -> float:
    """Probability of landing outside the 2k-wide window around the nearest
    grid point, k = 2^(p-1): the exact two-sided tail sum of the filter."""
    if p < 1:
        raise WqpeError("error_rate needs p >= 1 so that k = 2^(p-1) >= 1")
    if abs(delta2m) > 0.5:
        raise WqpeError(f"delta2m must lie in [-1/2, 1/2], got {delta2m}")
    m = t + p
    if not 2 <= m <= MAX_FILTER_M:
        raise WqpeError(f"m = t + p = {m} outside supported range")
    k = 1 << (p - 1)
    return float(backend.error_tail_sum(float(delta2m), m, k, window.backend_id))


def min_extra_qubits(e_target: float, window: WindowKind) -> int:
    """Smallest p meeting a target error rate e."""
    if not 0.0 < e_target < 1.0:
        raise WqpeError("target error rate must lie in (0, 1)")
    if window is WindowKind.RECT:
        return math.ceil(math.log2(1.0 / (2.0 * e_target) + 0.5))
    arg = np.pi ** (2.0 / 3.0) / (48.0 ** (1.0 / 3.0) * e_target ** (1.0 / 3.0)) + 2.0
    return math.ceil(math.log2(arg))


def tail_bound_value(p: int) -> float:
    """Analytic cosine-window tail bound pi^2 / (48 (k-2)^3), k = 2^(p-1)."""
    k = 1 << (p - 1)
    if k <= 2:
        raise WqpeError("tail bound needs k = 2^(p-1) > 2, i.e. p >= 3")
    return np.pi**2 / (48.0 * (k - 2) ** 3)


def verify_tail_bound(
    t: int, p: int, window: WindowKind = WindowKind.COSINE, grid_points: int = 101
) -> tuple[float, float]:
    """Max error rate over a delta grid against the analytic bound.

    Returns (empirical maximum, bound) and raises if the bound is violated.
    """
    if window is not WindowKind.COSINE:
        raise WqpeError("the analytic tail bound is for the cosine window")
    bound = tail_bound_value(p)
    deltas = np.linspace(-0.5, 0.5, grid_points)
    empirical = max(error_rate(t, p, d, window) for d in deltas)
    if empirical > bound:
        raise WqpeError(f"tail bound violated: {empirical} > {bound}")
    return empirical, bound


def cbar_metric(cfg: QpeConfig, nodes: int = CBAR_NODES) -> float:
    """Mean of sin^2((theta - 2 pi z / 2^m)/2) over outcomes and a uniform
    phase; the figure of merit the cosine window optimizes."""
    if cfg.m > 12:
        raise WqpeError("cbar_metric supports m <= 12")
    return float(backend.cbar_quadrature(cfg.m, cfg.window.backend_id, nodes))
