"""Iterative projective ground-state preparation.

One round post-selects the all-zero ancilla outcome of a shifted
phase-estimation circuit, which multiplies each eigencomponent amplitude
by gamma_i = filter(2^m (theta0_est - theta_i)); r rounds suppress
excited components like gamma_i^r.  The eigenbasis path is exact and
fast; the circuit path simulates the full ancilla register and is used
to validate it.

Bound calculators evaluate the closed-form iteration/precision estimates
with all O/Omega/Theta constants set to 1; empirical runs are the ground
truth, the calculators are advisory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import circuit
from .errors import (
    AliasingError,
    DegenerateGroundStateError,
    FilteredToNothingError,
    GapTooSmallError,
    ScanFailedError,
    WqpeError,
    ZeroOverlapError,
)
from .statevector import (
    EigenDecomposition,
    HermitianOperator,
    QuantumState,
    UnitaryOperator,
    eig_hermitian,
)
from .windows import WindowKind, prep_filter

SCALED_SPECTRUM_HALF_WIDTH = 1.0 / 192.0


def lambda_shift_policy(
    energies: np.ndarray, half_width: float = SCALED_SPECTRUM_HALF_WIDTH
) -> tuple[float, float]:
    """Scale lambda and offset shift placing lambda*(E + shift) in
    [-half_width, half_width].

    Centering keeps step-unitary eigenphases far from the log branch cut
    and leaves headroom for the estimate phase shift.  The narrow default
    keeps one round's filter suppression at a decade or two, so
    multi-round error curves decay over several resolvable decades at the
    default m = 8 instead of crashing into the double-precision floor
    after a round or two (wider scalings make the cosine filter
    unmeasurably strong on small chains).
    """
    if not 0.0 < half_width < 0.5:
        raise WqpeError("half_width must lie in (0, 1/2)")
    e = np.asarray(energies, dtype=np.float64)
    e_min, e_max = float(e.min()), float(e.max())
    width = e_max - e_min
    shift = -(e_max + e_min) / 2.0
    if width < 1e-12:
        return half_width, shift
    return 2.0 * half_width / width, shift


@dataclass(frozen=True)
class PrepConfig:
    """Inputs of the iterative preparation.

    theta0_est is the ground-phase estimate (turns), xi its precision,
    lam/shift the scaling applied to eigenvalues: theta_i = lam*(E_i + shift).
    """

    m: int
    window: WindowKind
    r: int
    theta0_est: float
    xi: float
    lam: float
    shift: float = 0.0

    def __post_init__(self):
        if not 1 <= self.m <= 14:
            raise WqpeError(f"need 1 <= m <= 14, got {self.m}")
        if self.r < 0:
            raise WqpeError("iteration count r must be >= 0")
        if self.xi < 0:
            raise WqpeError("xi must be >= 0")


@dataclass(frozen=True, eq=False)
class FilterCoefficients:
    """Per-eigenstate amplitudes gamma_i, index 0 = ground state."""

    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=np.complex128)
        object.__setattr__(self, "gamma", g)
        if np.any(np.abs(g) > 1.0 + 1e-12):
            raise WqpeError("filter coefficient magnitude above 1")


@dataclass(frozen=True)
class PrepIteration:
    r: int
    success_prob: float
    cumulative_prob: float
    epsilon: float
    rho: float
    tail_fraction: float
    observable: float | None = None


@dataclass(frozen=True, eq=False)
class PrepReport:
    overlap0: float
    iterations: list[PrepIteration]
    final_state: QuantumState


def scaled_phases(eigenvalues: np.ndarray, cfg: PrepConfig) -> np.ndarray:
    """theta_i = lam*(E_i + shift), validated against aliasing."""
    th = cfg.lam * (np.asarray(eigenvalues, dtype=np.float64) + cfg.shift)
    margin = 1.0 / (1 << (cfg.m + 1))
    if np.any(np.abs(th) > 0.5 - margin):
        raise AliasingError(
            f"scaled phases reach {np.max(np.abs(th)):.6f}, need |theta| <= "
            f"{0.5 - margin:.6f} for m = {cfg.m}"
        )
    return th


def filter_coefficients(eigphases: np.ndarray, cfg: PrepConfig) -> FilterCoefficients:
    """gamma_i from the window's preparation filter at offset
    2^m (theta0_est - theta_i)."""
    th = np.asarray(eigphases, dtype=np.float64)
    margin = 1.0 / (1 << (cfg.m + 1))
    if np.any(np.abs(th) > 0.5 - margin):
        raise AliasingError("eigenphases outside the non-aliasing range")
    offsets = (1 << cfg.m) * (cfg.theta0_est - th)
    return FilterCoefficients(prep_filter(offsets, cfg.m, cfg.window))


def apply_filter_eigen(
    state: QuantumState, h_eig: EigenDecomposition, cfg: PrepConfig
) -> tuple[QuantumState, float]:
    """One exact filter round in the eigenbasis; returns the renormalized
    state and the round's success probability."""
    th = scaled_phases(h_eig.eigenvalues, cfg)
    gam = filter_coefficients(th, cfg).gamma
    v = h_eig.eigenvectors
    coeffs = v.conj().T @ state.amplitudes
    coeffs = gam * coeffs
    prob = float(np.sum(np.abs(coeffs) ** 2))
    if prob < 1e-300:
        raise FilteredToNothingError("post-selection probability underflowed")
    out = v @ (coeffs / math.sqrt(prob))
    return QuantumState(state.n_qubits, out), prob


def apply_filter_circuit(
    state: QuantumState,
    u: UnitaryOperator,
    cfg: PrepConfig,
    u_eig: EigenDecomposition | None = None,
) -> tuple[QuantumState, float]:
    """One filter round through the full ancilla circuit.

    u must be e^{2 pi i lam (H + shift)}.  Window preparation, the
    R_phi(+-2 pi 2^j theta0_est) shift layer, controlled powers, centered
    QFT, the trailing LSB Hadamard for the cosine variant, then
    post-selection of the all-zero ancilla outcome.
    """
    if abs(state.norm() - 1.0) > 1e-9:
        raise WqpeError("input state must be normalized")
    m = cfg.m
    joint = circuit.join_ancilla(state, m)
    # The coherent binning replaces the centering phase layer here.
    joint = circuit.window_prep(joint, m, cfg.window, centering=False)
    joint = circuit.phase_shift_layer(joint, m, cfg.theta0_est)
    joint = circuit.controlled_powers(joint, u, m, u_eig=u_eig)
    joint = circuit.final_qft(joint, m)
    if cfg.window is WindowKind.COSINE:
        joint = circuit.hadamard_lsb(joint)
    amps, prob = circuit.postselect_all_zero(joint)
    if prob < 1e-300:
        raise FilteredToNothingError("post-selection probability underflowed")
    return QuantumState(state.n_qubits, amps / math.sqrt(prob)), prob


def phase_aligned_distance(a: QuantumState, b: QuantumState) -> float:
    """min over global phase of || |a> - e^{i alpha} |b> ||."""
    overlap = abs(np.vdot(a.amplitudes, b.amplitudes))
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap))


def run_preparation(
    initial: QuantumState,
    h: HermitianOperator,
    cfg: PrepConfig,
    observable: Callable[[QuantumState], float] | None = None,
) -> PrepReport:
    """Apply the filter cfg.r times (eigenbasis path), recording one row per
    round: success probability, cumulative P_r, oracle state error epsilon,
    relative success deficit rho, and the excited-amplitude fraction."""
    eig = eig_hermitian(h)
    v = eig.eigenvectors
    phi = v.conj().T @ initial.amplitudes
    overlap0 = float(abs(phi[0]))
    if overlap0 < 1e-12:
        raise ZeroOverlapError("initial state has no ground-state overlap")
    ground = QuantumState(initial.n_qubits, v[:, 0])

    rows: list[PrepIteration] = []
    state = initial
    cumulative = 1.0
    for it in range(1, cfg.r + 1):
        state, prob = apply_filter_eigen(state, eig, cfg)
        cumulative *= prob
        coeffs = v.conj().T @ state.amplitudes
        tail = float(np.linalg.norm(coeffs[1:]) / np.linalg.norm(coeffs))
        rows.append(
            PrepIteration(
                r=it,
                success_prob=prob,
                cumulative_prob=cumulative,
                epsilon=phase_aligned_distance(state, ground),
                rho=1.0 - cumulative / overlap0**2,
                tail_fraction=tail,
                observable=None if observable is None else float(observable(state)),
            )
        )
    return PrepReport(overlap0=overlap0, iterations=rows, final_state=state)


def residual_norm(gammas: FilterCoefficients, r: int) -> float:
    """Spectral norm of the excited-space residue after r rounds:
    max_{i != 0} |gamma_i|^r."""
    if r < 0:
        raise WqpeError("r must be >= 0")
    if r == 0:
        return 1.0
    mags = np.abs(gammas.gamma[1:])
    if mags.size == 0:
        return 0.0
    return float(np.max(mags) ** r)


def _denominator_argument(m: int, gap: float, window: WindowKind) -> float:
    if window is WindowKind.RECT:
        return float(2 ** (m + 1)) * gap
    inv = 2.0**-m
    return float(2 ** (3 * m + 3)) * gap * (gap + inv) * (gap - inv) / np.pi**2


def _log_ratio_pieces(epsilon: float, phi0: float, rho: float) -> float:
    if not 0.0 < epsilon:
        raise WqpeError("epsilon must be positive")
    if not 0.0 < phi0 <= 1.0:
        raise WqpeError("phi0 must lie in (0, 1]")
    if not 0.0 <= rho < 1.0:
        raise WqpeError("rho must lie in [0, 1)")
    target = 1.0 / (epsilon * phi0 * math.sqrt(1.0 - rho))
    return math.log(target)


def iteration_bound(
    epsilon: float, phi0: float, rho: float, m: int, gap: float, window: WindowKind
) -> float:
    """Iterations needed for state error epsilon at overlap phi0 and success
    deficit rho (constants set to 1)."""
    num = _log_ratio_pieces(epsilon, phi0, rho)
    den_arg = _denominator_argument(m, gap, window)
    if den_arg <= 1.0:
        raise GapTooSmallError(
            f"filter suppression requires denominator argument > 1, got {den_arg}"
        )
    return num / math.log(den_arg)


def precision_bound(
    epsilon: float, phi0: float, rho: float, m: int, gap: float, window: WindowKind
) -> float:
    """Required ground-energy precision xi (turns); bounding-parabola constant
    a = 1 for the rectangular window, 1/4 for the binned cosine."""
    a = 1.0 if window is WindowKind.RECT else 0.25
    den_log = _log_ratio_pieces(epsilon, phi0, rho)
    den_arg = _denominator_argument(m, gap, window)
    if den_arg <= 1.0:
        raise GapTooSmallError(
            f"filter suppression requires denominator argument > 1, got {den_arg}"
        )
    ln_rho = math.log(1.0 / (1.0 - rho))
    return math.sqrt((1.0 / a) * (math.log(den_arg) / den_log) * ln_rho) / (1 << m)


@dataclass(frozen=True)
class ScanResult:
    theta0_est: float
    threshold: float
    trace: list[tuple[float, float]] = field(repr=False)


def ground_energy_scan(
    initial: QuantumState,
    h: HermitianOperator,
    cfg: PrepConfig,
    xi_step: float,
    threshold: float | None = None,
) -> ScanResult:
    """Sweep theta0_est upward from -1/2 in xi_step increments, one exact
    filter round each; stop at the first estimate whose success probability
    clears the threshold (default: half the ground overlap probability)."""
    if xi_step <= 0:
        raise WqpeError("xi_step must be positive")
    eig = eig_hermitian(h)
    th = scaled_phases(eig.eigenvalues, cfg)
    phi = eig.eigenvectors.conj().T @ initial.amplitudes
    if threshold is None:
        threshold = float(abs(phi[0]) ** 2) / 2.0
    trace: list[tuple[float, float]] = []
    est = -0.5
    while est < 0.5:
        gam = filter_coefficients(th, replace(cfg, theta0_est=est)).gamma
        prob = float(np.sum(np.abs(gam * phi) ** 2))
        trace.append((est, prob))
        if prob > threshold:
            return ScanResult(theta0_est=est, threshold=threshold, trace=trace)
        est += xi_step
    raise ScanFailedError(
        f"no estimate in [-1/2, 1/2) cleared the threshold {threshold:.3e}"
    )


def perturbation_error_bound(
    h: HermitianOperator, h_tilde: HermitianOperator, lam: float
) -> float:
    """First-order bound lam ||h_tilde - h||_2 / Delta on the phase-aligned
    ground-state distance, Delta = lam * (E_1 - E_0) of h."""
    w = np.linalg.eigvalsh(h.entries)
    gap = float(w[1] - w[0])
    if gap < 1e-10:
        raise DegenerateGroundStateError("ground state of h is (nearly) degenerate")
    diff = float(np.linalg.norm(h_tilde.entries - h.entries, 2))
    return lam * diff / (lam * gap)


def ground_state_distance(h: HermitianOperator, h_tilde: HermitianOperator) -> float:
    """Oracle companion of perturbation_error_bound: the true phase-aligned
    distance between the two ground states."""
    _, v = np.linalg.eigh(h.entries)
    _, vt = np.linalg.eigh(h_tilde.entries)
    overlap = abs(np.vdot(v[:, 0], vt[:, 0]))
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap))


@dataclass(frozen=True)
class SuccessRateRecord:
    p_r: float
    phi0_sq: float
    rho: float
    eps_sq: float
    gamma0_pow: float
    pr_below_overlap: bool
    gamma_rho_consistent: bool

    @property
    def ok(self) -> bool:
        return self.pr_below_overlap and self.gamma_rho_consistent


def success_rate_relations_check(
    gammas: FilterCoefficients, phi: np.ndarray, r: int
) -> SuccessRateRecord:
    """Exact P_r, rho and eps^2 with the consistency relations
    P_r <= |phi_0|^2 and |gamma_0|^{2r} <= (1 - rho)(1 + 10 eps^2)."""
    phi = np.asarray(phi, dtype=np.complex128)
    g = np.abs(gammas.gamma) ** (2 * r)
    weights = np.abs(phi) ** 2 * g
    p_r = float(weights.sum())
    phi0_sq = float(abs(phi[0]) ** 2)
    if phi0_sq == 0.0:
        raise ZeroOverlapError("phi has no ground-state component")
    rho = 1.0 - p_r / phi0_sq
    eps_sq = float(weights[1:].sum() / p_r) if p_r > 0 else math.inf
    gamma0_pow = float(abs(gammas.gamma[0]) ** (2 * r))
    return SuccessRateRecord(
        p_r=p_r,
        phi0_sq=phi0_sq,
        rho=rho,
        eps_sq=eps_sq,
        gamma0_pow=gamma0_pow,
        pr_below_overlap=p_r <= phi0_sq + 1e-12,
        gamma_rho_consistent=gamma0_pow <= (1.0 - rho) * (1.0 + 10.0 * eps_sq) + 1e-12,
    )
