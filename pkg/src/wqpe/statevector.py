"""Dense complex linear algebra: states, unitaries, eigensolvers, centered QFT.

Conventions used throughout the package:

* qubit 0 is the least significant bit of a state index;
* the "almost-centered" ancilla labels are x(y) = y for y < 2^(m-1) and
  x(y) = y - 2^m otherwise, so the stored matrix of the centered transform
  coincides entrywise with the standard DFT matrix (only labels move);
* storage is dense, capped at WQPE_MAX_AMPLITUDES entries per object
  (default 2^26).
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    AmplitudeCapError,
    BranchCutError,
    DimensionMismatchError,
    NotHermitianError,
    NotUnitaryError,
    WqpeError,
)

DEFAULT_AMPLITUDE_CAP = 2**26

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
BRANCH_CUT_TOL = 1e-9


def amplitude_cap() -> int:
    """Dense-storage entry cap; override with env WQPE_MAX_AMPLITUDES."""
    raw = os.environ.get("WQPE_MAX_AMPLITUDES", "")
    return int(raw) if raw.strip() else DEFAULT_AMPLITUDE_CAP


def _check_cap(n_entries: int, what: str) -> None:
    cap = amplitude_cap()
    if n_entries > cap:
        raise AmplitudeCapError(
            f"{what} needs {n_entries} complex entries, above the cap {cap} "
            "(raise WQPE_MAX_AMPLITUDES to override)"
        )


def _frozen_array(obj, field: str, value, dtype) -> np.ndarray:
    arr = np.array(value, dtype=dtype)
    arr.setflags(write=False)
    object.__setattr__(obj, field, arr)
    return arr


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Amplitude vector over n_qubits qubits, treated as immutable."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen_array(self, "amplitudes", self.amplitudes, np.complex128)
        if self.n_qubits < 0:
            raise WqpeError("n_qubits must be non-negative")
        dim = 1 << self.n_qubits
        _check_cap(dim, f"{self.n_qubits}-qubit state")
        if amps.shape != (dim,):
            raise DimensionMismatchError(
                f"expected {dim} amplitudes for {self.n_qubits} qubits, got {amps.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "QuantumState":
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "QuantumState":
        n = self.norm()
        if n == 0.0:
            raise WqpeError("cannot normalize the zero state")
        return QuantumState(self.n_qubits, self.amplitudes / n)

    def fidelity(self, other: "QuantumState") -> float:
        """|<self|other>|^2 (global phase dropped)."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    entries: np.ndarray

    def __post_init__(self):
        h = _frozen_array(self, "entries", self.entries, np.complex128)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {h.shape}")
        _check_cap(h.size, "Hermitian operator")
        dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
        if dev > HERMITIAN_TOL:
            raise NotHermitianError(f"max |H - H^dag| = {dev:.3e} > {HERMITIAN_TOL}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    entries: np.ndarray

    def __post_init__(self):
        u = _frozen_array(self, "entries", self.entries, np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {u.shape}")
        _check_cap(u.size, "unitary operator")
        dev = u @ u.conj().T - np.eye(u.shape[0])
        # Frobenius bounds the spectral norm from above, so most checks are cheap.
        frob = float(np.linalg.norm(dev))
        if frob > UNITARY_TOL:
            spectral = float(np.linalg.norm(dev, 2))
            if spectral > UNITARY_TOL:
                raise NotUnitaryError(f"||U U^dag - I||_2 = {spectral:.3e} > {UNITARY_TOL}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "UnitaryOperator":
        return UnitaryOperator(self.entries.conj().T)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues (real for Hermitian input, unit-modulus for unitary) and
    column-orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def apply_unitary(state: QuantumState, u: UnitaryOperator) -> QuantumState:
    if u.dim != state.dim:
        raise DimensionMismatchError(f"unitary dim {u.dim} != state dim {state.dim}")
    return QuantumState(state.n_qubits, u.entries @ state.amplitudes)


def eig_hermitian(h: HermitianOperator) -> EigenDecomposition:
    """Exact-diagonalization oracle: ascending eigenvalues, orthonormal vectors."""
    w, v = np.linalg.eigh(h.entries)
    return EigenDecomposition(w, v)


def eig_unitary(u: UnitaryOperator) -> EigenDecomposition:
    """Unitary eigendecomposition via complex Schur (orthonormal vectors even
    for degenerate eigenvalues). Eigenvalues sorted by phase angle."""
    t, z = scipy.linalg.schur(u.entries, output="complex")
    lam = np.diag(t)
    order = np.argsort(np.angle(lam), kind="stable")
    return EigenDecomposition(lam[order], z[:, order])


def centered_labels(m: int) -> np.ndarray:
    """Ancilla label x(y) for each storage index y = 0..2^m-1."""
    M = 1 << m
    ys = np.arange(M)
    return np.where(ys < M // 2, ys, ys - M)


def sorted_label_permutation(m: int) -> np.ndarray:
    """Permutation taking storage (y) order to ascending-label order."""
    M = 1 << m
    return np.concatenate([np.arange(M // 2, M), np.arange(0, M // 2)])


@functools.lru_cache(maxsize=32)
def centered_qft(m: int, inverse: bool = False) -> UnitaryOperator:
    """Almost-centered QFT on m qubits.

    Entries are e^{-2 pi i x q / 2^m} / sqrt(2^m) (conjugated when inverse)
    over labels x, q in [-2^(m-1), 2^(m-1)-1], stored in the y = 0..2^m-1
    order induced by the relabeling x(y).  Because x q = y_x y_q mod 2^m,
    the stored matrix equals the standard DFT matrix entrywise; the circuit
    is unchanged by the relabeling.
    """
    if not 1 <= m <= 14:
        raise WqpeError(f"centered_qft requires 1 <= m <= 14, got {m}")
    M = 1 << m
    _check_cap(M * M, f"2^{m} x 2^{m} QFT matrix")
    k = np.arange(M)
    w = np.exp(-2j * np.pi * np.outer(k, k) / M) / np.sqrt(M)
    if inverse:
        w = w.conj()
    return UnitaryOperator(w)


def expi_hermitian(h: HermitianOperator, scale: float) -> UnitaryOperator:
    """e^{i * scale * h} via eigendecomposition."""
    w, v = np.linalg.eigh(h.entries)
    phases = np.exp(1j * scale * w)
    return UnitaryOperator((v * phases) @ v.conj().T)


def principal_log_unitary(u: UnitaryOperator) -> HermitianOperator:
    """Hermitian L with e^{iL} = u and eigenvalues in (-pi, pi].

    Raises BranchCutError when any eigenphase sits within 1e-9 of the cut
    at -pi (equivalently +pi on the circle).
    """
    t, z = scipy.linalg.schur(u.entries, output="complex")
    phases = np.angle(np.diag(t))
    if np.any(np.abs(phases) > np.pi - BRANCH_CUT_TOL):
        worst = float(phases[np.argmax(np.abs(phases))])
        raise BranchCutError(
            f"eigenphase {worst:.12f} within {BRANCH_CUT_TOL} of the -pi branch cut"
        )
    log = (z * phases) @ z.conj().T
    return HermitianOperator((log + log.conj().T) / 2.0)
