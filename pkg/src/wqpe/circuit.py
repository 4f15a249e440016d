"""Ancilla-register plumbing shared by the phase-estimation and
preparation circuits.

The joint state of m ancilla qubits and an n-qubit system is held as a
(2^m, 2^n) matrix whose row index is the ancilla storage index y; the
physical ancilla label is x(y) from statevector.centered_labels.
"""

from __future__ import annotations

import numpy as np

from .errors import AmplitudeCapError, DimensionMismatchError
from .statevector import (
    EigenDecomposition,
    QuantumState,
    UnitaryOperator,
    amplitude_cap,
    centered_labels,
    centered_qft,
    sorted_label_permutation,
)
from .windows import WindowKind


def join_ancilla(state: QuantumState, m: int) -> np.ndarray:
    total = (1 << m) * state.dim
    cap = amplitude_cap()
    if total > cap:
        raise AmplitudeCapError(
            f"joint register needs {total} amplitudes, above the cap {cap}"
        )
    joint = np.zeros((1 << m, state.dim), dtype=np.complex128)
    joint[0, :] = state.amplitudes
    return joint


def hadamard_lsb(joint: np.ndarray) -> np.ndarray:
    """Hadamard on the least significant ancilla qubit (row pairs 2i, 2i+1)."""
    out = np.empty_like(joint)
    out[0::2] = (joint[0::2] + joint[1::2]) / np.sqrt(2.0)
    out[1::2] = (joint[0::2] - joint[1::2]) / np.sqrt(2.0)
    return out


def window_prep(
    joint: np.ndarray, m: int, kind: WindowKind, centering: bool = True
) -> np.ndarray:
    """Take |0>_a to the window distribution (inverse centered QFT; the
    cosine window adds the leading LSB Hadamard and, unless the caller
    bins outcomes coherently instead, the centering phase layer)."""
    qinv = centered_qft(m, inverse=True).entries
    if kind is WindowKind.RECT:
        return qinv @ joint
    joint = qinv @ hadamard_lsb(joint)
    if not centering:
        return joint
    xs = centered_labels(m)
    phases = np.exp(-1j * np.pi * xs / (1 << m))
    return joint * phases[:, None]


def phase_shift_layer(joint: np.ndarray, m: int, theta0: float) -> np.ndarray:
    """Single-qubit phase gates whose net effect is e^{-2 pi i theta0 x(y)}."""
    xs = centered_labels(m)
    return joint * np.exp(-2j * np.pi * theta0 * xs)[:, None]


def controlled_powers(
    joint: np.ndarray,
    u: UnitaryOperator,
    m: int,
    u_eig: EigenDecomposition | None = None,
) -> np.ndarray:
    """Apply u^{x(y)} to the system register of each ancilla branch.

    Default path mirrors circuit cost: controlled-u applied 2^j times per
    control qubit j (2^m - 1 applications total, conjugate on the top
    qubit).  With u_eig supplied, phases are applied in u's eigenbasis.
    """
    if u.dim != joint.shape[1]:
        raise DimensionMismatchError(
            f"unitary dim {u.dim} != system dim {joint.shape[1]}"
        )
    M = joint.shape[0]
    if u_eig is not None:
        xs = centered_labels(m).astype(np.float64)
        phases = np.angle(u_eig.eigenvalues)
        v = u_eig.eigenvectors
        coeffs = joint @ v.conj()
        coeffs *= np.exp(1j * np.outer(xs, phases))
        return coeffs @ v.T
    out = joint.copy()
    ys = np.arange(M)
    ut = u.entries.T
    ut_dag = u.entries.conj()  # (U^dagger)^T
    for j in range(m - 1):
        mask = (ys >> j) & 1 == 1
        block = out[mask]
        for _ in range(1 << j):
            block = block @ ut
        out[mask] = block
    mask = (ys >> (m - 1)) & 1 == 1
    block = out[mask]
    for _ in range(1 << (m - 1)):
        block = block @ ut_dag
    out[mask] = block
    return out


def final_qft(joint: np.ndarray, m: int) -> np.ndarray:
    return centered_qft(m).entries @ joint


def ancilla_probabilities(joint: np.ndarray, m: int) -> np.ndarray:
    """Marginal ancilla distribution in ascending-label order."""
    probs = np.sum(np.abs(joint) ** 2, axis=1)
    return probs[sorted_label_permutation(m)]


def postselect_all_zero(joint: np.ndarray) -> tuple[np.ndarray, float]:
    """Project onto the all-zero ancilla outcome; returns (system amplitudes,
    success probability), amplitudes not yet renormalized."""
    row = joint[0, :].copy()
    return row, float(np.sum(np.abs(row) ** 2))
