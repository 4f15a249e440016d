import math

import numpy as np
import pytest

from wqpe import (
    HermitianOperator,
    QuantumState,
    UnitaryOperator,
    apply_unitary,
    centered_qft,
    eig_hermitian,
    eig_unitary,
    expi_hermitian,
    principal_log_unitary,
)
from wqpe.errors import (
    AmplitudeCapError,
    BranchCutError,
    DimensionMismatchError,
    NotHermitianError,
    NotUnitaryError,
)
from wqpe.statevector import centered_labels, sorted_label_permutation

from conftest import random_hermitian, random_state, random_unitary

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


# --- types and validation -------------------------------------------------


def test_state_shape_validation():
    with pytest.raises(DimensionMismatchError):
        QuantumState(2, np.ones(3))


def test_state_normalize():
    st = QuantumState(1, [3.0, 4.0]).normalize()
    assert abs(st.norm() - 1.0) < 1e-12


def test_hermitian_validation():
    with pytest.raises(NotHermitianError):
        HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_unitary_validation():
    with pytest.raises(NotUnitaryError):
        UnitaryOperator(np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_amplitude_cap_override(monkeypatch):
    monkeypatch.setenv("WQPE_MAX_AMPLITUDES", "8")
    with pytest.raises(AmplitudeCapError):
        QuantumState.basis(4, 0)
    QuantumState.basis(3, 0)  # exactly at the cap


# --- apply_unitary --------------------------------------------------------


def test_identity_application():
    st = QuantumState(1, [0.6, 0.8j])
    out = apply_unitary(st, UnitaryOperator(np.eye(2)))
    assert np.allclose(out.amplitudes, st.amplitudes)


def test_pauli_x_flips_basis():
    out = apply_unitary(QuantumState.basis(1, 0), UnitaryOperator(X))
    assert np.allclose(out.amplitudes, [0.0, 1.0])


def test_unitary_roundtrip_preserves_state(rng):
    u = UnitaryOperator(random_unitary(rng, 8))
    st = QuantumState(3, random_state(rng, 3))
    back = apply_unitary(apply_unitary(st, u), u.dagger())
    assert np.max(np.abs(back.amplitudes - st.amplitudes)) < 1e-12
    assert abs(back.norm() - 1.0) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply_unitary(QuantumState.basis(2, 0), UnitaryOperator(np.eye(2)))


# --- eig_hermitian --------------------------------------------------------


def test_eig_diagonal_sorted():
    eig = eig_hermitian(HermitianOperator(np.diag([3.0, 1.0, 2.0])))
    assert np.allclose(eig.eigenvalues, [1.0, 2.0, 3.0])


def test_eig_pauli_x():
    eig = eig_hermitian(HermitianOperator(X))
    assert np.allclose(eig.eigenvalues, [-1.0, 1.0])


def test_single_excitation_block_anchor():
    # hand-diagonalized 2x2 block [[1, -1/2], [-1/2, -1]]: eigenvalues +-sqrt(5)/2
    block = HermitianOperator(np.array([[1.0, -0.5], [-0.5, -1.0]]))
    eig = eig_hermitian(block)
    assert eig.eigenvalues[0] == pytest.approx(-math.sqrt(5) / 2, abs=1e-14)


def test_eig_reconstruction_invariant(rng):
    for _ in range(100):
        dim = int(rng.integers(2, 65))
        h = random_hermitian(rng, dim, scale=float(rng.uniform(0.1, 10)))
        eig = eig_hermitian(HermitianOperator(h))
        rebuilt = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.conj().T
        scale = max(np.linalg.norm(h, 2), 1e-300)
        assert np.linalg.norm(rebuilt - h, 2) < 1e-10 * scale
        assert np.all(np.diff(eig.eigenvalues) >= -1e-12)


# --- centered QFT ---------------------------------------------------------


def test_qft_m1_is_hadamard():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(centered_qft(1).entries, h, atol=1e-15)


def test_qft_inverse_pair():
    prod = centered_qft(6).entries @ centered_qft(6, inverse=True).entries
    assert np.max(np.abs(prod - np.eye(64))) < 1e-12


def test_qft_equals_standard_dft():
    m = 5
    M = 1 << m
    k = np.arange(M)
    dft = np.exp(-2j * np.pi * np.outer(k, k) / M) / np.sqrt(M)
    assert np.allclose(centered_qft(m).entries, dft, atol=1e-14)


def test_qft_label_permutation_reproduces_formula():
    # permuting rows/cols of the standard DFT by the relabel map must give
    # the matrix built directly from e^{-2 pi i x q / 2^m} over sorted labels
    m = 4
    M = 1 << m
    perm = sorted_label_permutation(m)
    permuted = centered_qft(m).entries[np.ix_(perm, perm)]
    xs = np.arange(-(M // 2), M // 2)
    direct = np.exp(-2j * np.pi * np.outer(xs, xs) / M) / np.sqrt(M)
    assert np.max(np.abs(permuted - direct)) < 1e-13


def test_qft_labels_roundtrip():
    labels = centered_labels(3)
    assert list(labels) == [0, 1, 2, 3, -4, -3, -2, -1]
    assert list(labels[sorted_label_permutation(3)]) == list(range(-4, 4))


@pytest.mark.parametrize("m", range(1, 11))
def test_qft_unitarity(m):
    u = centered_qft(m).entries
    dev = u @ u.conj().T - np.eye(1 << m)
    assert np.linalg.norm(dev, 2) < 1e-11


# --- matrix exponential / logarithm ---------------------------------------


def test_expi_zero_scale():
    h = HermitianOperator(Z)
    assert np.allclose(expi_hermitian(h, 0.0).entries, np.eye(2))


def test_expi_pauli_z_pi():
    u = expi_hermitian(HermitianOperator(Z), np.pi)
    assert np.allclose(u.entries, -np.eye(2), atol=1e-14)


def test_expi_composition(rng):
    h = HermitianOperator(random_hermitian(rng, 8))
    a, b = 0.37, -1.21
    lhs = expi_hermitian(h, a).entries @ expi_hermitian(h, b).entries
    rhs = expi_hermitian(h, a + b).entries
    assert np.max(np.abs(lhs - rhs)) < 1e-11


def test_log_identity():
    log = principal_log_unitary(UnitaryOperator(np.eye(4)))
    assert np.max(np.abs(log.entries)) < 1e-12


def test_log_diagonal_phases():
    u = UnitaryOperator(np.diag([np.exp(1j * np.pi / 3), np.exp(-1j * np.pi / 4)]))
    log = principal_log_unitary(u)
    assert np.allclose(np.diag(log.entries), [np.pi / 3, -np.pi / 4], atol=1e-12)


def test_log_recovers_generator(rng):
    h = random_hermitian(rng, 6)
    h *= 0.9 / np.linalg.norm(h, 2)
    u = expi_hermitian(HermitianOperator(h), 1.0)
    log = principal_log_unitary(u)
    assert np.max(np.abs(log.entries - h)) < 1e-9


def test_log_branch_cut_error():
    with pytest.raises(BranchCutError):
        principal_log_unitary(UnitaryOperator(np.diag([1.0, -1.0])))


def test_exp_log_roundtrip_away_from_cut(rng):
    for _ in range(20):
        dim = int(rng.integers(2, 12))
        h = random_hermitian(rng, dim)
        w, v = np.linalg.eigh(h)
        # squash eigenphases into (-pi + 0.1, pi - 0.1]
        w = (np.pi - 0.1) * np.tanh(w)
        u = UnitaryOperator((v * np.exp(1j * w)) @ v.conj().T)
        log = principal_log_unitary(u)
        back = expi_hermitian(log, 1.0)
        assert np.max(np.abs(back.entries - u.entries)) < 1e-9


def test_eig_unitary_reconstructs(rng):
    u = random_unitary(rng, 8)
    eig = eig_unitary(UnitaryOperator(u))
    rebuilt = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.conj().T
    assert np.max(np.abs(rebuilt - u)) < 1e-10
    assert np.allclose(np.abs(eig.eigenvalues), 1.0, atol=1e-12)
