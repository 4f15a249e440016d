import math

import numpy as np
import pytest

from wqpe import (
    AnsatzParams,
    HermitianOperator,
    QuantumState,
    ThirringParams,
    TrotterConfig,
    build_hamiltonian,
    chiral_condensate,
    diagonal_ground_reference,
    effective_hamiltonian,
    eig_hermitian,
    expi_hermitian,
    lambda_shift_policy,
    optimize_overlap,
    sigma_chi,
    suzuki2_step,
    variational_state,
)
from wqpe.errors import WqpeError

Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _shifted_system(sites=4, d=1):
    terms = build_hamiltonian(ThirringParams(sites, 1.0, 0.5))
    evals = np.linalg.eigvalsh(terms.total.entries)
    lam, shift = lambda_shift_policy(evals)
    return terms.shifted(shift), lam


# --- Hamiltonian construction ----------------------------------------------


def test_params_validation():
    with pytest.raises(WqpeError):
        ThirringParams(3)
    with pytest.raises(WqpeError):
        ThirringParams(14)


def test_n2_massive_ground_energy():
    terms = build_hamiltonian(ThirringParams(2, mass=1.0, coupling=0.0))
    evals = np.linalg.eigvalsh(terms.total.entries)
    assert evals[0] == pytest.approx(-math.sqrt(5) / 2, abs=1e-12)


def test_n2_massless_spectrum():
    terms = build_hamiltonian(ThirringParams(2, mass=0.0, coupling=0.0))
    evals = np.linalg.eigvalsh(terms.total.entries)
    assert np.allclose(evals, [-0.5, 0.0, 0.0, 0.5], atol=1e-12)


def test_term_split_sums_to_total():
    terms = build_hamiltonian(ThirringParams(6))
    total = (
        terms.even_hopping.entries + terms.odd_hopping.entries + terms.diagonal.entries
    )
    assert np.max(np.abs(total - terms.total.entries)) < 1e-14


def test_term_split_bond_assignment():
    terms = build_hamiltonian(ThirringParams(4))
    # per bond: 4 spectator configs x 2 hop directions = 8 nonzero entries;
    # even bonds (0,1), (2,3) -> 16, odd bond (1,2) -> 8
    assert np.count_nonzero(terms.even_hopping.entries) == 16
    assert np.count_nonzero(terms.odd_hopping.entries) == 8
    off_diag = terms.diagonal.entries - np.diag(np.diag(terms.diagonal.entries))
    assert np.max(np.abs(off_diag)) == 0.0


def test_magnetization_conserved():
    terms = build_hamiltonian(ThirringParams(6))
    n = 6
    sz = np.zeros((1 << n, 1 << n), dtype=complex)
    idx = np.arange(1 << n)
    diag = np.zeros(1 << n)
    for j in range(n):
        diag += 0.5 * (1.0 - 2.0 * ((idx >> j) & 1))
    sz = np.diag(diag.astype(complex))
    comm = terms.total.entries @ sz - sz @ terms.total.entries
    assert np.max(np.abs(comm)) < 1e-12


# --- Trotter stepping --------------------------------------------------------


def test_suzuki2_commuting_terms_exact():
    # diagonal-only split: all layers commute, so the step is exact
    diag = np.diag(np.array([0.3, -0.1, 0.2, 0.05], dtype=complex))
    terms = build_hamiltonian(ThirringParams(2, mass=0.7, coupling=0.3))
    from wqpe.thirring import ThirringTerms

    commuting = ThirringTerms(
        sites=2,
        total=HermitianOperator(diag),
        even_hopping=HermitianOperator(0.5 * diag),
        odd_hopping=HermitianOperator(np.zeros_like(diag)),
        diagonal=HermitianOperator(0.5 * diag),
    )
    cfg = TrotterConfig(d=1, lam=0.2)
    u = suzuki2_step(commuting, cfg)
    exact = expi_hermitian(HermitianOperator(diag), cfg.dt)
    assert np.max(np.abs(u.entries - exact.entries)) < 1e-12


def test_suzuki2_one_step_error_third_order():
    shifted, lam = _shifted_system()
    h = shifted.total
    errs = []
    for d in (1, 2):
        cfg = TrotterConfig(d=d, lam=lam)
        u = suzuki2_step(shifted, cfg)
        exact = expi_hermitian(h, cfg.dt)
        errs.append(np.linalg.norm(u.entries - exact.entries, 2))
    ratio = errs[0] / errs[1]
    assert 6.0 <= ratio <= 10.0  # halving dt cuts one-step error ~8x


def test_suzuki2_palindrome():
    shifted, lam = _shifted_system()
    cfg = TrotterConfig(d=2, lam=lam)
    half = cfg.dt / 2
    ua = shifted.layer_unitary(0, half)
    ub = shifted.layer_unitary(1, half)
    uc = shifted.layer_unitary(2, cfg.dt)
    forward = ua @ ub @ uc @ ub @ ua
    reversed_order = ua @ ub @ uc @ ub @ ua  # its own reverse
    assert np.max(np.abs(forward - reversed_order)) == 0.0
    assert np.max(np.abs(forward - suzuki2_step(shifted, cfg).entries)) < 1e-14


def test_trotter_config_invariant():
    cfg = TrotterConfig(d=3, lam=0.05)
    assert cfg.d * cfg.dt == pytest.approx(2 * np.pi * 0.05, abs=1e-14)
    with pytest.raises(WqpeError):
        TrotterConfig(d=0, lam=0.1)


# --- effective Hamiltonian ---------------------------------------------------


def test_effective_hamiltonian_roundtrip():
    shifted, lam = _shifted_system()
    d = 2
    u = suzuki2_step(shifted, TrotterConfig(d=d, lam=lam))
    h_eff = effective_hamiltonian(u, d, lam)
    back = expi_hermitian(h_eff, 2 * np.pi * lam / d)
    assert np.max(np.abs(back.entries - u.entries)) < 1e-9


def test_effective_hamiltonian_commuting_exact():
    diag = np.diag(np.array([0.3, -0.1, 0.2, 0.05], dtype=complex))
    from wqpe.thirring import ThirringTerms

    commuting = ThirringTerms(
        sites=2,
        total=HermitianOperator(diag),
        even_hopping=HermitianOperator(0.5 * diag),
        odd_hopping=HermitianOperator(np.zeros_like(diag)),
        diagonal=HermitianOperator(0.5 * diag),
    )
    u = suzuki2_step(commuting, TrotterConfig(d=1, lam=0.2))
    h_eff = effective_hamiltonian(u, 1, 0.2)
    assert np.max(np.abs(h_eff.entries - diag)) < 1e-12


def test_effective_hamiltonian_second_order():
    shifted, lam = _shifted_system()
    errs = {}
    for d in (1, 2, 4, 8):
        u = suzuki2_step(shifted, TrotterConfig(d=d, lam=lam))
        h_eff = effective_hamiltonian(u, d, lam)
        errs[d] = np.linalg.norm(h_eff.entries - shifted.total.entries, 2)
    slopes = []
    for d in (1, 2, 4):
        assert 3.0 <= errs[d] / errs[2 * d] <= 5.0
        slopes.append(np.log2(errs[d] / errs[2 * d]))
    assert abs(np.mean(slopes) - 2.0) <= 0.3  # log-log slope vs dt


# --- chiral condensate --------------------------------------------------------


def test_chiral_condensate_values():
    chi = chiral_condensate(2)
    # site 0 down, site 1 up -> index 1 (qubit 0 = site 0)
    assert chi.entries[1, 1].real == pytest.approx(1.0)
    assert chi.entries[0, 0].real == pytest.approx(0.0)  # both up
    diag = np.real(np.diag(chi.entries))
    assert np.max(np.abs(chi.entries - np.diag(diag))) == 0.0  # strictly diagonal
    assert np.all(diag >= -1.0) and np.all(diag <= 1.0)


def test_sigma_chi_eigenstate_is_stationary():
    shifted, lam = _shifted_system()
    d = 1
    u = suzuki2_step(shifted, TrotterConfig(d=d, lam=lam))
    h_eff = effective_hamiltonian(u, d, lam)
    eig = eig_hermitian(h_eff)
    state = QuantumState(4, eig.eigenvectors[:, 0])
    for n_samples in (2, 17, 50):
        _, sigma = sigma_chi(state, u, n_samples)
        assert sigma < 1e-10


def test_sigma_chi_requires_samples():
    shifted, lam = _shifted_system()
    u = suzuki2_step(shifted, TrotterConfig(d=1, lam=lam))
    with pytest.raises(WqpeError):
        sigma_chi(diagonal_ground_reference(shifted), u, 1)


# --- variational warm start ----------------------------------------------------


def test_variational_zero_angles_is_reference(rng):
    terms = build_hamiltonian(ThirringParams(4))
    ref = diagonal_ground_reference(terms)
    out = variational_state(AnsatzParams.zeros(3), terms, ref)
    assert out.fidelity(ref) == pytest.approx(1.0, abs=1e-12)


def test_variational_single_layer_phase_only():
    terms = build_hamiltonian(ThirringParams(4))
    eig = eig_hermitian(terms.even_hopping)
    ref = QuantumState(4, eig.eigenvectors[:, 0])
    params = AnsatzParams(alphas=[0.7], betas=[0.0], gammas=[0.0])
    out = variational_state(params, terms, ref)
    assert out.fidelity(ref) == pytest.approx(1.0, abs=1e-12)


def test_optimize_n2_reaches_ground_energy():
    terms = build_hamiltonian(ThirringParams(2))
    ref = diagonal_ground_reference(terms)
    result = optimize_overlap(terms, 2, ref, seed=7)
    exact = float(np.linalg.eigvalsh(terms.total.entries)[0])
    assert result.energy <= exact + 1e-3


def test_optimize_improves_overlap_n4():
    terms = build_hamiltonian(ThirringParams(4, 1.0, 0.5))
    ref = diagonal_ground_reference(terms)
    eig = eig_hermitian(terms.total)
    ref_overlap = abs(np.vdot(eig.eigenvectors[:, 0], ref.amplitudes))
    result = optimize_overlap(terms, 2, ref, seed=7)
    assert result.overlap > ref_overlap
    assert result.energy <= float(
        np.real(np.vdot(ref.amplitudes, terms.total.entries @ ref.amplitudes))
    )


def test_optimize_deterministic():
    terms = build_hamiltonian(ThirringParams(4))
    ref = diagonal_ground_reference(terms)
    a = optimize_overlap(terms, 2, ref, seed=11)
    b = optimize_overlap(terms, 2, ref, seed=11)
    assert np.array_equal(a.params.flat(), b.params.flat())
    assert a.energy == b.energy


def test_sigma_chi_decays_with_filter_rounds():
    from wqpe import PrepConfig, WindowKind, run_preparation

    terms = build_hamiltonian(ThirringParams(4, 1.0, 0.5))
    evals = np.linalg.eigvalsh(terms.total.entries)
    lam, shift = lambda_shift_policy(evals)
    shifted = terms.shifted(shift)
    u_step = suzuki2_step(shifted, TrotterConfig(d=1, lam=lam))
    h_eff = effective_hamiltonian(u_step, 1, lam)
    theta0 = lam * float(np.linalg.eigvalsh(h_eff.entries)[0])
    res = optimize_overlap(terms, 2, diagonal_ground_reference(terms), seed=7)
    init = variational_state(res.params, terms, diagonal_ground_reference(terms))
    sigmas = {}
    for wk in (WindowKind.RECT, WindowKind.COSINE):
        cfg = PrepConfig(
            m=8, window=wk, r=4, theta0_est=theta0 - 2.0**-10, xi=2.0**-10, lam=lam
        )
        rep = run_preparation(
            init, h_eff, cfg, observable=lambda st: sigma_chi(st, u_step, 50)[1]
        )
        sigmas[wk] = [it.observable for it in rep.iterations]
    assert sigmas[WindowKind.COSINE][3] < sigmas[WindowKind.COSINE][0]
    for r_idx in (1, 2, 3):
        assert sigmas[WindowKind.COSINE][r_idx] <= sigmas[WindowKind.RECT][r_idx]
