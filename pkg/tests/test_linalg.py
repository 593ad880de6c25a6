import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entclone.linalg import (SIGMA_Y, clamp_eigenvalues, complete_isometry, herm_eig, is_density,
                             is_hermitian, ket, kron, partial_trace, partial_transpose, projector,
                             psd_sqrt)
from conftest import random_density, random_hermitian

seeds = st.integers(0, 2**32 - 1)
PHI_PLUS = (ket(0, 0) + ket(1, 1)) / np.sqrt(2)


def test_kron_identity_and_sigma_y():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    yy = kron(SIGMA_Y, SIGMA_Y)
    assert np.allclose(yy @ yy, np.eye(4), atol=1e-15)


def test_kron_places_first_operator_on_qubit_one():
    p0 = projector(ket(0))
    p1 = projector(ket(1))
    m = kron(p0, p1)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    assert np.array_equal(m, expected)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_kron_trace_multiplies(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b), atol=1e-10)


def test_partial_trace_product_state(rng):
    rho = random_density(rng, 4)
    sigma = random_density(rng, 4)
    assert np.allclose(partial_trace(kron(rho, sigma), (0, 1)), rho, atol=1e-14)
    assert np.allclose(partial_trace(kron(rho, 2 * sigma), (0, 1)), 2 * rho, atol=1e-14)
    assert np.allclose(partial_trace(kron(rho, sigma), (2, 3)), sigma, atol=1e-14)


def test_partial_trace_bell_marginal():
    assert np.allclose(partial_trace(projector(PHI_PLUS), (0,)), np.eye(2) / 2)


def test_partial_trace_non_adjacent_qubits(rng):
    a, b, c = (random_density(rng, 2) for _ in range(3))
    assert np.allclose(partial_trace(kron(a, b, c), (0, 2)), kron(a, c), atol=1e-14)


def test_partial_trace_of_input_state():
    psi = np.array([0.6, 0, 0, 0.8], dtype=complex)
    rho0 = kron(projector(psi), np.eye(4) / 4)
    assert np.allclose(partial_trace(rho0, (0, 1)), projector(psi), atol=1e-15)


def test_partial_trace_rejects_bad_keep():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2,))
    with pytest.raises(ValueError):
        partial_trace(np.eye(3), (0,))


def test_partial_transpose_product_and_involution(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = kron(a, b)
    assert np.allclose(partial_transpose(m), kron(a, b.T))
    assert np.array_equal(partial_transpose(partial_transpose(m)), m)


def test_partial_transpose_bell_spectrum():
    w, _ = herm_eig(partial_transpose(projector(PHI_PLUS), (1,)))
    assert np.allclose(w, [0.5, 0.5, 0.5, -0.5], atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_partial_transpose_does_not_change_kept_marginal(seed):
    rho = random_density(np.random.default_rng(seed), 16)
    assert np.allclose(partial_trace(partial_transpose(rho), (0, 1)), partial_trace(rho, (0, 1)),
                       atol=1e-14)


def test_herm_eig_examples():
    w, _ = herm_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(w, [3.0, 2.0, 1.0])
    w, _ = herm_eig(SIGMA_Y)
    assert np.allclose(w, [1, -1], atol=1e-15)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_herm_eig_residual_and_trace(seed):
    m = random_hermitian(np.random.default_rng(seed), 16)
    w, v = herm_eig(m)
    assert np.all(np.diff(w) <= 0)
    assert np.linalg.norm(m @ v - v * w) <= 1e-10 * np.linalg.norm(m)
    assert np.allclose(v.conj().T @ v, np.eye(16), atol=1e-12)
    assert abs(w.sum() - np.trace(m).real) <= 1e-10


def test_herm_eig_matches_lapack(rng):
    m = random_hermitian(rng, 64)
    assert np.allclose(herm_eig(m)[0], np.linalg.eigvalsh(m)[::-1], atol=1e-11)


def test_clamp_eigenvalues():
    assert np.array_equal(clamp_eigenvalues(np.array([1.0, -1e-12])), [1.0, 0.0])
    with pytest.raises(ValueError):
        clamp_eigenvalues(np.array([1.0, -1e-6]))


def test_psd_sqrt_examples(rng):
    assert np.allclose(psd_sqrt(np.eye(4)), np.eye(4))
    p = projector(ket(0, 1))
    assert np.allclose(psd_sqrt(4 * p), 2 * p, atol=1e-14)
    pure = projector(np.array([0.6, 0, 0, 0.8]))
    assert np.allclose(psd_sqrt(pure), pure, atol=1e-12)
    with pytest.raises(ValueError):
        psd_sqrt(-np.eye(2))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_psd_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    m = x.conj().T @ x
    r = psd_sqrt(m)
    assert is_hermitian(r, 1e-10)
    assert np.linalg.norm(r @ r - m) <= 1e-9 * max(1.0, np.linalg.norm(m))


def test_complete_isometry_from_basis_vectors():
    v = np.eye(64, dtype=complex)[:, :4]
    u = complete_isometry(v)
    assert np.array_equal(u[:, :4], v)
    assert np.linalg.norm(u.conj().T @ u - np.eye(64)) <= 1e-9


def test_complete_isometry_random_columns_kept_exactly(rng):
    z = rng.normal(size=(64, 4)) + 1j * rng.normal(size=(64, 4))
    v, _ = np.linalg.qr(z)
    u = complete_isometry(v)
    assert np.array_equal(u[:, :4], v)
    assert np.linalg.norm(u.conj().T @ u - np.eye(64)) <= 1e-9


def test_complete_isometry_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        complete_isometry(np.ones((64, 4)))


def test_is_density():
    assert is_density(np.eye(4) / 4)
    assert not is_density(np.eye(4) / 2)
    assert not is_density(np.diag([1.5, -0.5]))
