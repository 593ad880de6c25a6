"""Dense complex linear algebra on qubit registers.

Matrices are plain ``numpy.ndarray`` of dtype complex128. Qubit 1 is the most
significant bit of a composite index and |up> is basis index 0, so
``kron(a, b)`` puts ``a`` on the lower-numbered qubit.
"""
from functools import reduce

import numpy as np

from .kernels import jacobi_eigh

HERMITIAN_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-12
DENSITY_EIG_TOL = 1e-10
CLAMP_TOL = 1e-10

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def kron(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, [np.asarray(o, dtype=np.complex128) for o in ops])


def n_qubits(m: np.ndarray) -> int:
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise ValueError("dimension %d is not a power of two" % dim)
    return n


def _check_square(m):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix, got shape %s" % (m.shape,))


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def is_density(m: np.ndarray) -> bool:
    """Hermitian, unit trace and no eigenvalue below -1e-10."""
    m = np.asarray(m)
    if not is_hermitian(m):
        return False
    if abs(np.trace(m) - 1.0) > DENSITY_TRACE_TOL:
        return False
    return herm_eig(m)[0][-1] >= -DENSITY_EIG_TOL


def partial_trace(m: np.ndarray, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep`` (0-based positions).

    The kept qubits stay in ascending order.
    """
    m = np.asarray(m, dtype=np.complex128)
    _check_square(m)
    n = n_qubits(m)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError("keep=%s out of range for %d qubits" % (keep, n))
    t = m.reshape([2] * (2 * n))
    rows = list(range(n))
    cols = list(range(n, 2 * n))
    for q in range(n):
        if q not in keep:
            cols[q] = rows[q]
    out = [rows[q] for q in keep] + [cols[q] for q in keep]
    d = 1 << len(keep)
    return np.einsum(t, rows + cols, out).reshape(d, d)


def partial_transpose(m: np.ndarray, qubits=(2, 3)) -> np.ndarray:
    """Transpose the tensor factor on ``qubits`` (0-based), default qubits 3 and 4."""
    m = np.asarray(m, dtype=np.complex128)
    _check_square(m)
    n = n_qubits(m)
    perm = list(range(2 * n))
    for q in qubits:
        if q < 0 or q >= n:
            raise ValueError("qubit %d out of range" % q)
        perm[q], perm[n + q] = perm[n + q], perm[q]
    return m.reshape([2] * (2 * n)).transpose(perm).reshape(m.shape)


def herm_eig(m: np.ndarray, tol: float = 1e-10):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi.

    Returns
    -------
    w : ndarray
        Real eigenvalues, descending.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    m = np.asarray(m, dtype=np.complex128)
    _check_square(m)
    asym = np.max(np.abs(m - m.conj().T), initial=0.0)
    if asym > tol:
        raise ValueError("matrix is not Hermitian (max |M - M^H| = %.3g)" % asym)
    return jacobi_eigh(0.5 * (m + m.conj().T))


def eigvals_desc(m: np.ndarray) -> np.ndarray:
    return herm_eig(m)[0]


def clamp_eigenvalues(w: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero out eigenvalues in [-tol, 0]; anything more negative is an error."""
    if w.size and w.min() < -tol:
        raise ValueError("eigenvalue %.3g below -%.0e" % (w.min(), tol))
    return np.where(w < 0.0, 0.0, w)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = herm_eig(m)
    w = clamp_eigenvalues(w)
    return (v * np.sqrt(w)) @ v.conj().T


def complete_isometry(v: np.ndarray, skip_tol: float = 1e-8, tol: float = 1e-10) -> np.ndarray:
    """Extend orthonormal columns to a unitary by Gram-Schmidt on the canonical basis.

    The leading columns of the result are ``v`` itself, unchanged.
    """
    v = np.asarray(v, dtype=np.complex128)
    dim, k = v.shape
    gram = v.conj().T @ v
    if np.max(np.abs(gram - np.eye(k))) > tol:
        raise ValueError("input columns are not orthonormal within %.0e" % tol)
    basis = [v[:, j] for j in range(k)]
    for e in range(dim):
        if len(basis) == dim:
            break
        cand = np.zeros(dim, dtype=np.complex128)
        cand[e] = 1.0
        # two passes of modified Gram-Schmidt
        for _ in range(2):
            for b in basis:
                cand = cand - (b.conj() @ cand) * b
        norm = np.linalg.norm(cand)
        if norm < skip_tol:
            continue
        basis.append(cand / norm)
    u = np.column_stack(basis)
    u[:, :k] = v
    return u


def ket(*bits) -> np.ndarray:
    """Computational basis vector |b1 b2 ...>, qubit 1 first."""
    idx = 0
    for b in bits:
        idx = 2 * idx + int(b)
    out = np.zeros(1 << len(bits), dtype=np.complex128)
    out[idx] = 1.0
    return out


def projector(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.complex128)
    return np.outer(vec, vec.conj())
