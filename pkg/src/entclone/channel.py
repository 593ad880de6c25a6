"""Physical realisation of the optimal copying map.

K = sqrt(A1) P_T (x) P_T + sqrt(A16) P_S (x) P_S acts on pairs (1,3) and
(2,4); the channel feeds the input on (1,2) together with a maximally mixed
(3,4) into K. Written out with four Kraus operators K_ij = K (1 (x) |i j>_34) / 2
it dilates to a unitary on six qubits, followed by an unread measurement of
the two ancillas.
"""
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import angular, cloner
from .linalg import complete_isometry, is_density, kron, ket, projector

COMPLETENESS_TOL = 1e-12
ISOMETRY_TOL = 1e-10

ANCILLA_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _pair_projectors():
    p_t = sum(np.outer(angular.coupled_state(1, m), angular.coupled_state(1, m).conj()) for m in (1, 0, -1))
    p_s = np.outer(angular.coupled_state(0, 0), angular.coupled_state(0, 0).conj())
    return p_t, p_s


def triplet_projector() -> np.ndarray:
    return _pair_projectors()[0]


def singlet_projector() -> np.ndarray:
    return _pair_projectors()[1]


def k_operator(alpha) -> np.ndarray:
    """sqrt(A1) P_T(1,3) P_T(2,4) + sqrt(A16) P_S(1,3) P_S(2,4) at the optimum for ``alpha``."""
    p = cloner.optimal_params(alpha)
    p_t, p_s = _pair_projectors()
    # principal roots; both coefficients are non-negative at the optimum
    return sqrt(p[1]) * angular.embed_pairs(p_t, p_t) + sqrt(p[16]) * angular.embed_pairs(p_s, p_s)


@dataclass(frozen=True)
class KrausSet:
    """Four 16x4 operators mapping a state of (1,2) to one of (1,2,3,4)."""

    operators: tuple = field(repr=False)
    alpha: float

    def completeness_residual(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - np.eye(4))))


def kraus_set(alpha) -> KrausSet:
    a = cloner.EntanglementClass(cloner._alpha_value(alpha)).alpha
    k = k_operator(a)
    ops = tuple(k @ np.kron(np.eye(4), ket(i, j)[:, None]) / 2.0 for i, j in ANCILLA_LABELS)
    ks = KrausSet(ops, a)
    res = ks.completeness_residual()
    if res > COMPLETENESS_TOL:
        raise RuntimeError("Kraus completeness violated by %.3g" % res)
    return ks


def _kraus_sum(ks: KrausSet, rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in ks.operators)


def apply_channel(ks: KrausSet, rho_in: np.ndarray) -> np.ndarray:
    rho_in = np.asarray(rho_in, dtype=np.complex128)
    if rho_in.shape != (4, 4) or not is_density(rho_in):
        raise ValueError("input must be a 4x4 density operator")
    return _kraus_sum(ks, rho_in)


def channel_map(alpha):
    """The optimal channel for ``alpha`` as a plain function rho(1,2) -> rho(1,2,3,4)."""
    ks = kraus_set(alpha)
    return lambda rho: _kraus_sum(ks, np.asarray(rho, dtype=np.complex128))


def choi_matrix(ks: KrausSet) -> np.ndarray:
    """sum_ab |a><b| (x) E(|a><b|), a 64x64 operator (input factor first)."""
    out = np.zeros((64, 64), dtype=np.complex128)
    for a in range(4):
        for b in range(4):
            unit = np.zeros((4, 4), dtype=np.complex128)
            unit[a, b] = 1.0
            out[16 * a:16 * a + 16, 16 * b:16 * b + 16] = _kraus_sum(ks, unit)
    return out


# ---------------------------------------------------------------------------
# dilation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dilation:
    """Isometry V (64x4) and a unitary U on qubits 1..6 with U|k>_12|0000>_3456 = V|k>.

    Ancillas are qubits 5 and 6 (least significant), read out in the
    computational basis.
    """

    isometry: np.ndarray = field(repr=False)
    unitary: np.ndarray = field(repr=False)
    alpha: float

    def isometry_residual(self) -> float:
        return float(np.max(np.abs(self.isometry.conj().T @ self.isometry - np.eye(4))))

    def unitarity_residual(self) -> float:
        return float(np.linalg.norm(self.unitary.conj().T @ self.unitary - np.eye(64)))

    def evolve(self, rho_in: np.ndarray) -> np.ndarray:
        """U (rho_in (x) |0000><0000|) U^dag on six qubits."""
        blank = projector(ket(0, 0, 0, 0))
        return self.unitary @ np.kron(rho_in, blank) @ self.unitary.conj().T

    def measure_and_discard(self, rho_in: np.ndarray) -> np.ndarray:
        """Evolve, project the ancillas on each |ij>, and sum the unnormalised branches."""
        big = self.evolve(np.asarray(rho_in, dtype=np.complex128))
        out = np.zeros((16, 16), dtype=np.complex128)
        for i, j in ANCILLA_LABELS:
            proj = np.kron(np.eye(16), ket(i, j)[:, None])  # 64x16, selects ancilla |ij>
            out += proj.conj().T @ big @ proj
        return out


def dilation(alpha) -> Dilation:
    ks = kraus_set(alpha)
    v = np.zeros((64, 4), dtype=np.complex128)
    for k_op, (i, j) in zip(ks.operators, ANCILLA_LABELS):
        v += np.kron(k_op, ket(i, j)[:, None])
    res = float(np.max(np.abs(v.conj().T @ v - np.eye(4))))
    if res > ISOMETRY_TOL:
        raise RuntimeError("dilation is not isometric (residual %.3g)" % res)
    completed = complete_isometry(v)
    # input |k>_12 |0000>_3456 has index 16k; the other columns keep their order
    inputs = [16 * k for k in range(4)]
    others = [c for c in range(64) if c not in inputs]
    u = np.empty_like(completed)
    u[:, inputs] = completed[:, :4]
    u[:, others] = completed[:, 4:]
    return Dilation(v, u, ks.alpha)


@dataclass(frozen=True)
class ChannelRealization:
    kraus: KrausSet
    dilation: Dilation


def realize(alpha) -> ChannelRealization:
    return ChannelRealization(kraus_set(alpha), dilation(alpha))


# ---------------------------------------------------------------------------
# covariance
# ---------------------------------------------------------------------------

def haar_su2(rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-random SU(2) element(s) from uniformly distributed unit quaternions."""
    shape = () if size is None else (int(size),)
    q = rng.standard_normal(shape + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    a, b, c, d = np.moveaxis(q, -1, 0)
    out = np.empty(shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = a + 1j * b
    out[..., 0, 1] = c + 1j * d
    out[..., 1, 0] = -c + 1j * d
    out[..., 1, 1] = a - 1j * b
    return out


def _check_unitary(u):
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-12:
        raise ValueError("expected a 2x2 unitary")
    return u


def covariance_defect(alpha, u1, u2, channel=None, rho_in=None) -> float:
    """|| T(u rho u^dag) - W T(rho) W^dag ||_F with u = u1 (x) u2, W = u1 (x) u2 (x) u1 (x) u2.

    ``channel`` defaults to the optimal map and ``rho_in`` to |psi><psi|.
    """
    u1, u2 = _check_unitary(u1), _check_unitary(u2)
    a = cloner._alpha_value(alpha)
    if channel is None:
        channel = channel_map(a)
    if rho_in is None:
        rho_in = projector(cloner.schmidt_state(a))
    u = kron(u1, u2)
    w = kron(u1, u2, u1, u2)
    lhs = channel(u @ rho_in @ u.conj().T)
    rhs = w @ channel(rho_in) @ w.conj().T
    return float(np.linalg.norm(lhs - rhs))


def twirl(channel, n_samples: int, rho_in: np.ndarray, rng=None, samples=None) -> np.ndarray:
    """Monte-Carlo average of W^dag T(u rho u^dag) W over Haar-random (U1, U2).

    Pass ``samples`` (a sequence of (U1, U2)) to fix the draws; otherwise
    ``n_samples`` pairs come from ``rng``. The running sum is compensated so
    the result does not depend on accumulation order beyond rounding.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if samples is None:
        rng = np.random.default_rng(rng)
        us = haar_su2(rng, 2 * n_samples).reshape(n_samples, 2, 2, 2)
        samples = [(p[0], p[1]) for p in us]
    samples = list(samples)[:n_samples]
    if len(samples) < n_samples:
        raise ValueError("fewer samples than n_samples")
    rho_in = np.asarray(rho_in, dtype=np.complex128)
    total = np.zeros((16, 16), dtype=np.complex128)
    comp = np.zeros_like(total)
    for u1, u2 in samples:
        u = np.kron(u1, u2)
        w = kron(u1, u2, u1, u2)
        term = w.conj().T @ channel(u @ rho_in @ u.conj().T) @ w
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total / n_samples


def twirled(channel, samples):
    """The twirl with fixed draws, as a map usable by ``covariance_defect``."""
    samples = list(samples)
    return lambda rho: twirl(channel, len(samples), rho, samples=samples)
