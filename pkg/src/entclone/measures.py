"""Entanglement and correlation diagnostics for the copies.

Entropies use the natural logarithm. Bipartitions are given as 0-based
qubit positions.
"""
from dataclasses import asdict, dataclass
from math import log, sqrt
from typing import Callable, NamedTuple

import numpy as np

from . import cloner
from .linalg import (SIGMA_Y, clamp_eigenvalues, eigvals_desc, herm_eig, is_density, n_qubits,
                     partial_trace, partial_transpose)

_YY = np.kron(SIGMA_Y, SIGMA_Y)
GOLDEN = (sqrt(5.0) - 1.0) / 2.0
RANK_CUTOFF = 1e-13


def _root(rho: np.ndarray) -> np.ndarray:
    # eigenvalues at rounding level are treated as exact zeros before the root
    w, v = herm_eig(rho)
    w = clamp_eigenvalues(w)
    w = np.where(w <= RANK_CUTOFF * max(w[0], 0.0), 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are square roots of the eigenvalues of rho rho~ with
    rho~ = (sy (x) sy) rho* (sy (x) sy), conjugation in the product basis.
    They equal the singular values of A = sqrt(rho) sqrt(rho~), read off as
    the positive half of the spectrum of the Hermitian [[0, A], [A^dag, 0]];
    this avoids square roots of eigenvalue round-off for nearly pure states.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4) or not is_density(rho):
        raise ValueError("concurrence needs a two-qubit density operator")
    root = _root(rho)
    a = root @ (_YY @ root.conj() @ _YY)
    dil = np.zeros((8, 8), dtype=np.complex128)
    dil[:4, 4:] = a
    dil[4:, :4] = a.conj().T
    lam = np.maximum(eigvals_desc(dil)[:4], 0.0)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def entropy(rho: np.ndarray) -> float:
    """von Neumann entropy in nats."""
    w = clamp_eigenvalues(eigvals_desc(np.asarray(rho, dtype=np.complex128)))
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def index_of_correlation(rho: np.ndarray, part_a, part_b=None) -> float:
    """S(rho_a) + S(rho_b) - S(rho_ab).

    ``part_b`` defaults to the complement of ``part_a``; when the two parts
    do not cover every qubit, rho_ab is the corresponding marginal.
    """
    n = n_qubits(np.asarray(rho))
    a = sorted(set(part_a))
    b = sorted(set(range(n)) - set(a)) if part_b is None else sorted(set(part_b))
    if not a or not b or set(a) & set(b):
        raise ValueError("parts must be non-empty and disjoint")
    ab = sorted(a + b)
    rho_ab = rho if len(ab) == n else partial_trace(rho, ab)
    return entropy(partial_trace(rho, a)) + entropy(partial_trace(rho, b)) - entropy(rho_ab)


def negativity(rho: np.ndarray, qubits=(2, 3)) -> float:
    """Sum of |negative eigenvalues| of the partial transpose on ``qubits``."""
    w = eigvals_desc(partial_transpose(rho, qubits))
    return float(-np.sum(w[w < 0.0]))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

class ClosedForms(NamedTuple):
    c_in: float
    i_in: float
    c12: float
    c13: float


def _xlogx(p: float) -> float:
    return p * log(p) if p > 0.0 else 0.0


def closed_form_curves(alpha, params: cloner.ClonerParams = None) -> ClosedForms:
    """Input concurrence and correlation index, and copy concurrences at ``params``.

    ``params`` defaults to the optimum; the copy formulas hold for the
    optimal family only.
    """
    a = cloner._alpha_value(alpha)
    b = sqrt(max(0.0, 1.0 - a * a))
    p = cloner.optimal_params(a) if params is None else params
    a6, a11 = p[6], float(np.real(p[11]))
    c12 = max(0.0, (4 * a * b + 1) * (2 * a6 + a11) - 8) / 16.0
    c13 = max(0.0, abs(-4 + 3 * a6) - 3 * a6 * a * b) / 4.0
    return ClosedForms(2 * a * b, 0.0 - 2 * (_xlogx(a * a) + _xlogx(b * b)), float(c12), float(c13))


# ---------------------------------------------------------------------------
# per-alpha report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    alpha: float
    f_max: float
    a6: float
    a16: float
    a11: float
    c_in: float
    c12: float
    c13: float
    i_in: float
    i12: float
    i13: float
    i_pair: float
    negativity: float
    f1_prime: float

    FIELDS = ("alpha", "f_max", "a6", "a16", "a11", "c_in", "c12", "c13", "i_in",
              "i12", "i13", "i_pair", "negativity", "f1_prime")

    def as_row(self):
        return [getattr(self, k) for k in self.FIELDS]

    def as_dict(self):
        return asdict(self)


def measure_report(alpha) -> MeasureReport:
    a = cloner._alpha_value(alpha)
    p = cloner.optimal_params(a)
    out = cloner.assemble_blocks(a, p)
    rho = out.rho
    closed = closed_form_curves(a, p)
    return MeasureReport(
        alpha=a,
        f_max=cloner.f_max(a),
        a6=p[6],
        a16=p[16],
        a11=float(np.real(p[11])),
        c_in=closed.c_in,
        c12=concurrence(partial_trace(rho, (0, 1))),
        c13=concurrence(partial_trace(rho, (0, 2))),
        i_in=closed.i_in,
        i12=index_of_correlation(rho, (0,), (1,)),
        i13=index_of_correlation(rho, (0,), (2,)),
        i_pair=index_of_correlation(rho, (0, 1)),
        negativity=negativity(rho),
        f1_prime=cloner.single_pair_fidelities(out)[0],
    )


def _optimal_rho(alpha):
    return cloner.optimal_state(alpha).rho


def c12_curve(alpha) -> float:
    return concurrence(partial_trace(_optimal_rho(alpha), (0, 1)))


def c13_curve(alpha) -> float:
    return concurrence(partial_trace(_optimal_rho(alpha), (0, 2)))


def i13_curve(alpha) -> float:
    return index_of_correlation(_optimal_rho(alpha), (0,), (2,))


def negativity_curve(alpha) -> float:
    return negativity(_optimal_rho(alpha))


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

def find_threshold(curve: Callable[[float], float], kind: str, bracket, tol: float = 1e-6,
                   zero_tol: float = 1e-12) -> float:
    """Locate a feature of ``curve`` on ``bracket = (lo, hi)``.

    ``kind="zero-crossing"`` bisects on whether ``curve > zero_tol``, which
    also finds where a clipped curve such as max(0, g) switches on or off.
    ``"minimum"`` and ``"maximum"`` use golden-section search and must find
    an interior extremum.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if kind == "zero-crossing":
        p_lo = curve(lo) > zero_tol
        if p_lo == (curve(hi) > zero_tol):
            raise ValueError("no zero crossing inside the bracket")
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if (curve(mid) > zero_tol) == p_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    if kind not in ("minimum", "maximum"):
        raise ValueError("kind must be 'zero-crossing', 'minimum' or 'maximum'")
    sign = 1.0 if kind == "minimum" else -1.0
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = sign * curve(c), sign * curve(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = sign * curve(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = sign * curve(d)
    x = 0.5 * (a + b)
    if x - lo <= tol or hi - x <= tol:
        raise ValueError("%s not inside the bracket" % kind)
    return x
