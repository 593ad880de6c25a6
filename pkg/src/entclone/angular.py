"""Angular-momentum machinery for two pairs of qubits.

Qubits (1,3) and (2,4) are each coupled to total spin J in {0, 1}. On each
pair the sixteen irreducible tensor operators T(Ja, Jb)_{KQ} form an
orthonormal operator basis, and products of one operator per pair span the
four-qubit operator space.

Coupled states follow the Condon-Shortley convention::

    |1, 1> = |up up>      |1, 0> = (|up dn> + |dn up>)/sqrt(2)
    |1,-1> = |dn dn>      |0, 0> = (|up dn> - |dn up>)/sqrt(2)

with the lower-numbered qubit of the pair written first.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt

import numpy as np

P13 = "P13"
P24 = "P24"
PAIRS = (P13, P24)

_UP = np.array([1.0, 0.0])
_DN = np.array([0.0, 1.0])

COUPLED_LABELS = ((1, 1), (1, 0), (1, -1), (0, 0))


def _half(x) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if f.denominator not in (1, 2) or abs(float(f) - float(x)) > 1e-12:
        raise ValueError("%r is not an integer or half-integer" % (x,))
    return f


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol by the Racah sum, evaluated with exact integers.

    Arguments may be ints, floats or Fractions; half-integers are allowed.
    Selection-rule violations return 0.0.
    """
    j1, j2, j3, m1, m2, m3 = (_half(x) for x in (j1, j2, j3, m1, m2, m3))
    if min(j1, j2, j3) < 0:
        raise ValueError("angular momenta must be non-negative")
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if (j - m).denominator != 1:
            raise ValueError("j=%s and m=%s must differ by an integer" % (j, m))
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 > j1 + j2 or j3 < abs(j1 - j2) or (j1 + j2 + j3).denominator != 1:
        return 0.0

    def fact(x):
        return factorial(int(x))

    tri = Fraction(fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3),
                   fact(j1 + j2 + j3 + 1))
    pre_sq = tri * (fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2)
                    * fact(j3 + m3) * fact(j3 - m3))
    kmin = int(max(0, j2 - j3 - m1, j1 - j3 + m2))
    kmax = int(min(j1 + j2 - j3, j1 - m1, j2 + m2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (fact(k) * fact(j1 + j2 - j3 - k) * fact(j1 - m1 - k) * fact(j2 + m2 - k)
               * fact(j3 - j2 + m1 + k) * fact(j3 - j1 - m2 + k))
        total += Fraction((-1) ** k, den)
    sign = -1 if int(j1 - j2 - m3) % 2 else 1
    # sqrt(a) * b with exact a, b: square first so only one rounding happens
    val_sq = pre_sq * total * total
    return sign * (1 if total >= 0 else -1) * sqrt(val_sq)


@lru_cache(maxsize=None)
def coupled_state(j: int, m: int) -> np.ndarray:
    """Two-qubit coupled state |j m> in the product basis of its pair."""
    up_up = np.kron(_UP, _UP)
    up_dn = np.kron(_UP, _DN)
    dn_up = np.kron(_DN, _UP)
    dn_dn = np.kron(_DN, _DN)
    table = {
        (1, 1): up_up,
        (1, 0): (up_dn + dn_up) / sqrt(2.0),
        (1, -1): dn_dn,
        (0, 0): (up_dn - dn_up) / sqrt(2.0),
    }
    if (j, m) not in table:
        raise ValueError("invalid two-qubit label |%s %s>" % (j, m))
    out = table[(j, m)].astype(np.complex128)
    out.flags.writeable = False
    return out


def embed_pairs(op13: np.ndarray, op24: np.ndarray) -> np.ndarray:
    """Place an operator on pair (1,3) and one on pair (2,4) into qubit order 1234."""
    t = np.kron(op13, op24).reshape([2] * 8)  # axes: 1 3 2 4 | 1' 3' 2' 4'
    return t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(16, 16)


def coupled_to_product(j: int, m: int, jp: int, mp: int) -> np.ndarray:
    """|j m ; j' m'> = |j m>_(1,3) (x) |j' m'>_(2,4) as a 16-vector in qubit order."""
    a = coupled_state(j, m)
    b = coupled_state(jp, mp)
    t = np.kron(a, b).reshape(2, 2, 2, 2)  # qubits 1 3 2 4
    return t.transpose(0, 2, 1, 3).reshape(16).copy()


COUPLED_BASIS_LABELS = tuple((j, m, jp, mp) for (j, m) in COUPLED_LABELS for (jp, mp) in COUPLED_LABELS)


@lru_cache(maxsize=None)
def coupled_basis_matrix() -> np.ndarray:
    """Columns are the 16 coupled vectors, in COUPLED_BASIS_LABELS order."""
    w = np.column_stack([coupled_to_product(*lab) for lab in COUPLED_BASIS_LABELS])
    w.flags.writeable = False
    return w


@dataclass(frozen=True, order=True)
class TensorOpIndex:
    """Label of one irreducible operator T(ja, jb)_{k q} on a qubit pair."""

    pair: str
    ja: int
    jb: int
    k: int
    q: int

    def __post_init__(self):
        if self.pair not in PAIRS:
            raise ValueError("pair must be one of %s" % (PAIRS,))
        if self.ja not in (0, 1) or self.jb not in (0, 1):
            raise ValueError("two-qubit angular momenta are 0 or 1")
        if not abs(self.ja - self.jb) <= self.k <= self.ja + self.jb:
            raise ValueError("rank %d violates the triangle rule for (%d, %d)" % (self.k, self.ja, self.jb))
        if abs(self.q) > self.k:
            raise ValueError("component %d outside -%d..%d" % (self.q, self.k, self.k))

    @property
    def key(self):
        return (self.ja, self.jb, self.k, self.q)


PAIR_LABELS = tuple(
    (ja, jb, k, q)
    for ja in (1, 0)
    for jb in (1, 0)
    for k in range(abs(ja - jb), ja + jb + 1)
    for q in range(k, -k - 1, -1)
)


@lru_cache(maxsize=None)
def pair_tensor_op(ja: int, jb: int, k: int, q: int) -> np.ndarray:
    """T(ja, jb)_{k q} on the 4-dim space of one pair (ordered low qubit first)."""
    TensorOpIndex(P13, ja, jb, k, q)
    out = np.zeros((4, 4), dtype=np.complex128)
    for ma in range(-ja, ja + 1):
        for mb in range(-jb, jb + 1):
            c = wigner_3j(ja, jb, k, ma, -mb, -q)
            if c == 0.0:
                continue
            c *= (-1) ** (ja - ma) * sqrt(2 * k + 1)
            out += c * np.outer(coupled_state(ja, ma), coupled_state(jb, mb).conj())
    out.flags.writeable = False
    return out


_IDENTITY4 = np.eye(4, dtype=np.complex128)


def tensor_op(idx: TensorOpIndex, embedded: bool = True) -> np.ndarray:
    """Tensor operator for ``idx``; 16x16 embedding by default, else the 4x4 pair form.

    The embedding acts as the identity on the complementary pair.
    """
    op = pair_tensor_op(*idx.key)
    if not embedded:
        return op
    if idx.pair == P13:
        return embed_pairs(op, _IDENTITY4)
    return embed_pairs(_IDENTITY4, op)


@lru_cache(maxsize=None)
def product_basis():
    """All 256 products T13 (x) T24 as one (256, 16, 16) array, with their labels."""
    labels = tuple((a, b) for a in PAIR_LABELS for b in PAIR_LABELS)
    ops = np.stack([embed_pairs(pair_tensor_op(*a), pair_tensor_op(*b)) for a, b in labels])
    ops.flags.writeable = False
    return labels, ops


def tensor_coeffs(rho: np.ndarray) -> dict:
    """Expansion coefficients Tr{(T13^dag (x) T24^dag) rho} keyed by label pairs.

    Keys are ``((ja, jb, k, q), (ja', jb', k', q'))`` for pair (1,3) then
    pair (2,4).
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (16, 16):
        raise ValueError("expected a 16x16 operator")
    labels, ops = product_basis()
    # Tr(B^dag rho) = sum_ij conj(B_ij) rho_ij
    vals = np.einsum("nij,ij->n", ops.conj(), rho)
    return dict(zip(labels, vals))


def synthesize(coeffs: dict) -> np.ndarray:
    labels, ops = product_basis()
    c = np.array([coeffs.get(lab, 0.0) for lab in labels], dtype=np.complex128)
    return np.einsum("n,nij->ij", c, ops)


def adjoint_partner(ja: int, jb: int, k: int, q: int):
    """T(ja, jb)^dag_{k q} = sign * T(jb, ja)_{k, -q}; returns (sign, label)."""
    sign = -1 if (ja - jb + q) % 2 else 1
    return sign, (jb, ja, k, -q)
