"""Covariant copying maps for pure two-qubit states of fixed entanglement.

The input is |psi> = alpha|up up> + beta|dn dn> on qubits (1,2) with a
maximally mixed device on (3,4). Every linear map that commutes with the
local unitaries U1 (x) U2 (x) U1 (x) U2 is fixed by 17 coefficients A1..A17;
each rescales one family of tensor-operator components of the input.
"""
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import angular
from .linalg import herm_eig, kron, partial_trace, projector

INV_SQRT2 = 1.0 / sqrt(2.0)
N_PARAMS = 17
REAL_PARAMS = (1, 2, 4, 5, 6, 8, 13, 14, 16)
REALITY_TOL = 1e-14
TRACE_TOL = 1e-12
INEQUALITY_SLACK = 1e-12

# Pair operator "families" (ja, jb, k). Parameter n multiplies every product
# whose (1,3) factor is in the first family and (2,4) factor in the second.
_T11_1 = (1, 1, 1)
_T11_0 = (1, 1, 0)
_T00 = (0, 0, 0)
_T10 = (1, 0, 1)
_T01 = (0, 1, 1)

PARAM_FAMILIES = {
    1: (_T11_1, _T11_1),
    2: (_T11_1, _T11_0),
    3: (_T11_1, _T10),
    4: (_T11_1, _T00),
    5: (_T11_0, _T11_1),
    6: (_T11_0, _T11_0),
    # the printed label for A7 repeats A3's; (11)_0 x (10)_1 is the only
    # family left unassigned, and matches the (2a^2-1) weights of the blocks
    7: (_T11_0, _T10),
    8: (_T11_0, _T00),
    9: (_T10, _T11_1),
    10: (_T10, _T11_0),
    11: (_T10, _T10),
    12: (_T10, _T00),
    13: (_T00, _T11_1),
    14: (_T00, _T11_0),
    15: (_T00, _T10),
    16: (_T00, _T00),
    17: (_T10, _T01),
}


def _swap(fam):
    ja, jb, k = fam
    return (jb, ja, k)


def _alpha_value(alpha) -> float:
    return float(alpha.alpha if isinstance(alpha, EntanglementClass) else alpha)


@dataclass(frozen=True)
class EntanglementClass:
    """Orbit of alpha|up up> + beta|dn dn> under local unitaries, 0 <= alpha <= 1/sqrt(2)."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 <= a <= INV_SQRT2 + 1e-15):
            raise ValueError("alpha=%r outside the canonical range [0, 1/sqrt(2)]; "
                             "fold with alpha -> sqrt(1 - alpha^2)" % self.alpha)
        object.__setattr__(self, "alpha", min(a, INV_SQRT2))

    @classmethod
    def folded(cls, alpha: float) -> "EntanglementClass":
        a = float(alpha)
        if not 0.0 <= a <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return cls(a if a <= INV_SQRT2 else sqrt(1.0 - a * a))

    @property
    def beta(self) -> float:
        return sqrt(1.0 - self.alpha ** 2)

    def psi(self) -> np.ndarray:
        return schmidt_state(self.alpha)


def schmidt_state(alpha: float) -> np.ndarray:
    """alpha|up up> + sqrt(1-alpha^2)|dn dn> on two qubits."""
    alpha = _alpha_value(alpha)
    out = np.zeros(4, dtype=np.complex128)
    out[0] = alpha
    out[3] = sqrt(max(0.0, 1.0 - alpha * alpha))
    return out


@dataclass(frozen=True)
class ClonerParams:
    """Coefficients A1..A17, stored 0-based in ``values``.

    Construction enforces the reality of A1, A2, A4, A5, A6, A8, A13, A14, A16
    and the unit-trace condition (9 A6 + 3 A8 + 3 A14 + A16) / 16 = 1.
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != N_PARAMS:
            raise ValueError("expected %d coefficients, got %d" % (N_PARAMS, vals.size))
        for n in REAL_PARAMS:
            if abs(vals[n - 1].imag) > REALITY_TOL:
                raise ValueError("A%d must be real" % n)
            vals[n - 1] = vals[n - 1].real
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        tr = self.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError("trace condition violated: (9A6+3A8+3A14+A16)/16 = %.15g" % tr)

    @classmethod
    def from_dict(cls, coeffs: dict) -> "ClonerParams":
        """Build from ``{n: A_n}``; missing coefficients are zero."""
        vals = np.zeros(N_PARAMS, dtype=np.complex128)
        for n, v in coeffs.items():
            if not 1 <= int(n) <= N_PARAMS:
                raise ValueError("no coefficient A%s" % n)
            vals[int(n) - 1] = v
        return cls(vals)

    def __getitem__(self, n: int) -> complex:
        """1-based access, ``params[6]`` is A6."""
        if not 1 <= n <= N_PARAMS:
            raise IndexError("coefficients are A1..A17")
        v = self.values[n - 1]
        return float(v.real) if n in REAL_PARAMS else complex(v)

    def trace(self) -> float:
        return trace_of(self.values)

    def as_dict(self) -> dict:
        return {n: self[n] for n in range(1, N_PARAMS + 1)}

    def __repr__(self):
        parts = []
        for n, v in self.as_dict().items():
            if v != 0:
                parts.append("A%d=%s" % (n, format_coefficient(v)))
        return "ClonerParams(%s)" % ", ".join(parts)


def format_coefficient(v, digits: int = 12) -> str:
    """Fixed-point text with trailing zeros stripped; imaginary part only when present."""
    def fmt(x):
        out = ("%.*f" % (digits, x)).rstrip("0").rstrip(".")
        return "0" if out in ("-0", "") else out

    v = complex(v)
    if v.imag == 0.0:
        return fmt(v.real)
    return "%s%s%sj" % (fmt(v.real), "+" if v.imag >= 0 else "-", fmt(abs(v.imag)))


def trace_of(values) -> float:
    v = np.asarray(values)
    return float(np.real(9 * v[5] + 3 * v[7] + 3 * v[13] + v[15]) / 16.0)


@dataclass(frozen=True)
class OutputState:
    rho: np.ndarray = field(repr=False)
    alpha: float
    params: ClonerParams


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def omega_state(alpha, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """(u1 (x) u2)(alpha|up up> + beta|dn dn>)."""
    for u in (u1, u2):
        u = np.asarray(u)
        if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-12:
            raise ValueError("local operations must be 2x2 unitaries")
    return kron(u1, u2) @ schmidt_state(alpha)


def input_state(alpha) -> np.ndarray:
    """rho_0 = |psi><psi| on (1,2) times the maximally mixed state of (3,4)."""
    return kron(projector(schmidt_state(alpha)), np.eye(4) / 4.0)


def input_expansion(alpha) -> dict:
    """Closed-form tensor expansion of rho_0 keyed like ``angular.tensor_coeffs``.

    rho_0 = a^2/4 U(x)U + b^2/4 D(x)D + ab/8 (R(x)R + L(x)L), with one-pair
    factors U = |up><up| (x) 1, D = |dn><dn| (x) 1 and the raising/lowering
    parts R, L. The T(1,1)_00 weight in U and D is sqrt(3)/2, the value that
    keeps Tr rho_0 = 1 with unit-norm tensor operators.
    """
    a = _alpha_value(alpha)
    b = sqrt(max(0.0, 1.0 - a * a))
    r3 = sqrt(3.0) / 2.0
    up = {(1, 1, 1, 0): INV_SQRT2, (1, 1, 0, 0): r3, (0, 0, 0, 0): 0.5,
          (0, 1, 1, 0): -0.5, (1, 0, 1, 0): 0.5}
    dn = {(1, 1, 1, 0): -INV_SQRT2, (1, 1, 0, 0): r3, (0, 0, 0, 0): 0.5,
          (0, 1, 1, 0): 0.5, (1, 0, 1, 0): -0.5}
    rais = {(1, 1, 1, 1): -sqrt(2.0), (0, 1, 1, 1): 1.0, (1, 0, 1, 1): -1.0}
    lowr = {(1, 1, 1, -1): sqrt(2.0), (0, 1, 1, -1): -1.0, (1, 0, 1, -1): 1.0}
    out: dict = {}
    for weight, fac in ((a * a / 4.0, up), (b * b / 4.0, dn), (a * b / 8.0, rais), (a * b / 8.0, lowr)):
        for l1, c1 in fac.items():
            for l2, c2 in fac.items():
                out[(l1, l2)] = out.get((l1, l2), 0.0) + weight * c1 * c2
    return {k: v for k, v in out.items() if v != 0.0}


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def _family_weights(values) -> dict:
    w = {}
    for n, (f13, f24) in PARAM_FAMILIES.items():
        v = complex(values[n - 1])
        w[(f13, f24)] = v
        partner = (_swap(f13), _swap(f24))
        if partner != (f13, f24):
            w[partner] = v.conjugate()
    return w


def tensor_assembly(alpha, values) -> np.ndarray:
    """Output operator for raw coefficients (no validation); linear in ``values``."""
    a = _alpha_value(alpha)
    coeffs = angular.tensor_coeffs(input_state(a))
    weights = _family_weights(values)
    labels, ops = angular.product_basis()
    w = np.array([weights.get((l13[:3], l24[:3]), 0.0) * coeffs[(l13, l24)]
                  for l13, l24 in labels], dtype=np.complex128)
    return np.einsum("n,nij->ij", w, ops)


def assemble_tensor(alpha, params: ClonerParams) -> OutputState:
    """Each input tensor component scaled by its coefficient, then re-synthesised."""
    a = _alpha_value(alpha)
    return OutputState(tensor_assembly(a, params.values), a, params)


_CB_INDEX = {lab: i for i, lab in enumerate(angular.COUPLED_BASIS_LABELS)}

# block membership by M - M'; labels are (J, M, J', M')
BLOCKS = {
    "M1": ((1, 1, 1, 1), (1, 0, 1, 0), (1, -1, 1, -1), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 0)),
    "M2": ((1, 1, 1, 0), (1, 1, 0, 0), (1, 0, 1, -1), (0, 0, 1, -1)),
    "M3": ((1, -1, 1, 0), (1, -1, 0, 0), (1, 0, 1, 1), (0, 0, 1, 1)),
    "M4": ((1, 1, 1, -1),),
    "M5": ((1, -1, 1, 1),),
}


def block_matrix(alpha, params: ClonerParams) -> np.ndarray:
    """16 * rho_out in the coupled basis |J M; J' M'>, entries as the explicit block listing."""
    a = _alpha_value(alpha)
    d = 2 * a * a - 1
    e = 2 * a * sqrt(max(0.0, 1.0 - a * a))
    A = {n: complex(params.values[n - 1]) for n in range(1, N_PARAMS + 1)}
    cj = {n: v.conjugate() for n, v in A.items()}
    m = np.zeros((16, 16), dtype=np.complex128)

    def put(row, col, val):
        m[_CB_INDEX[row], _CB_INDEX[col]] += val

    def pair(row, col, val, val_t):
        put(row, col, val)
        put(col, row, val_t)

    s11 = (1, 1, 1, 1)
    s10 = (1, 0, 1, 0)
    smm = (1, -1, 1, -1)
    t0s = (1, 0, 0, 0)
    s0t = (0, 0, 1, 0)
    ss = (0, 0, 0, 0)
    # M1
    put(s11, s11, d * (A[2] + A[5]) + A[1] + A[6])
    put(s10, s10, A[6])
    put(t0s, t0s, A[8])
    put(ss, ss, A[16])
    put(s0t, s0t, A[14])
    put(smm, smm, -d * (A[2] + A[5]) + A[1] + A[6])
    pair(s11, s10, e * A[1], e * A[1])
    pair(s11, t0s, -e * A[3], -e * cj[3])
    pair(s11, ss, e * A[11], e * cj[11])
    pair(s11, s0t, -e * A[9], -e * cj[9])
    pair(s10, t0s, d * A[7], d * cj[7])
    pair(s10, ss, A[11], cj[11])
    pair(s10, s0t, d * A[10], d * cj[10])
    pair(s10, smm, e * A[1], e * A[1])
    pair(t0s, ss, d * A[12], d * cj[12])
    pair(t0s, s0t, A[17], cj[17])
    pair(t0s, smm, e * cj[3], e * A[3])
    pair(ss, s0t, d * cj[15], d * A[15])
    pair(ss, smm, e * cj[11], e * A[11])
    pair(s0t, smm, e * cj[9], e * A[9])
    # M2
    p10 = (1, 1, 1, 0)
    p00 = (1, 1, 0, 0)
    q1m = (1, 0, 1, -1)
    z1m = (0, 0, 1, -1)
    put(p00, p00, d * A[4] + A[8])
    put(q1m, q1m, -d * A[5] + A[6])
    put(z1m, z1m, -d * A[13] + A[14])
    put(p10, p10, d * A[2] + A[6])
    pair(p00, q1m, e * cj[3], e * A[3])
    pair(p00, z1m, -e * A[17], -e * cj[17])
    pair(p00, p10, d * cj[7] + cj[3], d * A[7] + A[3])
    pair(q1m, z1m, d * A[10] - A[9], d * cj[10] - cj[9])
    pair(q1m, p10, e * A[1], e * A[1])
    pair(z1m, p10, -e * cj[9], -e * A[9])
    # M3
    n10 = (1, -1, 1, 0)
    n00 = (1, -1, 0, 0)
    q11 = (1, 0, 1, 1)
    z11 = (0, 0, 1, 1)
    put(n00, n00, -d * A[4] + A[8])
    put(q11, q11, d * A[5] + A[6])
    put(z11, z11, d * A[13] + A[14])
    put(n10, n10, -d * A[2] + A[6])
    pair(n00, q11, -e * cj[3], -e * A[3])
    pair(n00, z11, -e * A[17], -e * cj[17])
    pair(n00, n10, d * cj[7] - cj[3], d * A[7] - A[3])
    pair(q11, z11, d * A[10] + A[9], d * cj[10] + cj[9])
    pair(q11, n10, e * A[1], e * A[1])
    pair(z11, n10, e * cj[9], e * A[9])
    # M4, M5
    put((1, 1, 1, -1), (1, 1, 1, -1), d * (A[2] - A[5]) - A[1] + A[6])
    put((1, -1, 1, 1), (1, -1, 1, 1), d * (-A[2] + A[5]) - A[1] + A[6])
    return m


def block(alpha, params: ClonerParams, name: str) -> np.ndarray:
    """One diagonal block of ``block_matrix`` (still scaled by 16)."""
    idx = [_CB_INDEX[lab] for lab in BLOCKS[name]]
    return block_matrix(alpha, params)[np.ix_(idx, idx)]


def assemble_blocks(alpha, params: ClonerParams) -> OutputState:
    """rho_out = (1/16)(M1 + M2 + M3 + M4 + M5) mapped to qubit order."""
    a = _alpha_value(alpha)
    w = angular.coupled_basis_matrix()
    rho = w @ block_matrix(a, params) @ w.conj().T / 16.0
    return OutputState(rho, a, params)


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

def check_inequalities(alpha, params: ClonerParams):
    """Necessary positivity conditions as ``(id, satisfied, margin)`` triples.

    ``margin`` is the signed slack (>= 0 when the inequality holds); an entry
    counts as satisfied down to -1e-12. The reduced form for A1 = A6 != 0 is
    only reported when that equality holds.
    """
    a = _alpha_value(alpha)
    x = a * a * (1 - a * a)
    d = 2 * a * a - 1
    A = params.as_dict()
    r = {n: float(np.real(A[n])) for n in REAL_PARAMS}
    s = r[2] + r[5]
    rows = [
        ("pos1.A6_nonneg", r[6]),
        ("pos1.A8_nonneg", r[8]),
        ("pos1.A14_nonneg", r[14]),
        ("pos1.A16_nonneg", r[16]),
        ("pos1.A1_le_A6", r[6] - abs(r[1])),
        ("pos1.A4_le_A8", r[8] - abs(d * r[4])),
        ("pos1.A13_le_A14", r[14] - abs(d * r[13])),
        ("pos1.A2_le_A6", r[6] - abs(d * r[2])),
        ("pos1.A5_le_A6", r[6] - abs(d * r[5])),
        ("pos2.witness_A11", r[16] * r[6] - abs(A[11]) ** 2),
        ("pos2.witness_A17", r[14] * r[8] - abs(A[17]) ** 2),
        ("pos2.witness_A1A2A5",
         (r[1] + r[6]) ** 2 * r[6] - 8 * x * r[1] ** 2 * (r[1] + r[6]) - r[6] * (d * s) ** 2),
    ]
    if r[6] != 0 and abs(r[1] - r[6]) <= INEQUALITY_SLACK:
        rows.append(("pos3.A1_eq_A6", sqrt(max(0.0, 4 * r[6] ** 2 - 16 * x * r[6] ** 2)) - abs(d * s)))
    return [(name, margin >= -INEQUALITY_SLACK, float(margin)) for name, margin in rows]


def min_eigenvalue(out: OutputState) -> float:
    return float(herm_eig(out.rho)[0][-1])


# ---------------------------------------------------------------------------
# fidelities
# ---------------------------------------------------------------------------

def fidelity_direct(out: OutputState) -> float:
    """<psi psi| rho_out |psi psi> with |psi> on (1,2) and on (3,4)."""
    pp = np.kron(schmidt_state(out.alpha), schmidt_state(out.alpha))
    val = pp.conj() @ out.rho @ pp
    return float(val.real)


def fidelity_formula(alpha, params: ClonerParams) -> float:
    a = _alpha_value(alpha)
    x = a * a * (1 - a * a)
    A = params.as_dict()
    return float((A[1] * (1 + 2 * x) + (2 * a * a - 1) ** 2 * (A[2] + A[5]) + A[6] * (1 - x)
                  + x * A[16] + 6 * x * np.real(A[11])) / 16.0)


def single_pair_fidelities(out: OutputState):
    """Overlap of each copy's reduced state with |psi>: (pair (1,2), pair (3,4))."""
    psi = schmidt_state(out.alpha)
    f1 = psi.conj() @ partial_trace(out.rho, (0, 1)) @ psi
    f2 = psi.conj() @ partial_trace(out.rho, (2, 3)) @ psi
    return float(f1.real), float(f2.real)


# ---------------------------------------------------------------------------
# optimum
# ---------------------------------------------------------------------------

def _x(alpha) -> float:
    a = _alpha_value(alpha)
    return a * a * (1 - a * a)


def v_parameter(alpha) -> float:
    x = _x(alpha)
    return 1.0 - _one_minus_v(x)


def _one_minus_v(x: float) -> float:
    # denominator 145x^2 - 32x + 4 has no real root
    return 81 * x * x / (145 * x * x - 32 * x + 4)


def optimal_params(alpha) -> ClonerParams:
    """Coefficients of the fidelity-optimal covariant map for alpha in [0, 1/sqrt(2)]."""
    a = EntanglementClass(_alpha_value(alpha)).alpha
    a6 = 8.0 / 9.0 * (1.0 + sqrt(v_parameter(a)))
    a16 = max(0.0, 16.0 - 9.0 * a6)
    return ClonerParams.from_dict({1: a6, 2: a6, 5: a6, 6: a6, 16: a16,
                                   11: sqrt(a6 * a16)})


def f_max(alpha) -> float:
    """Closed-form optimal fidelity; depends on alpha only through alpha^2 (1 - alpha^2)."""
    a = _alpha_value(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    x = _x(a)
    w = _one_minus_v(x)
    return 2.0 / 9.0 * (1 - 4 * x) * (1 + sqrt(1.0 - w)) + x * (1 + sqrt(w))


def upper_bound_curve(alpha, a6: float) -> float:
    """Fidelity bound at fixed A6 (maximised over the other coefficients)."""
    if not 0.0 <= a6 <= 16.0 / 9.0 + 1e-15:
        raise ValueError("A6=%r outside [0, 16/9]" % a6)
    x = _x(alpha)
    return (a6 * (4 - 16 * x) + 16 * x + 6 * x * sqrt(max(0.0, a6 * (16 - 9 * a6)))) / 16.0


def optimal_state(alpha) -> OutputState:
    a = _alpha_value(alpha)
    return assemble_blocks(a, optimal_params(a))


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------

def random_params(rng: np.random.Generator, scale: float = 1.0) -> ClonerParams:
    """Generic coefficients obeying reality and trace, positivity not enforced."""
    vals = scale * (rng.normal(size=N_PARAMS) + 1j * rng.normal(size=N_PARAMS))
    for n in REAL_PARAMS:
        vals[n - 1] = vals[n - 1].real
    vals[15] = 16.0 - 9 * vals[5].real - 3 * vals[7].real - 3 * vals[13].real
    return ClonerParams(vals)


_MIXED = {6: 1.0, 8: 1.0, 14: 1.0, 16: 1.0}


def random_positive_params(alpha, rng: np.random.Generator) -> ClonerParams:
    """Random coefficients whose output is PSD.

    Steps from the maximally mixed output toward a random trace-free
    direction, stopping at a random fraction of the distance to the PSD
    boundary.
    """
    a = _alpha_value(alpha)
    centre = ClonerParams.from_dict(_MIXED).values
    delta = rng.normal(size=N_PARAMS) + 1j * rng.normal(size=N_PARAMS)
    for n in REAL_PARAMS:
        delta[n - 1] = delta[n - 1].real
    delta[15] = -(9 * delta[5].real + 3 * delta[7].real + 3 * delta[13].real)

    def lam_min(t):
        return herm_eig(tensor_assembly(a, centre + t * delta))[0][-1]

    lo, hi = 0.0, 1.0
    while lam_min(hi) >= 0.0:
        lo, hi = hi, 2 * hi
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if lam_min(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    t = lo * rng.uniform(0.3, 1.0)
    return ClonerParams(centre + t * delta)


def oracle_optimize(alpha, resolution: int = 60, **options):
    """Brute-force optimum as ``(params, fidelity)``; see :mod:`entclone.oracle`."""
    from .oracle import oracle_optimize as _scan

    res = _scan(alpha, resolution, **options)
    return res.params, res.fidelity
