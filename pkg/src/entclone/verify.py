"""Self-check suite run by ``entclone verify``.

Every check yields a :class:`Check`. Residual checks pass when the measured
residual is at most the tolerance; inequality checks pass when the signed
slack is at least minus the tolerance. Either way ``margin >= 0`` means pass.
"""
from dataclasses import dataclass
from math import sqrt
from typing import List

import numpy as np

from . import angular, channel, cloner, measures
from .linalg import herm_eig, partial_trace, projector


@dataclass(frozen=True)
class Check:
    id: str
    value: float
    margin: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.margin >= 0.0)


def _residual(cid, value, tol):
    return Check(cid, float(value), float(tol - value), float(tol))


def _slack(cid, value, tol):
    return Check(cid, float(value), float(value + tol), float(tol))


def _random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (x + x.conj().T)


def run_checks(tolerance: float = 1e-10, seed: int = 0, steps: int = 11,
               samples: int = 20) -> List[Check]:
    rng = np.random.default_rng(seed)
    alphas = np.linspace(0.0, 1.0 / sqrt(2.0), steps)
    checks = []
    tol = tolerance

    m = _random_hermitian(rng, 16)
    w, v = herm_eig(m)
    checks.append(_residual("linalg.eig_residual",
                            np.linalg.norm(m @ v - v * w) / np.linalg.norm(m), tol))

    labels = angular.PAIR_LABELS
    ops = np.stack([angular.pair_tensor_op(*lab) for lab in labels])
    gram = np.einsum("aij,bij->ab", ops.conj(), ops)
    checks.append(_residual("angular.orthonormality", np.max(np.abs(gram - np.eye(len(labels)))), tol))

    rho = _random_hermitian(rng, 16)
    checks.append(_residual("angular.roundtrip",
                            np.linalg.norm(angular.synthesize(angular.tensor_coeffs(rho)) - rho), tol))

    expansion = worst_assembly = worst_fid = worst_fmax = worst_kraus = 0.0
    worst_iso = worst_dil = worst_cov = worst_c12 = worst_c13 = worst_marg = 0.0
    min_eig = min_choi = np.inf
    wit = {"witness_a11_a16_a6": np.inf, "witness_a17_a14_a8": np.inf, "witness_a1_a2_a5_a6": np.inf}
    pos1 = np.inf
    fmax_lo, fmax_hi = np.inf, -np.inf
    witness_ids = {"pos2.witness_A11": "witness_a11_a16_a6",
                   "pos2.witness_A17": "witness_a17_a14_a8",
                   "pos2.witness_A1A2A5": "witness_a1_a2_a5_a6"}
    for a in alphas:
        coeffs = angular.tensor_coeffs(cloner.input_state(a))
        table = cloner.input_expansion(a)
        expansion = max(expansion, max(abs(c - table.get(k, 0.0)) for k, c in coeffs.items()))

        p = cloner.optimal_params(a)
        blocks = cloner.assemble_blocks(a, p)
        rp = cloner.random_params(rng)
        worst_assembly = max(worst_assembly,
                             np.linalg.norm(blocks.rho - cloner.assemble_tensor(a, p).rho),
                             np.linalg.norm(cloner.assemble_blocks(a, rp).rho - cloner.assemble_tensor(a, rp).rho))
        worst_fid = max(worst_fid, abs(cloner.fidelity_formula(a, rp)
                                       - cloner.fidelity_direct(cloner.assemble_blocks(a, rp))))
        worst_fmax = max(worst_fmax, abs(cloner.fidelity_direct(blocks) - cloner.f_max(a)))
        fmax_lo, fmax_hi = min(fmax_lo, cloner.f_max(a)), max(fmax_hi, cloner.f_max(a))
        min_eig = min(min_eig, herm_eig(blocks.rho)[0][-1])
        for name, _, margin in cloner.check_inequalities(a, p):
            if name in witness_ids:
                wit[witness_ids[name]] = min(wit[witness_ids[name]], margin)
            else:
                pos1 = min(pos1, margin)

        ks = channel.kraus_set(a)
        worst_kraus = max(worst_kraus, ks.completeness_residual())
        min_choi = min(min_choi, herm_eig(channel.choi_matrix(ks))[0][-1])
        dil = channel.dilation(a)
        worst_iso = max(worst_iso, dil.isometry_residual(), dil.unitarity_residual())
        psi = projector(cloner.schmidt_state(a))
        worst_dil = max(worst_dil, np.linalg.norm(dil.measure_and_discard(psi) - blocks.rho))
        cmap = channel.channel_map(a)
        for _ in range(samples):
            u1, u2 = channel.haar_su2(rng, 2)
            worst_cov = max(worst_cov, channel.covariance_defect(a, u1, u2, channel=cmap))

        closed = measures.closed_form_curves(a, p)
        r12 = partial_trace(blocks.rho, (0, 1))
        r13 = partial_trace(blocks.rho, (0, 2))
        worst_c12 = max(worst_c12, abs(closed.c12 - measures.concurrence(r12)))
        worst_c13 = max(worst_c13, abs(closed.c13 - measures.concurrence(r13)))
        worst_marg = max(worst_marg, np.max(np.abs(r12 - partial_trace(blocks.rho, (2, 3)))))

    checks += [
        _residual("cloner.input_expansion", expansion, tol),
        _residual("cloner.assembly_equivalence", worst_assembly, tol),
        _residual("cloner.fidelity_formula", worst_fid, tol),
        _residual("cloner.f_max_consistency", worst_fmax, tol),
        _slack("cloner.f_max_range", min(fmax_lo - 0.4, 0.5 - fmax_hi), tol),
        _slack("cloner.min_eigenvalue", min_eig, tol),
        _slack("cloner.pos1", pos1, tol),
    ]
    checks += [_slack("cloner." + cid, wit[cid], tol) for cid in sorted(wit)]
    checks += [
        _residual("channel.kraus_completeness", worst_kraus, tol),
        _slack("channel.choi_min_eigenvalue", min_choi, tol),
        _residual("channel.dilation_unitarity", worst_iso, tol),
        _residual("channel.dilation_equivalence", worst_dil, tol),
        _residual("channel.covariance", worst_cov, tol),
        _residual("measures.c12_closed_form", worst_c12, tol),
        _residual("measures.c13_closed_form", worst_c13, tol),
        _residual("measures.marginal_equality", worst_marg, tol),
    ]
    return checks


def format_report(checks: List[Check]) -> str:
    width = max(len(c.id) for c in checks)
    lines = ["%-*s  %-4s  %12s  %12s  %9s" % (width, "check", "ok", "value", "margin", "tolerance")]
    for c in checks:
        lines.append("%-*s  %-4s  % .5e  % .5e  %.2e" % (width, c.id, "PASS" if c.passed else "FAIL",
                                                       c.value, c.margin, c.tolerance))
    failed = sum(not c.passed for c in checks)
    lines.append("%d checks, %d failed" % (len(checks), failed))
    return "\n".join(lines)
