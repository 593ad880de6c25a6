"""Hot numeric kernels, each with a numba path and a pure-numpy path.

Two loops dominate the runtime of this package:

* the cyclic Jacobi eigensolver for complex Hermitian matrices (every
  entropy, concurrence, negativity and positivity check goes through it);
* the brute-force grid scan used as an independent oracle for the
  optimal fidelity.

``jacobi_eigh`` and ``scan_grid`` dispatch to the compiled scalar-loop
versions when numba is enabled and to the vectorised numpy versions
otherwise (see :mod:`entclone._backend`). Both versions of each kernel are
always importable so the benchmark can compare them.
"""
import math

import numpy as np

from ._backend import USE_NUMBA, njit

MAX_SWEEPS = 100


# ---------------------------------------------------------------------------
# Jacobi eigensolver
# ---------------------------------------------------------------------------

def _jacobi_sweeps_loops(a, v, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sph = s * ph
                sphc = s * ph.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sphc * akq
                    a[k, q] = sph * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sph * aqk
                    a[q, k] = sphc * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sphc * vkq
                    v[k, q] = sph * vkp + c * vkq
    return -1


_jacobi_sweeps_compiled = njit(_jacobi_sweeps_loops)


def _jacobi_sweeps_numpy(a, v, tol, max_sweeps):
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps):
        if math.sqrt(2.0 * float(np.sum(np.abs(a[iu]) ** 2))) <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q of A and V are rotated together
                rot = np.array([[c, s * ph], [-s * np.conj(ph), c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, [p, q]] = v[:, [p, q]] @ rot
    return -1


def _finish(a, v, sweeps):
    if sweeps < 0:
        raise RuntimeError("Jacobi iteration did not converge in %d sweeps" % MAX_SWEEPS)
    w = np.real(np.diag(a)).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigh_loops(m, rel_tol=1e-14):
    """Scalar-loop Jacobi (compiled when numba is on). Eigenvalues descending."""
    a = np.array(m, dtype=np.complex128, copy=True)
    v = np.eye(a.shape[0], dtype=np.complex128)
    tol = rel_tol * np.linalg.norm(a)
    sweeps = _jacobi_sweeps_compiled(a, v, tol, MAX_SWEEPS)
    return _finish(a, v, sweeps)


def jacobi_eigh_numpy(m, rel_tol=1e-14):
    """Row/column-vectorised Jacobi on plain numpy. Eigenvalues descending."""
    a = np.array(m, dtype=np.complex128, copy=True)
    v = np.eye(a.shape[0], dtype=np.complex128)
    tol = rel_tol * np.linalg.norm(a)
    sweeps = _jacobi_sweeps_numpy(a, v, tol, MAX_SWEEPS)
    return _finish(a, v, sweeps)


jacobi_eigh = jacobi_eigh_loops if USE_NUMBA else jacobi_eigh_numpy


# ---------------------------------------------------------------------------
# Brute-force grid scan
# ---------------------------------------------------------------------------
#
# The scanned state is affine in four grid coordinates x = (x0, x1, x2, x3):
#
#     blocks(x) = const + sum_k x_k * slopes[k]
#     value(x)  = f0 + sum_k x_k * fvec[k]
#
# ``const`` has shape (nb, m, m) and ``slopes`` (4, nb, m, m); block b only
# uses its leading sizes[b] x sizes[b] corner. A point is feasible when every
# block is PSD up to ``tol`` (lambda_min >= -tol). The kernels return the
# largest value over feasible points and its grid indices, or -inf and
# indices of -1 when nothing is feasible.
#
# Axes must be ascending. Along the last axis the value is monotone, so each
# line x3 is walked from its best end and abandoned at the first feasible
# point or as soon as the value drops below the incumbent.

def _psd_shifted(mat, m, tol, work):
    # Cholesky of mat + tol*I; succeeds iff lambda_min(mat) > -tol
    for i in range(m):
        for j in range(i + 1):
            s = mat[i, j]
            if i == j:
                s += tol
            for k in range(j):
                s -= work[i, k] * work[j, k]
            if i == j:
                if s <= 0.0:
                    return False
                work[i, i] = math.sqrt(s)
            else:
                work[i, j] = s / work[j, j]
    return True


_psd_shifted_compiled = njit(_psd_shifted)


def _scan_loops(axes, const, slopes, sizes, f0, fvec, tol):
    n = axes.shape[1]
    nb = const.shape[0]
    mmax = const.shape[1]
    mat = np.empty((mmax, mmax))
    work = np.empty((mmax, mmax))
    best = -np.inf
    bi = np.full(4, -1, dtype=np.int64)
    desc = fvec[3] >= 0.0
    for i0 in range(n):
        x0 = axes[0, i0]
        for i1 in range(n):
            x1 = axes[1, i1]
            for i2 in range(n):
                x2 = axes[2, i2]
                base = f0 + x0 * fvec[0] + x1 * fvec[1] + x2 * fvec[2]
                for j in range(n):
                    i3 = n - 1 - j if desc else j
                    x3 = axes[3, i3]
                    val = base + x3 * fvec[3]
                    if val <= best:
                        break
                    ok = True
                    for b in range(nb):
                        m = sizes[b]
                        for i in range(m):
                            for k in range(i + 1):
                                mat[i, k] = (const[b, i, k] + x0 * slopes[0, b, i, k]
                                             + x1 * slopes[1, b, i, k]
                                             + x2 * slopes[2, b, i, k]
                                             + x3 * slopes[3, b, i, k])
                        if not _psd_shifted_compiled(mat, m, tol, work):
                            ok = False
                            break
                    if ok:
                        best = val
                        bi[0] = i0
                        bi[1] = i1
                        bi[2] = i2
                        bi[3] = i3
                        break
    return best, bi


_scan_compiled = njit(_scan_loops)


def _scan_args(axes, const, slopes, sizes, fvec):
    return (np.ascontiguousarray(axes, dtype=np.float64),
            np.ascontiguousarray(const, dtype=np.float64),
            np.ascontiguousarray(slopes, dtype=np.float64),
            np.ascontiguousarray(sizes, dtype=np.int64),
            np.ascontiguousarray(fvec, dtype=np.float64))


def scan_grid_loops(axes, const, slopes, sizes, f0, fvec, tol):
    axes, const, slopes, sizes, fvec = _scan_args(axes, const, slopes, sizes, fvec)
    best, idx = _scan_compiled(axes, const, slopes, sizes, float(f0), fvec, float(tol))
    return float(best), tuple(int(i) for i in idx)


def scan_grid_numpy(axes, const, slopes, sizes, f0, fvec, tol, batch=4096):
    """Vectorised scan, one x0-slice at a time.

    Within a slice, points beating the incumbent are screened on block
    diagonals, ranked by value, and tested in batches with
    ``numpy.linalg.eigvalsh`` until the first feasible one.
    """
    axes, const, slopes, sizes, fvec = _scan_args(axes, const, slopes, sizes, fvec)
    n = axes.shape[1]
    nb = const.shape[0]
    rest = np.stack(np.meshgrid(axes[1], axes[2], axes[3], indexing="ij"), axis=-1).reshape(-1, 3)
    best, bi = -np.inf, (-1, -1, -1, -1)
    for i0 in range(n):
        x = np.column_stack([np.full(rest.shape[0], axes[0, i0]), rest])
        vals = f0 + x @ fvec
        keep = vals > best
        for b in range(nb):
            for i in range(sizes[b]):
                keep &= const[b, i, i] + x @ slopes[:, b, i, i] >= -tol
        cand = np.flatnonzero(keep)
        cand = cand[np.argsort(-vals[cand], kind="stable")]
        for start in range(0, cand.size, batch):
            idx = cand[start:start + batch]
            ok = np.ones(idx.size, dtype=bool)
            for b in range(nb):
                m = sizes[b]
                if m == 1:
                    continue
                mats = const[b, :m, :m] + np.einsum("pk,kij->pij", x[idx], slopes[:, b, :m, :m])
                ok &= np.linalg.eigvalsh(mats)[:, 0] >= -tol
            if ok.any():
                first = idx[np.argmax(ok)]
                best = float(vals[first])
                bi = (i0,) + tuple(int(i) for i in np.unravel_index(first, (n, n, n)))
                break
    return best, bi


scan_grid = scan_grid_loops if USE_NUMBA else scan_grid_numpy
