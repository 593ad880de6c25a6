import os
import subprocess
import sys

import numpy as np
import pytest

from entclone import kernels
from entclone._backend import USE_NUMBA
from conftest import random_hermitian


@pytest.mark.parametrize("n", [1, 2, 5, 16, 33])
def test_jacobi_paths_agree_with_lapack(rng, n):
    m = random_hermitian(rng, n)
    ref = np.linalg.eigvalsh(m)[::-1]
    for solver in (kernels.jacobi_eigh_loops, kernels.jacobi_eigh_numpy):
        w, v = solver(m)
        assert np.allclose(w, ref, atol=1e-12)
        assert np.linalg.norm(m @ v - v * w) <= 1e-12 * max(1.0, np.linalg.norm(m))


def test_jacobi_degenerate_and_diagonal():
    m = np.diag([2.0, 2.0, -1.0, 0.0]).astype(complex)
    for solver in (kernels.jacobi_eigh_loops, kernels.jacobi_eigh_numpy):
        w, v = solver(m)
        assert np.array_equal(w, [2.0, 2.0, 0.0, -1.0])


def _toy_scan_problem(rng, n=9):
    # two 2x2 blocks and one 1x1 block, affine in four coordinates
    const = np.zeros((3, 2, 2))
    const[0] = np.eye(2)
    const[1] = np.eye(2)
    const[2, 0, 0] = 1.0
    slopes = rng.normal(size=(4, 3, 2, 2)) * 0.5
    slopes = slopes + slopes.transpose(0, 1, 3, 2)
    slopes[:, 2, 1, :] = slopes[:, 2, :, 1] = 0
    sizes = np.array([2, 2, 1])
    axes = np.tile(np.linspace(-1, 1, n), (4, 1))
    fvec = rng.normal(size=4)
    return axes, const, slopes, sizes, 0.1, fvec


def _brute(axes, const, slopes, sizes, f0, fvec, tol):
    best, arg = -np.inf, None
    n = axes.shape[1]
    for idx in np.ndindex(n, n, n, n):
        x = axes[np.arange(4), idx]
        ok = all(np.linalg.eigvalsh(const[b, :m, :m] + np.einsum("k,kij->ij", x, slopes[:, b, :m, :m]))[0] >= -tol
                 for b, m in enumerate(sizes))
        val = f0 + x @ fvec
        if ok and val > best:
            best, arg = val, idx
    return best, arg


@pytest.mark.parametrize("seed", range(4))
def test_scan_paths_match_exhaustive_search(seed):
    problem = _toy_scan_problem(np.random.default_rng(seed))
    ref, _ = _brute(*problem, 1e-9)
    for scan in (kernels.scan_grid_loops, kernels.scan_grid_numpy):
        val, idx = scan(*problem, 1e-9)
        assert val == pytest.approx(ref, abs=1e-12)
        x = problem[0][np.arange(4), idx]
        assert problem[4] + x @ problem[5] == pytest.approx(val, abs=1e-12)


def test_scan_reports_infeasible_grid():
    axes = np.tile(np.linspace(1, 2, 5), (4, 1))
    const = -np.ones((1, 1, 1))
    slopes = np.zeros((4, 1, 1, 1))
    for scan in (kernels.scan_grid_loops, kernels.scan_grid_numpy):
        val, idx = scan(axes, const, slopes, np.array([1]), 0.0, np.ones(4), 1e-9)
        assert val == -np.inf and idx == (-1, -1, -1, -1)


def test_backend_flag_selects_numpy_path():
    env = dict(os.environ, ENTCLONE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c",
                          "import entclone.kernels as k; print(k.jacobi_eigh is k.jacobi_eigh_numpy,"
                          " k.scan_grid is k.scan_grid_numpy)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["True", "True"]


@pytest.mark.skipif(not USE_NUMBA, reason="numba disabled")
def test_default_backend_is_compiled():
    assert kernels.jacobi_eigh is kernels.jacobi_eigh_loops
    assert kernels.scan_grid is kernels.scan_grid_loops
