"""Compare the compiled and pure-numpy paths of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--resolution 31]

Both paths are always importable; with numba disabled
(ENTCLONE_DISABLE_NUMBA=1) the "loops" path runs as plain Python, which is
slow but still correct.
"""
import argparse
import time

import numpy as np

from entclone import kernels, oracle
from entclone._backend import backend_name


def best_time(fn, repeat):
    fn()  # warm-up (includes JIT compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def scan_problem(alpha, resolution):
    const_rho, slope_rho, _, _ = oracle._linear_model(alpha)
    const, slopes, sizes = oracle._pack(const_rho, slope_rho)
    pp = np.kron(oracle.cloner.schmidt_state(alpha), oracle.cloner.schmidt_state(alpha))
    f0 = float((pp.conj() @ const_rho @ pp).real)
    fvec = np.array([(pp.conj() @ m @ pp).real for m in slope_rho])
    bounds = np.array([[0.0, 16 / 9], [-16 / 9, 16 / 9], [-32 / 9, 32 / 9], [-8 / 3, 8 / 3]])
    axes = np.linspace(bounds[:, 0], bounds[:, 1], resolution).T
    return axes, const, slopes, sizes, f0, fvec, oracle.FEASIBILITY_TOL


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--resolution", type=int, default=31)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print("backend for dispatch: %s" % backend_name())
    print("%-28s %12s %12s %8s" % ("kernel", "loops [ms]", "numpy [ms]", "speedup"))
    for n in (4, 16, 64):
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = x + x.conj().T
        t_loop = best_time(lambda: kernels.jacobi_eigh_loops(m), args.repeat)
        t_np = best_time(lambda: kernels.jacobi_eigh_numpy(m), args.repeat)
        assert np.allclose(kernels.jacobi_eigh_loops(m)[0], kernels.jacobi_eigh_numpy(m)[0], atol=1e-10)
        print("%-28s %12.3f %12.3f %7.1fx" % ("jacobi_eigh n=%d" % n, 1e3 * t_loop, 1e3 * t_np, t_np / t_loop))
    for alpha in (0.2, 0.6):
        prob = scan_problem(alpha, args.resolution)
        t_loop = best_time(lambda: kernels.scan_grid_loops(*prob), args.repeat)
        t_np = best_time(lambda: kernels.scan_grid_numpy(*prob), args.repeat)
        v1, v2 = kernels.scan_grid_loops(*prob)[0], kernels.scan_grid_numpy(*prob)[0]
        assert abs(v1 - v2) < 1e-12, (v1, v2)
        label = "scan_grid %d^4 alpha=%.1f" % (args.resolution, alpha)
        print("%-28s %12.3f %12.3f %7.1fx" % (label, 1e3 * t_loop, 1e3 * t_np, t_np / t_loop))


if __name__ == "__main__":
    main()
