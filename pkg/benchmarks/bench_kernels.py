"""Time the numba kernels against their pure-numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json results.json]

Both implementations are imported directly, so the comparison does not depend
on the QFGUR_DISABLE_NUMBA switch. Results are also checked for agreement.
"""

import argparse
import json
import time

import numpy as np

from qfgur import kernels
from qfgur.families import fig2_family, fourier_mubs, gellmann_148, pauli_zx


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def random_hermitian(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


def bench_jacobi(repeat, rng):
    rows = []
    for d in (4, 8, 16, 32, 64):
        m = random_hermitian(d, rng)
        kernels.jacobi_eigh_jit(m)  # compile
        t_jit, (w_jit, _) = best_of(lambda: kernels.jacobi_eigh_jit(m), repeat)
        t_np, (w_np, _) = best_of(lambda: kernels.jacobi_eigh_np(m), repeat)
        ref = np.linalg.eigvalsh(m)[::-1]
        err = max(np.max(np.abs(w_jit - ref)), np.max(np.abs(w_np - ref)))
        rows.append({"kernel": "jacobi", "case": f"dim {d}", "numba_s": t_jit, "numpy_s": t_np, "max_err": float(err)})
    return rows


def bench_ladder(repeat):
    cases = [
        ("pauli-zx", pauli_zx()),
        ("gellmann-148", gellmann_148()),
        ("fig2:0.7", fig2_family(0.7)),
        ("mub 3x4", fourier_mubs(3, 4)),
        ("mub 5x3", fourier_mubs(5, 3)),
        ("mub 2x3 x3 copies", None),
    ]
    rows = []
    for name, mset in cases:
        if mset is None:
            pool = np.concatenate([fourier_mubs(2, 3).pool] * 3)
        else:
            pool = np.ascontiguousarray(mset.pool)
        lam = np.zeros(pool.shape[1])
        lam[0] = 1.0
        kernels.subset_ladder_jit(pool[:2], lam)  # compile
        t_jit, (b_jit, _) = best_of(lambda: kernels.subset_ladder_jit(pool, lam), repeat)
        t_np, (b_np, _) = best_of(lambda: kernels.subset_ladder_np(pool, lam), repeat)
        rows.append({
            "kernel": "subset_ladder",
            "case": f"{name} (pool {len(pool)})",
            "numba_s": t_jit,
            "numpy_s": t_np,
            "max_err": float(np.max(np.abs(b_jit[1:] - b_np[1:]))),
        })
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", help="write raw results here")
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba unavailable: both columns time the numpy path")
    rng = np.random.default_rng(args.seed)
    rows = bench_jacobi(args.repeat, rng) + bench_ladder(args.repeat)
    print(f"{'kernel':<14} {'case':<28} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8} {'max |diff|':>11}")
    for r in rows:
        speed = r["numpy_s"] / r["numba_s"] if r["numba_s"] > 0 else float("inf")
        print(
            f"{r['kernel']:<14} {r['case']:<28} {r['numba_s']:>10.4f} {r['numpy_s']:>10.4f}"
            f" {speed:>7.1f}x {r['max_err']:>11.2e}"
        )
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
