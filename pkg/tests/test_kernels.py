import os
import subprocess
import sys

import numpy as np
import pytest

from qfgur import kernels
from qfgur.families import fig2_family, fourier_mubs, gellmann_148, pauli_zx


def random_hermitian(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


class TestJacobi:
    @pytest.mark.parametrize("d", [1, 2, 3, 5, 9, 16, 64])
    @pytest.mark.parametrize("solver", [kernels.jacobi_eigh_jit, kernels.jacobi_eigh_np])
    def test_matches_lapack(self, d, solver, rng):
        m = random_hermitian(d, rng)
        w, v = solver(m)
        ref = np.linalg.eigvalsh(m)[::-1]
        scale = max(1.0, np.abs(ref).max())
        np.testing.assert_allclose(w, ref, atol=1e-10 * scale)
        assert np.all(np.diff(w) <= 1e-12)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-8)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)

    def test_real_symmetric_and_degenerate(self):
        w, _ = kernels.jacobi_eigh(np.eye(4))
        np.testing.assert_allclose(w, np.ones(4))
        w, _ = kernels.jacobi_eigh(np.diag([3.0, -1.0, 3.0]))
        np.testing.assert_allclose(w, [3.0, 3.0, -1.0])

    def test_backends_agree(self, rng):
        m = random_hermitian(12, rng)
        w1, _ = kernels.jacobi_eigh_jit(m)
        w2, _ = kernels.jacobi_eigh_np(m)
        np.testing.assert_allclose(w1, w2, atol=1e-11)


def _point(d):
    lam = np.zeros(d)
    lam[0] = 1.0
    return lam


def _brute(pool, lam):
    import itertools

    n = len(pool)
    best = [0.0] + [-np.inf] * n
    for k in range(1, n + 1):
        for c in itertools.combinations(range(n), k):
            ev = np.linalg.eigvalsh(pool[list(c)].sum(axis=0))[::-1]
            best[k] = max(best[k], float(lam @ ev))
    return np.array(best)


class TestSubsetLadder:
    @pytest.mark.parametrize(
        "mset", [pauli_zx(), gellmann_148(), fig2_family(0.4), fourier_mubs(3, 3)], ids=lambda m: m.label
    )
    def test_backends_agree_values_and_argmax(self, mset):
        pool = np.ascontiguousarray(mset.pool)
        lam = _point(mset.dim)
        b1, m1 = kernels.subset_ladder_jit(pool, lam)
        b2, m2 = kernels.subset_ladder_np(pool, lam)
        np.testing.assert_allclose(b1, b2, atol=1e-12)
        np.testing.assert_array_equal(m1, m2)
        np.testing.assert_allclose(b1[1:], _brute(pool, lam)[1:], atol=1e-10)

    def test_small_chunks_do_not_change_result(self):
        pool = np.ascontiguousarray(gellmann_148().pool)
        lam = np.array([0.5, 0.3, 0.2])
        ref = kernels.subset_ladder_np(pool, lam)
        small = kernels.subset_ladder_np(pool, lam, chunk=7)
        np.testing.assert_allclose(ref[0], small[0], atol=1e-12)
        np.testing.assert_array_equal(ref[1], small[1])

    def test_ties_pick_lexicographically_first(self):
        # all subsets of a basis tie at 1; the first element alone / first k elements win
        pool = np.ascontiguousarray(np.stack([np.diag(v) for v in np.eye(3)]).astype(complex))
        for ladder in (kernels.subset_ladder_jit, kernels.subset_ladder_np):
            best, masks = ladder(pool, _point(3))
            np.testing.assert_allclose(best[1:], [1.0, 1.0, 1.0])
            assert list(masks[1:]) == [0b001, 0b011, 0b111]

    def test_empty_pool(self):
        best, masks = kernels.subset_ladder(np.zeros((0, 2, 2), dtype=complex), _point(2))
        assert list(best) == [0.0] and list(masks) == [0]


def test_env_flag_selects_numpy_backend():
    code = "from qfgur import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, QFGUR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_reproduces_headline_values():
    code = (
        "from qfgur import bounds, families, kernels;"
        "print(kernels.BACKEND, bounds.steering_bound(families.gellmann_148()),"
        " bounds.entanglement_bound(families.pauli_zx(), families.pauli_zx()))"
    )
    env = dict(os.environ, QFGUR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, steer, ent = out.stdout.split()
    assert backend == "numpy"
    assert abs(float(steer) - (3 + np.sqrt(5)) / 2) < 1e-10
    assert abs(float(ent) - (3 - np.sqrt(2))) < 1e-10
