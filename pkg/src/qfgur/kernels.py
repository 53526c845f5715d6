"""Hot numeric kernels.

Two kernels dominate runtime: the complex Hermitian Jacobi eigensolver and the
exhaustive subset ladder (score every subset of a pool of PSD elements). Each
has a loop implementation compiled with numba and a vectorised numpy
implementation; :data:`BACKEND` records which one the public names dispatch
to. Both are importable directly so they can be compared.
"""

import math

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
TIE_TOL = 1e-12

__all__ = [
    "BACKEND",
    "jacobi_eigh",
    "jacobi_eigvalsh",
    "subset_ladder",
    "jacobi_eigh_jit",
    "jacobi_eigh_np",
    "subset_ladder_jit",
    "subset_ladder_np",
]


# ---------------------------------------------------------------------------
# Jacobi eigensolver
# ---------------------------------------------------------------------------


@njit(cache=True)
def _offdiag_norm(a):
    n = a.shape[0]
    off = 0.0
    total = 0.0
    for i in range(n):
        total += a[i, i].real ** 2
        for j in range(i + 1, n):
            v = a[i, j].real ** 2 + a[i, j].imag ** 2
            off += v
            total += 2.0 * v
    return math.sqrt(2.0 * off), math.sqrt(total)


@njit(cache=True)
def _jacobi_sweeps(a, v, want_vectors, tol, max_sweeps):
    # a is overwritten; on return its diagonal holds the eigenvalues.
    n = a.shape[0]
    off, scale = _offdiag_norm(a)
    sweeps = 0
    while off > tol * scale and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag <= 1e-300:
                    continue
                e = g / ag
                ec = e.conjugate()
                theta = (a[q, q].real - a[p, p].real) / (2.0 * ag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- A G with G = [[c, s e], [-s conj(e), c]] on (p, q)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                # A <- G^H A
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * ec * vkq
                        v[k, q] = s * e * vkp + c * vkq
        sweeps += 1
        off, scale = _offdiag_norm(a)
    return sweeps


@njit(cache=True)
def jacobi_eigh_jit(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    n = m.shape[0]
    a = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            a[i, j] = m[i, j]
    v = np.eye(n, dtype=np.complex128)
    _jacobi_sweeps(a, v, True, tol, max_sweeps)
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(-w)
    return w[order], v[:, order]


def jacobi_eigh_np(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    a = np.array(m, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = math.sqrt(2.0) * np.linalg.norm(a[iu])
        if off <= tol * np.linalg.norm(a):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag <= 1e-300:
                    continue
                e = g / ag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * ag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                a[:, p] = c * colp - s * np.conj(e) * a[:, q]
                a[:, q] = s * e * colp + c * a[:, q]
                rowp = a[p, :].copy()
                a[p, :] = c * rowp - s * e * a[q, :]
                a[q, :] = s * np.conj(e) * rowp + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * np.conj(e) * v[:, q]
                v[:, q] = s * e * vp + c * v[:, q]
    w = np.diagonal(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigh(m):
    """Eigenvalues (descending) and eigenvectors (columns) of a Hermitian matrix."""
    m = np.ascontiguousarray(m, dtype=np.complex128)
    if HAVE_NUMBA:
        return jacobi_eigh_jit(m)
    return jacobi_eigh_np(m)


def jacobi_eigvalsh(m):
    return jacobi_eigh(m)[0]


# ---------------------------------------------------------------------------
# Subset ladder
# ---------------------------------------------------------------------------


@njit(cache=True)
def _eig_score(work, w, src, lam, tol, max_sweeps):
    n = src.shape[0]
    for i in range(n):
        for j in range(n):
            work[i, j] = src[i, j]
    _jacobi_sweeps(work, work, False, tol, max_sweeps)
    # insertion sort, descending; n is tiny
    for i in range(n):
        x = work[i, i].real
        j = i
        while j > 0 and w[j - 1] < x:
            w[j] = w[j - 1]
            j -= 1
        w[j] = x
    score = 0.0
    for i in range(n):
        score += lam[i] * w[i]
    return score


@njit(cache=True)
def _add_into(out, a, b):
    n = out.shape[0]
    for i in range(n):
        for j in range(n):
            out[i, j] = a[i, j] + b[i, j]


@njit(cache=True)
def _lex_smaller(m1, m2):
    # For masks of equal popcount: does m1's sorted index list precede m2's?
    diff = m1 ^ m2
    low = diff & (-diff)
    return (m1 & low) != 0


@njit(cache=True)
def subset_ladder_jit(elems, lam, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Best score and argmax mask for every subset size.

    Subsets are visited depth-first in lexicographic order of their sorted
    index lists; each partial sum is built from its parent with one addition.
    """
    npool = elems.shape[0]
    d = elems.shape[1]
    best = np.full(npool + 1, -np.inf)
    best_mask = np.zeros(npool + 1, dtype=np.int64)
    best[0] = 0.0
    if npool == 0:
        return best, best_mask
    sums = np.zeros((npool + 1, d, d), dtype=np.complex128)
    idx = np.zeros(npool, dtype=np.int64)
    masks = np.zeros(npool + 1, dtype=np.int64)
    work = np.empty((d, d), dtype=np.complex128)
    wbuf = np.empty(d)
    depth = 1
    idx[0] = 0
    sums[1] = elems[0]
    masks[1] = 1
    while True:
        score = _eig_score(work, wbuf, sums[depth], lam, tol, max_sweeps)
        cur = best[depth]
        mask = masks[depth]
        slack = TIE_TOL * max(1.0, abs(score))
        if best_mask[depth] == 0 or score > cur + slack:
            best[depth] = score
            best_mask[depth] = mask
        elif score >= cur - slack:
            if score > cur:
                best[depth] = score
            if _lex_smaller(mask, best_mask[depth]):
                best_mask[depth] = mask
        last = idx[depth - 1]
        if last + 1 < npool:
            idx[depth] = last + 1
            _add_into(sums[depth + 1], sums[depth], elems[last + 1])
            masks[depth + 1] = masks[depth] | (np.int64(1) << (last + 1))
            depth += 1
        else:
            depth -= 1
            if depth == 0:
                break
            idx[depth - 1] += 1
            j = idx[depth - 1]
            _add_into(sums[depth], sums[depth - 1], elems[j])
            masks[depth] = masks[depth - 1] | (np.int64(1) << j)
    return best, best_mask


def _bit_reverse(masks, nbits):
    out = np.zeros_like(masks)
    for i in range(nbits):
        out |= ((masks >> i) & 1) << (nbits - 1 - i)
    return out


def subset_ladder_np(elems, lam, chunk=None):
    elems = np.asarray(elems, dtype=np.complex128)
    lam = np.asarray(lam, dtype=float)
    npool, d = elems.shape[0], elems.shape[1]
    best = np.full(npool + 1, -np.inf)
    best_mask = np.zeros(npool + 1, dtype=np.int64)
    best[0] = 0.0
    if npool == 0:
        return best, best_mask
    flat = elems.reshape(npool, d * d)
    total = 1 << npool
    if chunk is None:
        chunk = max(1024, (1 << 21) // (d * d))
    shifts = np.arange(npool, dtype=np.int64)
    per_k_scores = [[] for _ in range(npool + 1)]
    per_k_masks = [[] for _ in range(npool + 1)]
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        sums = (bits.astype(np.complex128) @ flat).reshape(-1, d, d)
        ev = np.linalg.eigvalsh(sums)[:, ::-1]
        scores = ev @ lam
        sizes = bits.sum(axis=1)
        # keep only each chunk's near-max candidates per size
        for k in np.unique(sizes):
            sel = sizes == k
            s_k = scores[sel]
            top = s_k.max()
            keep = s_k >= top - TIE_TOL * max(1.0, abs(top)) * 4
            per_k_scores[k].append(s_k[keep])
            per_k_masks[k].append(masks[sel][keep])
    for k in range(1, npool + 1):
        s_k = np.concatenate(per_k_scores[k])
        m_k = np.concatenate(per_k_masks[k])
        top = s_k.max()
        near = s_k >= top - TIE_TOL * max(1.0, abs(top))
        rev = _bit_reverse(m_k[near], npool)
        best[k] = top
        best_mask[k] = m_k[near][np.argmax(rev)]
    return best, best_mask


def subset_ladder(elems, lam):
    """Max over subsets of each size of ``lam . eigvals_desc(sum of elements)``.

    Returns ``(best, best_mask)`` indexed by subset size (entry 0 is the empty
    subset). Ties within a relative 1e-12 go to the lexicographically smallest
    index list.
    """
    elems = np.ascontiguousarray(elems, dtype=np.complex128)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    if HAVE_NUMBA:
        return subset_ladder_jit(elems, lam)
    return subset_ladder_np(elems, lam)
