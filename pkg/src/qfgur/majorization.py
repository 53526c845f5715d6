"""Vector-order machinery: weak majorization, direct sums/products, entropy.

Vectors of different lengths are compared after right zero-padding. The
majorization test is the prefix-sum (weak) form: totals need not agree,
because bound vectors routinely sum to more than a probability vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeComponent, NotMonotone, PreconditionFailed

SLACK = 1e-9
NEG_TOL = 1e-9
MONO_TOL = 1e-9

W_BOUND = "W_bound"
OMEGA = "omega"
R_SELECTOR = "R_selector"
GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class MajorizationVector:
    components: np.ndarray
    kind: str = GENERIC

    def __post_init__(self):
        c = np.array(self.components, dtype=float, copy=True)
        if not np.all(np.isfinite(c)):
            raise NegativeComponent("bound vector has non-finite components")
        # first differences of eigenvalue maxima carry rounding noise
        if len(c) and c.min() < -NEG_TOL:
            raise NegativeComponent(f"bound vector has negative component {c.min():.3g}")
        c = np.clip(c, 0.0, None)
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @property
    def total(self) -> float:
        return float(self.components.sum())

    def __len__(self):
        return len(self.components)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)

    def tolist(self):
        return self.components.tolist()


def _pad(*vectors):
    n = max(len(v) for v in vectors)
    return [np.pad(np.asarray(v, dtype=float), (0, n - len(v))) for v in vectors]


def _check_nonnegative(*vectors):
    for v in vectors:
        if len(v) and np.min(v) < -NEG_TOL:
            raise NegativeComponent(f"component {np.min(v):.3g} < 0")


def prefix_sums_desc(v) -> np.ndarray:
    return np.cumsum(np.sort(np.asarray(v, dtype=float))[::-1])


def majorization_slack(w, p) -> float:
    """Smallest prefix-sum gap ``sum_k w_desc - sum_k p_desc`` (negative means violated)."""
    w, p = _pad(np.asarray(w, dtype=float), np.asarray(p, dtype=float))
    if len(w) == 0:
        return 0.0
    return float(np.min(prefix_sums_desc(w) - prefix_sums_desc(p)))


def majorizes(w, p) -> bool:
    """True iff ``p`` is weakly majorized by ``w`` (``p < w``), within 1e-9."""
    w, p = _pad(np.asarray(w, dtype=float), np.asarray(p, dtype=float))
    _check_nonnegative(w, p)
    return majorization_slack(w, p) >= -SLACK


def dot_sorted_bound(p, q, w) -> tuple[float, float]:
    """``(P.Q, W_desc.Q_desc)`` for ``P < W``; the first never exceeds the second."""
    p, q, w = _pad(p, q, w)
    _check_nonnegative(p, q, w)
    if not majorizes(w, p):
        raise PreconditionFailed("p is not majorized by w")
    lhs = float(p @ q)
    rhs = float(np.sort(w)[::-1] @ np.sort(q)[::-1])
    return lhs, rhs


def direct_sum(vectors) -> np.ndarray:
    vectors = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vectors:
        return np.zeros(0)
    return np.concatenate(vectors)


def direct_product(p, q) -> np.ndarray:
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    _check_nonnegative(p, q)
    return np.outer(p, q).ravel()


def shannon_entropy(p) -> float:
    """Entropy in bits with 0 log 0 = 0. The input is not renormalised."""
    p = np.asarray(p, dtype=float)
    _check_nonnegative(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def first_differences(s, kind) -> MajorizationVector:
    s = np.asarray(s, dtype=float)
    if len(s) and np.any(np.diff(s) < -MONO_TOL):
        raise NotMonotone(f"sequence is not nondecreasing: {s}")
    return MajorizationVector(np.diff(s, prepend=0.0), kind)


def omega_assemble(omegas) -> MajorizationVector:
    """``(O_1, O_2 - O_1, ..., O_d - O_{d-1})`` from a nondecreasing chain."""
    return first_differences(omegas, OMEGA)


def w_from_s_sequence(s) -> MajorizationVector:
    """``(s(1), s(2) - s(1), ...)``: the direct-sum bound vector of a measurement set."""
    return first_differences(s, W_BOUND)


def r_selector(n_ones: int, length: int) -> MajorizationVector:
    """``(1, ..., 1, 0, ..., 0)`` with ``n_ones`` leading ones."""
    r = np.zeros(max(length, n_ones))
    r[:n_ones] = 1.0
    return MajorizationVector(r, R_SELECTOR)
