"""Subset-norm bound engine.

Index convention: ``s(k)`` is the maximum, over all subsets of ``k`` distinct
measurement elements pooled across settings, of the largest eigenvalue of
their sum (k = 1..dN). For rank-1 projective sets this equals the largest
squared singular value of the matrix whose columns are the picked basis
vectors. The steering bound for ``N`` settings is ``s(N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Measurement, MeasurementSet, singular_values
from .errors import (
    BadParameter,
    BadSpectrum,
    ConsistencyError,
    DimensionMismatch,
    KOutOfRange,
    NonPositiveBound,
    NotProjective,
    PoolTooLarge,
)
from .majorization import MajorizationVector, w_from_s_sequence

MAX_POOL = 24
RANK1_TOL = 1e-9
SPECTRUM_TOL = 1e-9

CONVENTION = (
    "s(k) = max over k-element subsets of pooled measurement elements of the largest "
    "eigenvalue of their sum, k = 1..dN; steering bound = s(N)"
)


@dataclass(frozen=True)
class SubsetSelection:
    picks: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.picks)

    def tolist(self):
        return [list(p) for p in self.picks]


def _check_pool(mset: MeasurementSet, limit: int = MAX_POOL) -> int:
    size = mset.pool.shape[0]
    if size > limit:
        raise PoolTooLarge(f"pool of {size} elements exceeds the exhaustive limit {limit}")
    return size


def _point_spectrum(d):
    lam = np.zeros(d)
    lam[0] = 1.0
    return lam


def _validate_spectrum(lam, d) -> np.ndarray:
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.shape != (d,):
        raise BadSpectrum(f"spectrum needs {d} entries, got {lam.size}")
    if not np.all(np.isfinite(lam)) or lam.min() < -SPECTRUM_TOL:
        raise BadSpectrum("spectrum entries must be finite and nonnegative")
    if abs(lam.sum() - 1.0) > SPECTRUM_TOL:
        raise BadSpectrum(f"spectrum sums to {lam.sum():.12g}, not 1")
    return np.sort(np.clip(lam, 0.0, None))[::-1]


def _ladder(mset: MeasurementSet, lam=None):
    _check_pool(mset)
    lam = _point_spectrum(mset.dim) if lam is None else lam
    key = ("ladder", tuple(np.round(lam, 15)))
    if key not in mset._cache:
        mset._cache[key] = kernels.subset_ladder(mset.pool, lam)
    return mset._cache[key]


def _selection(mset: MeasurementSet, mask: int) -> SubsetSelection:
    labels = mset.pool_labels
    return SubsetSelection(tuple(labels[i] for i in range(len(labels)) if mask >> i & 1))


def _check_k(mset, k):
    size = mset.pool.shape[0]
    if not 1 <= k <= size:
        raise KOutOfRange(f"k={k} outside 1..{size}")


def _picked_vectors(mset: MeasurementSet, sel: SubsetSelection) -> np.ndarray:
    return np.array([mset[x].vectors[a] for x, a in sel.picks]).T


def subset_norm(mset: MeasurementSet, k: int) -> tuple[float, SubsetSelection]:
    """``s(k)`` and the lexicographically first subset attaining it."""
    _check_pool(mset)
    _check_k(mset, k)
    best, masks = _ladder(mset)
    value = float(best[k])
    sel = _selection(mset, int(masks[k]))
    if mset.is_projective:
        sigma1 = singular_values(_picked_vectors(mset, sel))[0]
        if abs(sigma1**2 - value) > RANK1_TOL:
            raise ConsistencyError(
                f"s({k})={value!r} but sigma_1^2 of the picked vectors is {sigma1**2!r}"
            )
    return value, sel


def s_sequence(mset: MeasurementSet) -> np.ndarray:
    """``(s(1), ..., s(dN))``."""
    best, _ = _ladder(mset)
    return np.array(best[1:], dtype=float)


def argmax_subsets(mset: MeasurementSet) -> list[SubsetSelection]:
    _, masks = _ladder(mset)
    return [_selection(mset, int(m)) for m in masks[1:]]


def w_vector(mset: MeasurementSet) -> MajorizationVector:
    return w_from_s_sequence(s_sequence(mset))


def steering_bound(bob_set: MeasurementSet) -> float:
    """Bound on the steering functional of any local-hidden-state model: ``s(N)``."""
    return float(s_sequence(bob_set)[len(bob_set) - 1])


def entanglement_bound(alice_set: MeasurementSet, bob_set: MeasurementSet) -> float:
    """``W^A . W^B``, zero-padded to a common length."""
    wa, wb = w_vector(alice_set).components, w_vector(bob_set).components
    n = max(len(wa), len(wb))
    return float(np.pad(wa, (0, n - len(wa))) @ np.pad(wb, (0, n - len(wb))))


def spectrum_weighted_sequence(mset: MeasurementSet, lam) -> np.ndarray:
    lam = _validate_spectrum(lam, mset.dim)
    best, _ = _ladder(mset, lam)
    return np.array(best[1:], dtype=float)


def spectrum_weighted_s(mset: MeasurementSet, lam, k: int) -> float:
    """Max over k-subsets of ``lam_desc . eigvals_desc(sum of elements)``."""
    _check_pool(mset)
    _check_k(mset, k)
    return float(spectrum_weighted_sequence(mset, lam)[k - 1])


def overlap_c(mx: Measurement, my: Measurement) -> float:
    """Largest ``|<phi_a|phi_b>|`` between the two bases."""
    if not (mx.is_projective and my.is_projective):
        raise NotProjective("overlaps need two projective bases")
    if mx.dim != my.dim:
        raise DimensionMismatch(f"dims {mx.dim} and {my.dim} differ")
    return float(np.max(np.abs(mx.vectors.conj() @ my.vectors.T)))


def rutkowski_bound(bob_set: MeasurementSet) -> float:
    """``1 + sum_i C_i`` with ``C_i`` the largest overlap between settings ``x`` and ``x - i`` (cyclic)."""
    if not bob_set.is_projective:
        raise NotProjective("the overlap bound needs projective measurements")
    n = len(bob_set)
    if n < 2:
        raise BadParameter("the overlap bound needs at least two settings")
    c = np.array([[overlap_c(mx, my) for my in bob_set] for mx in bob_set])
    return float(1.0 + sum(max(c[x, (x - i) % n] for x in range(n)) for i in range(1, n)))


def violation_ratios(n_settings: int, steering: float, entanglement: float) -> tuple[float, float]:
    """Lower bounds ``(N / steering, N / entanglement)`` on the maximal violations."""
    if steering <= 0 or entanglement <= 0:
        raise NonPositiveBound("bounds must be positive")
    return n_settings / steering, n_settings / entanglement


@dataclass
class BoundReport:
    s_sequence: np.ndarray
    w_vector: MajorizationVector
    steering_bound: float
    argmax_subsets: list[SubsetSelection]
    n_settings: int
    entanglement_bound: float | None = None
    alice_s_sequence: np.ndarray | None = None
    rutkowski_bound: float | None = None
    spectrum_weighted: dict | None = None
    convention: str = field(default=CONVENTION)

    def to_dict(self) -> dict:
        out = {
            "convention": self.convention,
            "n_settings": self.n_settings,
            "s_sequence": self.s_sequence.tolist(),
            "w_vector": self.w_vector.tolist(),
            "steering_bound": self.steering_bound,
            "entanglement_bound": self.entanglement_bound,
            "rutkowski_bound": self.rutkowski_bound,
            "argmax_subsets": {
                str(k): sel.tolist() for k, sel in enumerate(self.argmax_subsets, start=1)
            },
        }
        if self.alice_s_sequence is not None:
            out["alice_s_sequence"] = self.alice_s_sequence.tolist()
        if self.entanglement_bound is not None:
            v_steer, v_ent = violation_ratios(self.n_settings, self.steering_bound, self.entanglement_bound)
            out["violation_ratio_lower"] = {"steering": v_steer, "entanglement": v_ent}
        if self.spectrum_weighted is not None:
            out["spectrum_weighted"] = {
                k: (v.tolist() if isinstance(v, np.ndarray) else v)
                for k, v in self.spectrum_weighted.items()
            }
        return out


def bound_report(
    bob_set: MeasurementSet,
    alice_set: MeasurementSet | None = None,
    spectrum=None,
) -> BoundReport:
    s = s_sequence(bob_set)
    n = len(bob_set)
    report = BoundReport(
        s_sequence=s,
        w_vector=w_from_s_sequence(s),
        steering_bound=float(s[n - 1]),
        argmax_subsets=argmax_subsets(bob_set),
        n_settings=n,
    )
    if alice_set is not None:
        report.entanglement_bound = entanglement_bound(alice_set, bob_set)
        report.alice_s_sequence = s_sequence(alice_set)
    if bob_set.is_projective and n >= 2:
        report.rutkowski_bound = rutkowski_bound(bob_set)
    if spectrum is not None:
        lam = _validate_spectrum(spectrum, bob_set.dim)
        s_lam = spectrum_weighted_sequence(bob_set, lam)
        report.spectrum_weighted = {
            "lambda": lam,
            "s_sequence_lambda": s_lam,
            "steering_bound_lambda": float(s_lam[n - 1]),
        }
    return report
