"""States, measurements, Born probabilities and conditional assemblages.

Bipartite operators are indexed with A as the slow (left) tensor factor, so
``rho_ab.reshape(dA, dB, dA, dB)[i, j, k, l] = <i j| rho |k l>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    BadFactorization,
    BadParameter,
    DimensionMismatch,
    IncompleteBasis,
    InvalidProbability,
    InvalidState,
    NonOrthonormal,
    NotCompleteToIdentity,
    NotHermitian,
    NotPSD,
)

HERM_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
ORTHO_TOL = 1e-9
NO_SIGNALING_TOL = 1e-8

PROJECTIVE = "projective"
POVM = "povm"


def _frozen(a, dtype=np.complex128):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def _hermitian_deviation(m):
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def hermitian_eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and column eigenvectors of a Hermitian matrix."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {m.shape}")
    dev = _hermitian_deviation(m)
    if dev > HERM_TOL:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3g}")
    return kernels.jacobi_eigh(0.5 * (m + m.conj().T))


def hermitian_spectrum(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted nonincreasing."""
    return hermitian_eigh(m)[0]


def lambda_max(m) -> float:
    return float(hermitian_spectrum(m)[0])


def singular_values(m) -> np.ndarray:
    """Singular values, nonincreasing, from the eigenvalues of ``m^H m``."""
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    gram = m.conj().T @ m
    ev = kernels.jacobi_eigvalsh(0.5 * (gram + gram.conj().T))
    return np.sqrt(np.clip(ev, 0.0, None))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityState:
    matrix: np.ndarray
    label: str = ""
    split: tuple[int, int] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidState(f"density matrix must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("density matrix has non-finite entries")
        dev = _hermitian_deviation(m)
        if dev > HERM_TOL:
            raise InvalidState(f"density matrix not Hermitian (deviation {dev:.3g})")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"density matrix trace {tr!r} != 1")
        ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if ev[0] < -PSD_TOL:
            raise InvalidState(f"density matrix has eigenvalue {ev[0]:.3g} < 0")
        if self.split is not None:
            da, db = (int(s) for s in self.split)
            if da * db != m.shape[0]:
                raise BadFactorization(f"split {da}x{db} does not match dim {m.shape[0]}")
            object.__setattr__(self, "split", (da, db))
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> np.ndarray:
        return np.clip(hermitian_spectrum(self.matrix), 0.0, None)

    def reduced(self, which: str) -> "DensityState":
        """Reduced state on factor ``"A"`` or ``"B"`` (needs ``split``)."""
        if self.split is None:
            raise BadFactorization("state has no declared bipartite split")
        da, db = self.split
        r = self.matrix.reshape(da, db, da, db)
        if which == "A":
            red = np.einsum("ijkj->ik", r)
        elif which == "B":
            red = np.einsum("ijil->jl", r)
        else:
            raise BadParameter(f"factor must be 'A' or 'B', not {which!r}")
        return DensityState(red, label=f"{self.label}|{which}")


def pure_state(vec, label="") -> DensityState:
    v = np.asarray(vec, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    return DensityState(np.outer(v, v.conj()), label=label)


def maximally_mixed(dim: int) -> DensityState:
    return DensityState(np.eye(dim) / dim, label=f"I/{dim}")


def product_state(rho: DensityState, tau: DensityState) -> DensityState:
    return DensityState(
        np.kron(rho.matrix, tau.matrix),
        label=f"{rho.label}(x){tau.label}",
        split=(rho.dim, tau.dim),
    )


def singlet_vector() -> np.ndarray:
    """(|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=np.complex128)
    v[1], v[2] = 1.0, -1.0
    return v / np.sqrt(2.0)


def qutrit_max_entangled_vector() -> np.ndarray:
    """(|00> + |11> + |22>)/sqrt(3)."""
    v = np.zeros(9, dtype=np.complex128)
    v[[0, 4, 8]] = 1.0
    return v / np.sqrt(3.0)


def werner_state(family: str, p: float) -> DensityState:
    """``p |psi><psi| + (1-p) I/D`` for the qubit singlet or the qutrit |psi+>."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadParameter(f"Werner weight p must lie in [0, 1], got {p}")
    if family == "qubit":
        v, d = singlet_vector(), 2
    elif family == "qutrit":
        v, d = qutrit_max_entangled_vector(), 3
    else:
        raise BadParameter(f"unknown Werner family {family!r}")
    dim = d * d
    rho = p * np.outer(v, v.conj()) + (1.0 - p) * np.eye(dim) / dim
    return DensityState(rho, label=f"werner-{family}({p:g})", split=(d, d))


def random_state(dim: int, purity: str = "mixed", seed: int = 0) -> DensityState:
    """Seeded random density matrix (Gaussian vector or Ginibre construction)."""
    if dim < 2:
        raise BadParameter("dim must be >= 2")
    rng = np.random.default_rng(seed)
    return _random_state(dim, purity, rng)


def _random_state(dim, purity, rng):
    if purity == "pure":
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v /= np.linalg.norm(v)
        m = np.outer(v, v.conj())
    elif purity == "mixed":
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        m = g @ g.conj().T
        m /= np.trace(m).real
    else:
        raise BadParameter(f"purity must be 'pure' or 'mixed', not {purity!r}")
    m = 0.5 * (m + m.conj().T)
    return DensityState(m, label=f"random-{purity}")


# ---------------------------------------------------------------------------
# measurements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Measurement:
    elements: np.ndarray  # (outcomes, d, d)
    kind: str = POVM
    label: str = ""
    vectors: np.ndarray | None = None  # (outcomes, d) rows, projective only

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.elements.shape[0]

    @property
    def is_projective(self) -> bool:
        return self.kind == PROJECTIVE

    def relabel(self, order: Sequence[int], label: str | None = None) -> "Measurement":
        """Same measurement with outcomes reordered: new outcome i is old ``order[i]``."""
        order = list(order)
        return Measurement(
            elements=_frozen(self.elements[order]),
            kind=self.kind,
            label=self.label if label is None else label,
            vectors=None if self.vectors is None else _frozen(self.vectors[order]),
        )


def make_projective_measurement(vectors, label: str = "") -> Measurement:
    """Rank-1 projective measurement from a complete orthonormal basis."""
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    if not vecs:
        raise IncompleteBasis("no basis vectors given")
    d = vecs[0].shape[0]
    if any(v.shape[0] != d for v in vecs):
        raise DimensionMismatch("basis vectors have different dimensions")
    v = np.array(vecs)
    gram = v.conj() @ v.T
    dev = float(np.max(np.abs(gram - np.eye(len(vecs)))))
    if dev > ORTHO_TOL:
        raise NonOrthonormal(f"Gram matrix deviates from identity by {dev:.3g}")
    if len(vecs) < d:
        raise IncompleteBasis(f"{len(vecs)} vectors cannot span dimension {d}")
    elems = np.einsum("ai,aj->aij", v, v.conj())
    return Measurement(_frozen(elems), PROJECTIVE, label, _frozen(v))


def make_povm(elements, label: str = "") -> Measurement:
    elems = np.array([np.asarray(e, dtype=np.complex128) for e in elements])
    if elems.ndim != 3 or elems.shape[1] != elems.shape[2]:
        raise DimensionMismatch("POVM elements must be square matrices of equal size")
    d = elems.shape[1]
    for i, e in enumerate(elems):
        dev = _hermitian_deviation(e)
        if dev > HERM_TOL:
            raise NotPSD(f"element {i} is not Hermitian (deviation {dev:.3g})")
        lo = np.linalg.eigvalsh(0.5 * (e + e.conj().T))[0]
        if lo < -PSD_TOL:
            raise NotPSD(f"element {i} has eigenvalue {lo:.3g}")
    dev = float(np.max(np.abs(elems.sum(axis=0) - np.eye(d))))
    if dev > ORTHO_TOL:
        raise NotCompleteToIdentity(f"elements sum to identity only within {dev:.3g}")
    return Measurement(_frozen(elems), POVM, label)


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    measurements: tuple[Measurement, ...]
    weights: np.ndarray | None = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        ms = tuple(self.measurements)
        if not ms:
            raise BadParameter("a measurement set needs at least one measurement")
        d = ms[0].dim
        if any(m.dim != d for m in ms):
            raise DimensionMismatch("measurements in a set must share a dimension")
        if self.weights is None:
            w = np.full(len(ms), 1.0 / len(ms))
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(ms),):
                raise BadParameter("one setting weight per measurement required")
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
                raise BadParameter("setting weights must be a probability vector")
        object.__setattr__(self, "measurements", ms)
        object.__setattr__(self, "weights", _frozen(w, float))

    def __len__(self):
        return len(self.measurements)

    def __iter__(self):
        return iter(self.measurements)

    def __getitem__(self, i):
        return self.measurements[i]

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    @property
    def is_projective(self) -> bool:
        return all(m.is_projective for m in self.measurements)

    @property
    def pool(self) -> np.ndarray:
        """All elements stacked in (setting, outcome) order."""
        if "pool" not in self._cache:
            self._cache["pool"] = _frozen(np.concatenate([m.elements for m in self]))
        return self._cache["pool"]

    @property
    def pool_labels(self) -> list[tuple[int, int]]:
        return [(x, a) for x, m in enumerate(self) for a in range(m.n_outcomes)]


# ---------------------------------------------------------------------------
# probabilities
# ---------------------------------------------------------------------------


def _clip_probabilities(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -PSD_TOL) or np.any(p > 1.0 + PSD_TOL):
        raise InvalidProbability(f"Born value out of range: {p}")
    return np.clip(p, 0.0, 1.0)


def born_probabilities(state: DensityState, m: Measurement) -> np.ndarray:
    """``Tr(Pi_a rho)`` for every outcome."""
    if state.dim != m.dim:
        raise DimensionMismatch(f"state dim {state.dim} vs measurement dim {m.dim}")
    p = np.einsum("aij,ji->a", m.elements, state.matrix).real
    return _clip_probabilities(p)


def born_vectors(rho, mset: MeasurementSet) -> list[np.ndarray]:
    """Born vector per setting; ``rho`` may be a DensityState or a raw matrix."""
    mat = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho)
    if mat.shape[0] != mset.dim:
        raise DimensionMismatch(f"state dim {mat.shape[0]} vs measurement dim {mset.dim}")
    return [_clip_probabilities(np.einsum("aij,ji->a", m.elements, mat).real) for m in mset]


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Bob's subnormalized conditional states, one ``(outcomes, d, d)`` array per setting."""

    sigma: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.sigma[0].shape[1]

    def __len__(self):
        return len(self.sigma)

    def reduced_states(self) -> list[np.ndarray]:
        return [s.sum(axis=0) for s in self.sigma]

    def no_signaling_deviation(self) -> float:
        red = self.reduced_states()
        return max(float(np.max(np.abs(r - red[0]))) for r in red)


def _resolve_split(rho_ab: DensityState, d_a: int) -> tuple[int, int]:
    if rho_ab.split is not None:
        da, db = rho_ab.split
        if da != d_a:
            raise DimensionMismatch(f"state split {rho_ab.split} but Alice measures dim {d_a}")
        return da, db
    if rho_ab.dim % d_a:
        raise BadFactorization(f"dim {rho_ab.dim} is not divisible by Alice's dim {d_a}")
    return d_a, rho_ab.dim // d_a


def conditional_assemblage(rho_ab: DensityState, alice_set: MeasurementSet) -> Assemblage:
    """``sigma_x^a = Tr_A[(Pi_x^a (x) 1) rho_AB]`` for every setting and outcome."""
    da, db = _resolve_split(rho_ab, alice_set.dim)
    r = rho_ab.matrix.reshape(da, db, da, db)
    sigma = []
    for m in alice_set:
        s = np.einsum("aij,jbic->abc", m.elements, r)
        s = 0.5 * (s + np.conj(np.swapaxes(s, 1, 2)))
        s.setflags(write=False)
        sigma.append(s)
    asm = Assemblage(tuple(sigma))
    dev = asm.no_signaling_deviation()
    if dev > NO_SIGNALING_TOL:
        raise InvalidState(f"assemblage violates no-signaling by {dev:.3g}")
    return asm
