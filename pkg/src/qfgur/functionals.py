"""Steering and entanglement functionals, witnesses, and fine-grained bounds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import bounds
from .core import (
    Assemblage,
    DensityState,
    Measurement,
    MeasurementSet,
    born_vectors,
    conditional_assemblage,
    lambda_max,
    werner_state,
)
from .errors import (
    BadParameter,
    DimensionMismatch,
    DTooLarge,
    LengthMismatch,
    NotProjective,
    SettingCountMismatch,
)
from .families import gellmann_148, pauli_zx, pauli_zx_anti
from .majorization import MajorizationVector, omega_assemble

FLAG_MARGIN = 1e-9
SEESAW_GAIN_TOL = 1e-12
SEESAW_MAX_ITER = 500
MAX_PERM_DIM = 7


def _check_pairing(alice_set: MeasurementSet, bob_set: MeasurementSet):
    if len(alice_set) != len(bob_set):
        raise SettingCountMismatch(f"{len(alice_set)} settings for Alice, {len(bob_set)} for Bob")
    for x, (ma, mb) in enumerate(zip(alice_set, bob_set)):
        if ma.n_outcomes != mb.n_outcomes:
            raise SettingCountMismatch(f"setting {x}: outcome counts differ")


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------


def quantum_functional(assemblage: Assemblage, bob_set: MeasurementSet) -> float:
    """``sum_x sum_a Tr(Phi_x^a sigma_x^a)``."""
    if len(assemblage) != len(bob_set):
        raise SettingCountMismatch(f"{len(assemblage)} assemblage settings vs {len(bob_set)} measurements")
    if assemblage.dim != bob_set.dim:
        raise DimensionMismatch(f"assemblage dim {assemblage.dim} vs Bob dim {bob_set.dim}")
    total = 0.0
    for x, (sig, m) in enumerate(zip(assemblage.sigma, bob_set)):
        if sig.shape[0] != m.n_outcomes:
            raise SettingCountMismatch(f"setting {x}: outcome counts differ")
        total += np.einsum("aij,aji->", m.elements, sig).real
    return float(total)


def joint_functional(rho_ab: DensityState, alice_set: MeasurementSet, bob_set: MeasurementSet) -> float:
    """Same quantity as :func:`quantum_functional`, via ``Tr[(Pi (x) Phi) rho_AB]``."""
    _check_pairing(alice_set, bob_set)
    if rho_ab.dim != alice_set.dim * bob_set.dim:
        raise DimensionMismatch("state dim does not match the two measurement sets")
    total = 0.0
    for ma, mb in zip(alice_set, bob_set):
        for pa, pb in zip(ma.elements, mb.elements):
            total += np.trace(np.kron(pa, pb) @ rho_ab.matrix).real
    return float(total)


@dataclass(frozen=True, eq=False)
class LhsModel:
    """Local hidden state model: weights ``p(lambda)``, Bob's hidden states, responses ``p_lambda(a|x)``."""

    weights: np.ndarray
    hidden_states: np.ndarray  # (L, d, d)
    response: np.ndarray  # (L, N, outcomes)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        states = np.asarray(
            [s.matrix if isinstance(s, DensityState) else s for s in self.hidden_states],
            dtype=np.complex128,
        )
        resp = np.asarray(self.response, dtype=float)
        if w.ndim != 1 or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise BadParameter("hidden weights must be a probability vector")
        if resp.ndim != 3 or resp.shape[0] != len(w) or states.shape[0] != len(w):
            raise BadParameter("need one hidden state and one response table per weight")
        if np.any(resp < -1e-12) or np.any(np.abs(resp.sum(axis=2) - 1.0) > 1e-12):
            raise BadParameter("response rows must be probability vectors")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "hidden_states", states)
        object.__setattr__(self, "response", resp)


def lhs_functional(model: LhsModel, bob_set: MeasurementSet) -> float:
    """``sum_lambda p(lambda) sum_x sum_a p_lambda(a|x) q_{sigma_lambda}(a|x)``."""
    if model.hidden_states.shape[1] != bob_set.dim:
        raise DimensionMismatch("hidden states and Bob's measurements differ in dimension")
    if model.response.shape[1] != len(bob_set):
        raise SettingCountMismatch("response table does not match Bob's settings")
    total = 0.0
    for w, sigma, resp in zip(model.weights, model.hidden_states, model.response):
        for x, q in enumerate(born_vectors(sigma, bob_set)):
            total += w * float(resp[x, : len(q)] @ q)
    return total


def separable_functional(weights, alice_states, bob_states, alice_set, bob_set) -> float:
    """``sum_lambda p(lambda) sum_x sum_a p_{rho_A}(a|x) q_{rho_B}(a|x)`` over a product ensemble."""
    _check_pairing(alice_set, bob_set)
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-12 or np.any(weights < 0):
        raise BadParameter("ensemble weights must be a probability vector")
    if not len(weights) == len(alice_states) == len(bob_states):
        raise BadParameter("one Alice and one Bob state per weight")
    total = 0.0
    for w, ra, rb in zip(weights, alice_states, bob_states):
        pa, pb = born_vectors(ra, alice_set), born_vectors(rb, bob_set)
        total += w * sum(float(p @ q) for p, q in zip(pa, pb))
    return total


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------


@dataclass
class WitnessReport:
    s_q: float
    steering_bound: float
    entanglement_bound: float
    rutkowski_bound: float | None
    steerable: bool
    entangled: bool
    steering_margin: float
    entanglement_margin: float
    rutkowski_margin: float | None
    bob_pairing: list[list[int]] | None = None

    def to_dict(self) -> dict:
        return {
            "s_q": self.s_q,
            "steering_bound": self.steering_bound,
            "entanglement_bound": self.entanglement_bound,
            "rutkowski_bound": self.rutkowski_bound,
            "steerable_flag": self.steerable,
            "entangled_flag": self.entangled,
            "violation_margins": {
                "steering": self.steering_margin,
                "entanglement": self.entanglement_margin,
                "rutkowski": self.rutkowski_margin,
            },
            "bob_pairing": self.bob_pairing,
        }


def best_pairing(assemblage: Assemblage, bob_set: MeasurementSet) -> tuple[MeasurementSet, list[list[int]]]:
    """Reorder each of Bob's bases to maximise its contribution to the quantum functional."""
    relabeled, orders = [], []
    for x, (sig, m) in enumerate(zip(assemblage.sigma, bob_set)):
        if m.n_outcomes > MAX_PERM_DIM:
            raise DTooLarge(f"setting {x}: {m.n_outcomes}! pairings is too many")
        # overlap[a, b] = Tr(Phi_b sigma_a)
        overlap = np.einsum("bij,aji->ab", m.elements, sig).real
        n = m.n_outcomes
        best = max(
            itertools.permutations(range(n)),
            key=lambda perm: sum(overlap[a, perm[a]] for a in range(n)),
        )
        relabeled.append(m.relabel(best))
        orders.append(list(best))
    return MeasurementSet(tuple(relabeled), bob_set.weights, bob_set.label), orders


def witness(
    rho_ab: DensityState,
    alice_set: MeasurementSet,
    bob_set: MeasurementSet,
    maximize_pairing: bool = False,
) -> WitnessReport:
    """Compare the quantum functional of ``rho_ab`` with the LHS and separable bounds."""
    asm = conditional_assemblage(rho_ab, alice_set)
    pairing = None
    if maximize_pairing:
        bob_set, pairing = best_pairing(asm, bob_set)
    s_q = quantum_functional(asm, bob_set)
    steer = bounds.steering_bound(bob_set)
    ent = bounds.entanglement_bound(alice_set, bob_set)
    rut = None
    if bob_set.is_projective and len(bob_set) >= 2:
        rut = bounds.rutkowski_bound(bob_set)
    return WitnessReport(
        s_q=s_q,
        steering_bound=steer,
        entanglement_bound=ent,
        rutkowski_bound=rut,
        steerable=s_q > steer + FLAG_MARGIN,
        entangled=s_q > ent + FLAG_MARGIN,
        steering_margin=s_q - steer,
        entanglement_margin=s_q - ent,
        rutkowski_margin=None if rut is None else s_q - rut,
        bob_pairing=pairing,
    )


# ---------------------------------------------------------------------------
# fine-grained bounds
# ---------------------------------------------------------------------------


def _element(m: Measurement, a: int) -> np.ndarray:
    if not 0 <= a < m.n_outcomes:
        raise BadParameter(f"outcome {a} out of range for {m.label or 'measurement'}")
    return m.elements[a]


def zeta_quantum(alice_set, bob_set, joint_weights, a, b) -> float:
    """Largest eigenvalue of ``sum_xy p(x,y) Pi_x^{a(x)} (x) Phi_y^{b(y)}``: the sup over all states."""
    pxy = np.asarray(joint_weights, dtype=float)
    if pxy.shape != (len(alice_set), len(bob_set)):
        raise DimensionMismatch(f"joint weights need shape {(len(alice_set), len(bob_set))}")
    if np.any(pxy < 0) or abs(pxy.sum() - 1.0) > 1e-12:
        raise BadParameter("joint weights must form a distribution")
    if len(a) != len(alice_set) or len(b) != len(bob_set):
        raise LengthMismatch("one outcome per setting required")
    da, db = alice_set.dim, bob_set.dim
    op = np.zeros((da * db, da * db), dtype=np.complex128)
    for x, y in zip(*np.nonzero(pxy)):
        op += pxy[x, y] * np.kron(_element(alice_set[x], a[x]), _element(bob_set[y], b[y]))
    return lambda_max(op)


def zeta_fgur(alice_set: MeasurementSet, a) -> float:
    """``lambda_max(sum_x p(x) Pi_x^{a(x)})``: the single-system fine-grained bound."""
    if len(a) != len(alice_set):
        raise LengthMismatch("one outcome per setting required")
    if len(alice_set) == 1 and alice_set.is_projective:
        _element(alice_set[0], a[0])
        return 1.0  # a rank-1 projector has norm exactly 1
    op = sum(w * _element(m, ax) for w, m, ax in zip(alice_set.weights, alice_set, a))
    return lambda_max(op)


def _top_vector(h):
    w, v = np.linalg.eigh(h)
    return w[-1], v[:, -1]


def _diagonal_terms(alice_set, bob_set, a, permutation, weights):
    _check_pairing(alice_set, bob_set)
    if len(a) != len(alice_set):
        raise LengthMismatch("one outcome per setting required")
    weights = alice_set.weights if weights is None else np.asarray(weights, dtype=float)
    perm = list(range(bob_set[0].n_outcomes)) if permutation is None else list(permutation)
    terms = []
    for x, (ma, mb) in enumerate(zip(alice_set, bob_set)):
        if sorted(perm) != list(range(mb.n_outcomes)):
            raise BadParameter(f"permutation {perm} is not a bijection on outcomes")
        terms.append((weights[x], _element(ma, a[x]), _element(mb, perm[a[x]])))
    return terms


def zeta_quantum_diagonal(alice_set, bob_set, a, permutation=None, weights=None) -> float:
    """Quantum sup of ``sum_x p(x) p(a(x)|x) q(pi(a(x))|x)``."""
    terms = _diagonal_terms(alice_set, bob_set, a, permutation, weights)
    return lambda_max(sum(w * np.kron(pa, pb) for w, pa, pb in terms))


def zeta_separable(
    alice_set,
    bob_set,
    a,
    permutation=None,
    weights=None,
    restarts: int = 50,
    seed: int = 0,
) -> float:
    """Seesaw lower bound on the separable-state sup of the fine-grained sum.

    Alternates top eigenvectors on each factor; the best of ``restarts``
    seeded random starts is returned.
    """
    terms = _diagonal_terms(alice_set, bob_set, a, permutation, weights)
    rng = np.random.default_rng(seed)
    db = bob_set.dim
    best = -np.inf
    for _ in range(restarts):
        beta = rng.normal(size=db) + 1j * rng.normal(size=db)
        beta /= np.linalg.norm(beta)
        value = -np.inf
        for _ in range(SEESAW_MAX_ITER):
            h_a = sum(w * (beta.conj() @ pb @ beta).real * pa for w, pa, pb in terms)
            _, alpha = _top_vector(h_a)
            h_b = sum(w * (alpha.conj() @ pa @ alpha).real * pb for w, pa, pb in terms)
            new, beta = _top_vector(h_b)
            gain = new - value
            value = new
            if gain < SEESAW_GAIN_TOL:
                break
        best = max(best, value)
    return float(best)


def omega_chain(
    alice_m: Measurement,
    bob_m: Measurement,
    state_class: str = "quantum",
    restarts: int = 20,
    seed: int = 0,
) -> tuple[np.ndarray, MajorizationVector]:
    """The Omega_k chain for one measurement pair and its first-difference vector.

    ``Omega_k`` maximises, over k outcomes of ``alice_m`` and an outcome
    permutation, the sum of the single-outcome bounds ``zeta_{a -> pi(a)}``.
    """
    d = alice_m.n_outcomes
    if bob_m.n_outcomes != d:
        raise LengthMismatch("both measurements need the same number of outcomes")
    if d > MAX_PERM_DIM:
        raise DTooLarge(f"{d}! permutations is too many")
    sa, sb = MeasurementSet((alice_m,)), MeasurementSet((bob_m,))
    zeta = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            if state_class == "quantum":
                zeta[i, j] = lambda_max(np.kron(alice_m.elements[i], bob_m.elements[j]))
            elif state_class == "separable":
                perm = list(range(d))
                perm[i], perm[j] = j, i
                zeta[i, j] = zeta_separable(sa, sb, [i], perm, restarts=restarts, seed=seed)
            else:
                raise BadParameter(f"state class must be 'quantum' or 'separable', not {state_class!r}")
    omegas = np.zeros(d)
    for perm in itertools.permutations(range(d)):
        vals = np.sort(zeta[np.arange(d), list(perm)])[::-1]
        omegas = np.maximum(omegas, np.cumsum(vals))
    omegas = np.maximum.accumulate(omegas)
    return omegas, omega_assemble(omegas)


# ---------------------------------------------------------------------------
# linear steering inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearInequalitySpec:
    coefficients: np.ndarray  # a^(x), one per setting
    outcome_values: np.ndarray  # b per outcome, shared or one row per setting

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        b = np.asarray(self.outcome_values, dtype=float)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(b))):
            raise BadParameter("coefficients and outcome values must be finite")
        if not np.any(c != 0):
            raise BadParameter("at least one coefficient must be nonzero")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "outcome_values", b)


def linear_steering_bound(spec: LinearInequalitySpec, bob_set: MeasurementSet) -> float:
    """``C . W^B / N`` with ``C`` the products ``a^(x) b`` sorted nonincreasing."""
    if not bob_set.is_projective:
        raise NotProjective("linear steering bound needs projective measurements")
    n, d = len(bob_set), bob_set.dim
    if spec.coefficients.shape != (n,):
        raise LengthMismatch(f"need {n} coefficients, got {spec.coefficients.shape}")
    try:
        b = np.broadcast_to(spec.outcome_values, (n, d))
    except ValueError:
        raise LengthMismatch(f"outcome values must have {d} entries per setting") from None
    c = np.sort((spec.coefficients[:, None] * b).ravel())[::-1]
    w = bounds.w_vector(bob_set).components
    w = np.pad(w, (0, max(0, n * d - len(w))))[: n * d]
    return float(c @ w) / n


# ---------------------------------------------------------------------------
# Werner families
# ---------------------------------------------------------------------------


def werner_setup(family: str) -> tuple[MeasurementSet, MeasurementSet]:
    """Alice's and Bob's sets for the Werner examples, paired outcome-by-outcome.

    The singlet anti-correlates, so Bob's qubit bases are reversed; the
    qutrit state correlates real basis vectors directly.
    """
    if family == "qubit":
        return pauli_zx(), pauli_zx_anti()
    if family == "qutrit":
        return gellmann_148(), gellmann_148()
    raise BadParameter(f"unknown Werner family {family!r}")


def werner_s_q(family: str, p: float) -> float:
    alice, bob = werner_setup(family)
    return quantum_functional(conditional_assemblage(werner_state(family, p), alice), bob)


def _bisect_flag(family, flag, lo=0.0, hi=1.0, tol=1e-10):
    alice, bob = werner_setup(family)

    def fires(p):
        return getattr(witness(werner_state(family, p), alice, bob), flag)

    if not fires(hi):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fires(mid):
            hi = mid
        else:
            lo = mid
    return hi


def werner_thresholds(family: str) -> dict:
    """Noise thresholds above which the witnesses certify steering / entanglement.

    The quantum functional is affine in ``p``, so each closed form solves
    ``S_Q(0) + p (S_Q(1) - S_Q(0)) = bound``; bisection on the witness flags
    cross-checks it.
    """
    alice, bob = werner_setup(family)
    s0, s1 = werner_s_q(family, 0.0), werner_s_q(family, 1.0)
    slope = s1 - s0

    def solve(bound):
        p = (bound - s0) / slope
        return p if p < 1.0 else None

    steer = bounds.steering_bound(bob)
    ent = bounds.entanglement_bound(alice, bob)
    rut = bounds.rutkowski_bound(bob)
    return {
        "family": family,
        "s_q_affine": {"intercept": s0, "slope": slope},
        "steering": {"closed_form": solve(steer), "bisection": _bisect_flag(family, "steerable")},
        "entanglement": {"closed_form": solve(ent), "bisection": _bisect_flag(family, "entangled")},
        "rutkowski": {"closed_form": solve(rut)},
        "bounds": {"steering": steer, "entanglement": ent, "rutkowski": rut},
    }

